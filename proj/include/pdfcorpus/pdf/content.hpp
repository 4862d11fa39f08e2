#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "pdfcorpus/pdf/object.hpp"

namespace pdfcorpus::pdf {

// One content-stream operator with its operands. Inline images arrive as a
// single "BI" op carrying the image dict; the binary data is skipped.
struct ContentOp {
    std::string op;
    std::vector<Object> operands;
    Dict inline_image_dict;
};

void for_each_content_op(std::string_view content,
                         const std::function<void(const ContentOp&)>& fn);

}  // namespace pdfcorpus::pdf
