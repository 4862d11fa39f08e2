#pragma once

#include <string_view>
#include <vector>

#include "pdfcorpus/extract.hpp"

namespace pdfcorpus {

// Reads hOCR output (ocr_page divs with ocrx_word spans) into the same
// PageText shape the native extractor produces, so OCRed and born-digital
// documents meet in one format. hOCR boxes are top-left based; they are
// flipped to the bottom-left convention here.
std::vector<PageText> import_hocr(std::string_view html);

}  // namespace pdfcorpus
