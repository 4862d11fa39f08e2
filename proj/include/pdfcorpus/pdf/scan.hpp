#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdfcorpus/pdf/document.hpp"

namespace pdfcorpus::pdf {

// Structural facts about one document, no OCR involved.
struct ScanReport {
    uint64_t visible_text_len = 0;  // code points shown with render modes 0,1,2,4,5,6
    uint64_t hidden_text_len = 0;   // render mode 3 or zero fill alpha
    uint64_t image_count = 0;       // distinct image XObjects + inline images
    int page_count = 0;
    std::string version;
    std::optional<int> creation_year;      // only when in the plausible range
    std::optional<int> raw_creation_year;  // whatever the file said
    std::string creator_vendor;
    uint64_t unmapped_glyphs = 0;
    std::vector<std::string> warnings;
};

ScanReport scan(const Document& doc);

struct BornDigitalThresholds {
    uint64_t min_visible_text = 100;  // strictly greater than
    uint64_t max_hidden_text = 0;
    uint64_t max_images = 0;
};

// visible > 100 and no hidden text and no images, by default.
bool classify_born_digital(const ScanReport& report, const BornDigitalThresholds& t = {});

struct CreationYear {
    int year = 0;
    bool valid = false;  // within [1980, current_year + 1]
};

// Lenient `D:YYYY...` parse; bare years accepted; nullopt on garbage.
std::optional<CreationYear> parse_creation_date(std::string_view raw, int current_year);

int current_utc_year();

// Canonical tool vendor from Creator/Producer strings ("Microsoft® Word 2016"
// -> "microsoft"); unrecognized tools yield the lowercased first token.
std::string normalize_creator(std::string_view creator, std::string_view producer);

}  // namespace pdfcorpus::pdf
