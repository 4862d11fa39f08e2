#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pdfcorpus/pdf/object.hpp"

namespace pdfcorpus::pdf {

class Document;

// One show-string glyph after code decoding.
struct Glyph {
    uint32_t code = 0;
    double width1000 = 500;     // glyph-space advance, 1000 units per em
    std::string utf8;           // empty when no mapping exists
    bool is_space = false;
    bool unmapped = false;
};

// Everything the interpreter needs from one font resource: advance widths,
// code-to-Unicode mapping, vertical metrics. CID (Type0) fonts use 2-byte
// codes; all others 1-byte.
struct FontInfo {
    std::string subtype;
    bool is_cid = false;
    bool is_type3 = false;
    double type3_scale = 0.001;  // FontMatrix[0]; standard fonts use 1/1000

    std::map<uint32_t, double> widths;  // code (or CID) -> width, 1000 units
    double default_width = 500;
    double ascent1000 = 718;
    double descent1000 = -207;

    std::array<char32_t, 256> simple_map{};   // simple-font code -> Unicode
    std::map<uint32_t, std::string> cmap;     // ToUnicode overrides, UTF-8
    bool has_tounicode = false;

    double width_of(uint32_t code) const {
        auto it = widths.find(code);
        return it != widths.end() ? it->second : default_width;
    }

    std::vector<Glyph> decode_string(std::string_view bytes) const;
};

// Builds a FontInfo from a /Font resource dictionary, resolving indirect
// pieces through the document.
FontInfo load_font(const Document& doc, const Object& font_obj);

// Standard-14 metrics lookup by BaseFont name (suffix-matched, so subset tags
// like ABCDEF+Helvetica work). Returns false when the face is not built in.
bool standard14_metrics(std::string_view base_font, FontInfo* out);

// Encoding tables; each maps byte code to Unicode (0 = unmapped).
const std::array<char32_t, 256>& win_ansi_encoding();
const std::array<char32_t, 256>& mac_roman_encoding();
const std::array<char32_t, 256>& standard_encoding();

// Adobe glyph name to Unicode (subset plus uniXXXX forms); 0 when unknown.
char32_t glyph_name_to_unicode(std::string_view name);

}  // namespace pdfcorpus::pdf
