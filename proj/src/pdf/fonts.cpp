#include "pdfcorpus/pdf/fonts.hpp"

#include <cstdlib>

#include "pdfcorpus/pdf/document.hpp"
#include "pdfcorpus/pdf/lexer.hpp"
#include "pdfcorpus/util.hpp"

namespace pdfcorpus::pdf {

namespace {

// AFM advance widths for codes 32..126.
constexpr int16_t kHelvetica[95] = {
    278, 278, 355, 556, 556, 889, 667, 191, 333, 333, 389, 584, 278, 333, 278, 278,
    556, 556, 556, 556, 556, 556, 556, 556, 556, 556, 278, 278, 584, 584, 584, 556,
    1015, 667, 667, 722, 722, 667, 611, 778, 722, 278, 500, 667, 556, 833, 722, 778,
    667, 778, 722, 667, 611, 722, 667, 944, 667, 667, 611, 278, 278, 278, 469, 556,
    333, 556, 556, 500, 556, 556, 278, 556, 556, 222, 222, 500, 222, 833, 556, 556,
    556, 556, 333, 500, 278, 556, 500, 722, 500, 500, 500, 334, 260, 334, 584};

constexpr int16_t kHelveticaBold[95] = {
    278, 333, 474, 556, 556, 889, 722, 238, 333, 333, 389, 584, 278, 333, 278, 278,
    556, 556, 556, 556, 556, 556, 556, 556, 556, 556, 333, 333, 584, 584, 584, 611,
    975, 722, 722, 722, 722, 667, 611, 778, 722, 278, 556, 722, 611, 833, 722, 778,
    667, 778, 722, 667, 611, 722, 667, 944, 667, 667, 611, 333, 278, 333, 584, 556,
    333, 556, 611, 556, 611, 556, 333, 611, 611, 278, 278, 556, 278, 889, 611, 611,
    611, 611, 389, 556, 333, 611, 556, 778, 556, 556, 500, 389, 280, 389, 584};

constexpr int16_t kTimesRoman[95] = {
    250, 333, 408, 500, 500, 833, 778, 180, 333, 333, 500, 564, 250, 333, 250, 278,
    500, 500, 500, 500, 500, 500, 500, 500, 500, 500, 278, 278, 564, 564, 564, 444,
    921, 722, 667, 667, 722, 611, 556, 722, 722, 333, 389, 722, 611, 889, 722, 722,
    556, 722, 667, 556, 611, 722, 722, 944, 722, 722, 611, 333, 278, 333, 469, 500,
    333, 444, 500, 444, 500, 444, 333, 500, 500, 278, 278, 500, 278, 778, 500, 500,
    500, 500, 333, 389, 278, 500, 500, 722, 500, 500, 444, 480, 200, 480, 541};

constexpr int16_t kTimesBold[95] = {
    250, 333, 555, 500, 500, 1000, 833, 278, 333, 333, 500, 570, 250, 333, 250, 278,
    500, 500, 500, 500, 500, 500, 500, 500, 500, 500, 333, 333, 570, 570, 570, 500,
    930, 722, 667, 722, 722, 667, 611, 778, 778, 389, 500, 778, 667, 944, 722, 778,
    611, 778, 722, 556, 667, 722, 722, 1000, 722, 722, 667, 333, 278, 333, 581, 500,
    333, 500, 556, 444, 556, 444, 333, 500, 556, 278, 333, 556, 278, 833, 556, 500,
    556, 556, 444, 389, 333, 556, 500, 722, 500, 500, 444, 394, 220, 394, 520};

struct Std14Face {
    const char* name;
    const int16_t* widths;  // null = fixed pitch 600
    int ascent;
    int descent;
};

constexpr Std14Face kStd14[] = {
    {"Helvetica-BoldOblique", kHelveticaBold, 718, -207},
    {"Helvetica-Oblique", kHelvetica, 718, -207},
    {"Helvetica-Bold", kHelveticaBold, 718, -207},
    {"Helvetica", kHelvetica, 718, -207},
    {"Times-BoldItalic", kTimesBold, 676, -205},
    {"Times-Italic", kTimesRoman, 683, -217},
    {"Times-Bold", kTimesBold, 676, -205},
    {"Times-Roman", kTimesRoman, 683, -217},
    {"Courier-BoldOblique", nullptr, 629, -157},
    {"Courier-Oblique", nullptr, 629, -157},
    {"Courier-Bold", nullptr, 629, -157},
    {"Courier", nullptr, 629, -157},
    {"Arial", kHelvetica, 718, -207},
    {"Symbol", nullptr, 693, -216},
    {"ZapfDingbats", nullptr, 693, -216},
};

std::array<char32_t, 256> build_latin_base() {
    std::array<char32_t, 256> m{};
    for (int c = 32; c <= 126; ++c) m[static_cast<size_t>(c)] = static_cast<char32_t>(c);
    return m;
}

}  // namespace

const std::array<char32_t, 256>& win_ansi_encoding() {
    static const std::array<char32_t, 256> table = [] {
        auto m = build_latin_base();
        for (int c = 0xA0; c <= 0xFF; ++c) m[static_cast<size_t>(c)] = static_cast<char32_t>(c);
        const char32_t high[32] = {0x20AC, 0,      0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
                                   0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0,      0x017D, 0,
                                   0,      0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
                                   0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0,      0x017E, 0x0178};
        for (int i = 0; i < 32; ++i) m[static_cast<size_t>(0x80 + i)] = high[i];
        return m;
    }();
    return table;
}

const std::array<char32_t, 256>& mac_roman_encoding() {
    static const std::array<char32_t, 256> table = [] {
        auto m = build_latin_base();
        const char32_t high[128] = {
            0x00C4, 0x00C5, 0x00C7, 0x00C9, 0x00D1, 0x00D6, 0x00DC, 0x00E1, 0x00E0, 0x00E2,
            0x00E4, 0x00E3, 0x00E5, 0x00E7, 0x00E9, 0x00E8, 0x00EA, 0x00EB, 0x00ED, 0x00EC,
            0x00EE, 0x00EF, 0x00F1, 0x00F3, 0x00F2, 0x00F4, 0x00F6, 0x00F5, 0x00FA, 0x00F9,
            0x00FB, 0x00FC, 0x2020, 0x00B0, 0x00A2, 0x00A3, 0x00A7, 0x2022, 0x00B6, 0x00DF,
            0x00AE, 0x00A9, 0x2122, 0x00B4, 0x00A8, 0x2260, 0x00C6, 0x00D8, 0x221E, 0x00B1,
            0x2264, 0x2265, 0x00A5, 0x00B5, 0x2202, 0x2211, 0x220F, 0x03C0, 0x222B, 0x00AA,
            0x00BA, 0x03A9, 0x00E6, 0x00F8, 0x00BF, 0x00A1, 0x00AC, 0x221A, 0x0192, 0x2248,
            0x2206, 0x00AB, 0x00BB, 0x2026, 0x00A0, 0x00C0, 0x00C3, 0x00D5, 0x0152, 0x0153,
            0x2013, 0x2014, 0x201C, 0x201D, 0x2018, 0x2019, 0x00F7, 0x25CA, 0x00FF, 0x0178,
            0x2044, 0x20AC, 0x2039, 0x203A, 0xFB01, 0xFB02, 0x2021, 0x00B7, 0x201A, 0x201E,
            0x2030, 0x00C2, 0x00CA, 0x00C1, 0x00CB, 0x00C8, 0x00CD, 0x00CE, 0x00CF, 0x00CC,
            0x00D3, 0x00D4, 0xF8FF, 0x00D2, 0x00DA, 0x00DB, 0x00D9, 0x0131, 0x02C6, 0x02DC,
            0x00AF, 0x02D8, 0x02D9, 0x02DA, 0x00B8, 0x02DD, 0x02DB, 0x02C7};
        for (int i = 0; i < 128; ++i) m[static_cast<size_t>(0x80 + i)] = high[i];
        return m;
    }();
    return table;
}

const std::array<char32_t, 256>& standard_encoding() {
    static const std::array<char32_t, 256> table = [] {
        auto m = build_latin_base();
        m[39] = 0x2019;  // quoteright
        m[96] = 0x2018;  // quoteleft
        m[0xA1] = 0x00A1;
        m[0xA2] = 0x00A2;
        m[0xA3] = 0x00A3;
        m[0xA4] = 0x2044;
        m[0xA5] = 0x00A5;
        m[0xA7] = 0x00A7;
        m[0xA8] = 0x00A4;
        m[0xA9] = 0x0027;
        m[0xAA] = 0x201C;
        m[0xAB] = 0x00AB;
        m[0xB5] = 0x2022;
        m[0xBA] = 0x201D;
        m[0xBB] = 0x00BB;
        m[0xBC] = 0x2026;
        m[0xBD] = 0x2030;
        m[0xBF] = 0x00BF;
        m[0xC1] = 0x0060;
        m[0xD0] = 0x2014;
        m[0xE1] = 0x00C6;
        m[0xE8] = 0x0141;
        m[0xE9] = 0x00D8;
        m[0xEA] = 0x0152;
        m[0xF1] = 0x00E6;
        m[0xF8] = 0x0142;
        m[0xF9] = 0x00F8;
        m[0xFA] = 0x0153;
        m[0xFB] = 0x00DF;
        return m;
    }();
    return table;
}

char32_t glyph_name_to_unicode(std::string_view name) {
    static const std::map<std::string, char32_t, std::less<>> table = {
        {"space", 0x20}, {"exclam", 0x21}, {"quotedbl", 0x22}, {"numbersign", 0x23},
        {"dollar", 0x24}, {"percent", 0x25}, {"ampersand", 0x26}, {"quotesingle", 0x27},
        {"parenleft", 0x28}, {"parenright", 0x29}, {"asterisk", 0x2A}, {"plus", 0x2B},
        {"comma", 0x2C}, {"hyphen", 0x2D}, {"period", 0x2E}, {"slash", 0x2F},
        {"zero", 0x30}, {"one", 0x31}, {"two", 0x32}, {"three", 0x33}, {"four", 0x34},
        {"five", 0x35}, {"six", 0x36}, {"seven", 0x37}, {"eight", 0x38}, {"nine", 0x39},
        {"colon", 0x3A}, {"semicolon", 0x3B}, {"less", 0x3C}, {"equal", 0x3D},
        {"greater", 0x3E}, {"question", 0x3F}, {"at", 0x40}, {"bracketleft", 0x5B},
        {"backslash", 0x5C}, {"bracketright", 0x5D}, {"asciicircum", 0x5E},
        {"underscore", 0x5F}, {"grave", 0x60}, {"braceleft", 0x7B}, {"bar", 0x7C},
        {"braceright", 0x7D}, {"asciitilde", 0x7E},
        {"quoteleft", 0x2018}, {"quoteright", 0x2019}, {"quotedblleft", 0x201C},
        {"quotedblright", 0x201D}, {"quotesinglbase", 0x201A}, {"quotedblbase", 0x201E},
        {"endash", 0x2013}, {"emdash", 0x2014}, {"bullet", 0x2022}, {"dagger", 0x2020},
        {"daggerdbl", 0x2021}, {"ellipsis", 0x2026}, {"perthousand", 0x2030},
        {"Euro", 0x20AC}, {"trademark", 0x2122}, {"copyright", 0x00A9},
        {"registered", 0x00AE}, {"degree", 0x00B0}, {"plusminus", 0x00B1},
        {"acute", 0x00B4}, {"cedilla", 0x00B8}, {"dieresis", 0x00A8},
        {"ordfeminine", 0x00AA}, {"ordmasculine", 0x00BA}, {"guillemotleft", 0x00AB},
        {"guillemotright", 0x00BB}, {"exclamdown", 0x00A1}, {"questiondown", 0x00BF},
        {"florin", 0x0192}, {"fraction", 0x2044}, {"germandbls", 0x00DF},
        {"agrave", 0xE0}, {"aacute", 0xE1}, {"acircumflex", 0xE2}, {"atilde", 0xE3},
        {"adieresis", 0xE4}, {"aring", 0xE5}, {"ae", 0xE6}, {"ccedilla", 0xE7},
        {"egrave", 0xE8}, {"eacute", 0xE9}, {"ecircumflex", 0xEA}, {"edieresis", 0xEB},
        {"igrave", 0xEC}, {"iacute", 0xED}, {"icircumflex", 0xEE}, {"idieresis", 0xEF},
        {"eth", 0xF0}, {"ntilde", 0xF1}, {"ograve", 0xF2}, {"oacute", 0xF3},
        {"ocircumflex", 0xF4}, {"otilde", 0xF5}, {"odieresis", 0xF6}, {"oslash", 0xF8},
        {"ugrave", 0xF9}, {"uacute", 0xFA}, {"ucircumflex", 0xFB}, {"udieresis", 0xFC},
        {"yacute", 0xFD}, {"thorn", 0xFE}, {"ydieresis", 0xFF},
        {"Agrave", 0xC0}, {"Aacute", 0xC1}, {"Acircumflex", 0xC2}, {"Atilde", 0xC3},
        {"Adieresis", 0xC4}, {"Aring", 0xC5}, {"AE", 0xC6}, {"Ccedilla", 0xC7},
        {"Egrave", 0xC8}, {"Eacute", 0xC9}, {"Ecircumflex", 0xCA}, {"Edieresis", 0xCB},
        {"Igrave", 0xCC}, {"Iacute", 0xCD}, {"Icircumflex", 0xCE}, {"Idieresis", 0xCF},
        {"Eth", 0xD0}, {"Ntilde", 0xD1}, {"Ograve", 0xD2}, {"Oacute", 0xD3},
        {"Ocircumflex", 0xD4}, {"Otilde", 0xD5}, {"Odieresis", 0xD6}, {"Oslash", 0xD8},
        {"Ugrave", 0xD9}, {"Uacute", 0xDA}, {"Ucircumflex", 0xDB}, {"Udieresis", 0xDC},
        {"Yacute", 0xDD}, {"Thorn", 0xDE},
        // Polish and other Latin Extended-A glyphs.
        {"aogonek", 0x105}, {"Aogonek", 0x104}, {"cacute", 0x107}, {"Cacute", 0x106},
        {"eogonek", 0x119}, {"Eogonek", 0x118}, {"lslash", 0x142}, {"Lslash", 0x141},
        {"nacute", 0x144}, {"Nacute", 0x143}, {"sacute", 0x15B}, {"Sacute", 0x15A},
        {"zacute", 0x17A}, {"Zacute", 0x179}, {"zdotaccent", 0x17C}, {"Zdotaccent", 0x17B},
        {"scaron", 0x161}, {"Scaron", 0x160}, {"zcaron", 0x17E}, {"Zcaron", 0x17D},
        {"oe", 0x153}, {"OE", 0x152}, {"dotlessi", 0x131},
    };
    if (name.size() == 1) {
        char c = name[0];
        if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            return static_cast<char32_t>(c);
        }
    }
    if (auto it = table.find(name); it != table.end()) return it->second;
    if (name.size() >= 7 && name.substr(0, 3) == "uni") {
        char32_t cp = 0;
        for (char c : name.substr(3, 4)) {
            int v;
            if (c >= '0' && c <= '9') v = c - '0';
            else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
            else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
            else return 0;
            cp = (cp << 4) | static_cast<char32_t>(v);
        }
        return cp;
    }
    if (name.size() >= 5 && name[0] == 'u') {
        char32_t cp = 0;
        for (char c : name.substr(1)) {
            int v;
            if (c >= '0' && c <= '9') v = c - '0';
            else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
            else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
            else return 0;
            cp = (cp << 4) | static_cast<char32_t>(v);
        }
        return cp <= 0x10FFFF ? cp : 0;
    }
    return 0;
}

bool standard14_metrics(std::string_view base_font, FontInfo* out) {
    // Strip subset tag (ABCDEF+Name).
    size_t plus = base_font.find('+');
    if (plus != std::string_view::npos) base_font = base_font.substr(plus + 1);
    for (const auto& face : kStd14) {
        if (base_font.find(face.name) != std::string_view::npos) {
            out->ascent1000 = face.ascent;
            out->descent1000 = face.descent;
            out->widths.clear();
            if (face.widths != nullptr) {
                for (int c = 32; c <= 126; ++c) {
                    out->widths[static_cast<uint32_t>(c)] = face.widths[c - 32];
                }
                out->default_width = 500;
            } else {
                out->default_width = 600;
                for (int c = 32; c <= 126; ++c) out->widths[static_cast<uint32_t>(c)] = 600;
            }
            return true;
        }
    }
    return false;
}

namespace {

void parse_tounicode_cmap(std::string_view cmap_bytes, std::map<uint32_t, std::string>* out) {
    Lexer lex(cmap_bytes);
    auto code_of = [](const std::string& bytes) -> uint32_t {
        uint32_t v = 0;
        for (unsigned char c : bytes) v = (v << 8) | c;
        return v;
    };
    auto utf8_of = [](const std::string& bytes) {
        // Destination strings are UTF-16BE code units.
        std::string out8;
        if (bytes.size() == 1) {
            pdfcorpus::utf8_append(out8, static_cast<unsigned char>(bytes[0]));
            return out8;
        }
        size_t i = 0;
        while (i + 1 < bytes.size()) {
            char32_t unit = (static_cast<unsigned char>(bytes[i]) << 8) |
                            static_cast<unsigned char>(bytes[i + 1]);
            i += 2;
            if (unit >= 0xD800 && unit <= 0xDBFF && i + 1 < bytes.size()) {
                char32_t low = (static_cast<unsigned char>(bytes[i]) << 8) |
                               static_cast<unsigned char>(bytes[i + 1]);
                if (low >= 0xDC00 && low <= 0xDFFF) {
                    unit = 0x10000 + ((unit - 0xD800) << 10) + (low - 0xDC00);
                    i += 2;
                }
            }
            pdfcorpus::utf8_append(out8, unit);
        }
        return out8;
    };

    while (true) {
        Token t = lex.next();
        if (t.type == TokenType::end) break;
        if (t.type != TokenType::keyword) continue;
        if (t.text == "beginbfchar") {
            while (true) {
                const Token& a = lex.peek();
                if (a.type != TokenType::string) break;
                Token src = lex.next();
                Token dst = lex.next();
                if (dst.type != TokenType::string) break;
                (*out)[code_of(src.text)] = utf8_of(dst.text);
            }
        } else if (t.text == "beginbfrange") {
            while (true) {
                const Token& a = lex.peek();
                if (a.type != TokenType::string) break;
                Token lo = lex.next();
                Token hi = lex.next();
                if (hi.type != TokenType::string) break;
                uint32_t lo_code = code_of(lo.text);
                uint32_t hi_code = code_of(hi.text);
                if (hi_code < lo_code || hi_code - lo_code > 65535) break;
                const Token& d = lex.peek();
                if (d.type == TokenType::string) {
                    Token dst = lex.next();
                    // Increment the last UTF-16 unit across the range.
                    for (uint32_t c = lo_code; c <= hi_code; ++c) {
                        std::string bytes = dst.text;
                        uint32_t delta = c - lo_code;
                        if (bytes.size() >= 2) {
                            uint32_t unit = ((static_cast<unsigned char>(bytes[bytes.size() - 2])
                                              << 8) |
                                             static_cast<unsigned char>(bytes.back())) +
                                            delta;
                            bytes[bytes.size() - 2] = static_cast<char>((unit >> 8) & 0xFF);
                            bytes[bytes.size() - 1] = static_cast<char>(unit & 0xFF);
                        }
                        (*out)[c] = utf8_of(bytes);
                    }
                } else if (d.type == TokenType::array_open) {
                    lex.next();
                    uint32_t c = lo_code;
                    while (true) {
                        const Token& e = lex.peek();
                        if (e.type == TokenType::array_close || e.type == TokenType::end) {
                            lex.next();
                            break;
                        }
                        Token dst = lex.next();
                        if (dst.type == TokenType::string && c <= hi_code) {
                            (*out)[c++] = utf8_of(dst.text);
                        }
                    }
                } else {
                    break;
                }
            }
        }
    }
}

void load_cid_widths(const Document& doc, const Object& w_array, FontInfo* font) {
    Object w = doc.resolve(w_array);
    if (!w.is_array()) return;
    const Array& a = w.array();
    size_t i = 0;
    while (i < a.size()) {
        Object first_obj = doc.resolve(a[i]);
        if (!first_obj.is_number() || i + 1 >= a.size()) break;
        int64_t first = first_obj.as_int();
        Object second = doc.resolve(a[i + 1]);
        if (second.is_array()) {
            const Array& ws = second.array();
            for (size_t k = 0; k < ws.size(); ++k) {
                font->widths[static_cast<uint32_t>(first + static_cast<int64_t>(k))] =
                    doc.resolve(ws[k]).as_real(font->default_width);
            }
            i += 2;
        } else if (second.is_number() && i + 2 < a.size()) {
            int64_t last = second.as_int();
            double width = doc.resolve(a[i + 2]).as_real(font->default_width);
            if (last >= first && last - first <= 65535) {
                for (int64_t c = first; c <= last; ++c) {
                    font->widths[static_cast<uint32_t>(c)] = width;
                }
            }
            i += 3;
        } else {
            break;
        }
    }
}

}  // namespace

FontInfo load_font(const Document& doc, const Object& font_obj) {
    FontInfo font;
    font.simple_map = standard_encoding();
    Object f = doc.resolve(font_obj);
    if (!f.is_dict()) {
        standard14_metrics("Helvetica", &font);
        return font;
    }
    font.subtype = doc.resolve(f.get("Subtype")).name();
    std::string base_font = doc.resolve(f.get("BaseFont")).name();

    if (font.subtype == "Type0") {
        font.is_cid = true;
        font.default_width = 1000;
        Object descendants = doc.resolve(f.get("DescendantFonts"));
        Object cid_font;
        if (descendants.is_array() && !descendants.array().empty()) {
            cid_font = doc.resolve(descendants.array()[0]);
        }
        if (cid_font.is_dict()) {
            font.default_width = doc.resolve(cid_font.get("DW")).as_real(1000);
            load_cid_widths(doc, cid_font.get("W"), &font);
            Object fd = doc.resolve(cid_font.get("FontDescriptor"));
            if (fd.is_dict()) {
                font.ascent1000 = doc.resolve(fd.get("Ascent")).as_real(font.ascent1000);
                font.descent1000 = doc.resolve(fd.get("Descent")).as_real(font.descent1000);
            }
        }
    } else if (font.subtype == "Type3") {
        font.is_type3 = true;
        Object matrix = doc.resolve(f.get("FontMatrix"));
        if (matrix.is_array() && matrix.array().size() == 6) {
            font.type3_scale = doc.resolve(matrix.array()[0]).as_real(0.001);
        }
        // Type3 /Widths are in glyph space; normalize to 1000 units.
        Object widths = doc.resolve(f.get("Widths"));
        int first_char = static_cast<int>(doc.resolve(f.get("FirstChar")).as_int(0));
        if (widths.is_array()) {
            const Array& wa = widths.array();
            for (size_t k = 0; k < wa.size(); ++k) {
                double w = doc.resolve(wa[k]).as_real(0);
                font.widths[static_cast<uint32_t>(first_char + static_cast<int>(k))] =
                    w * font.type3_scale * 1000.0;
            }
        }
        font.default_width = 0;
    } else {
        // Simple fonts: Type1 / TrueType / MMType1.
        bool have_builtin = standard14_metrics(base_font, &font);
        Object widths = doc.resolve(f.get("Widths"));
        int first_char = static_cast<int>(doc.resolve(f.get("FirstChar")).as_int(0));
        if (widths.is_array()) {
            const Array& wa = widths.array();
            for (size_t k = 0; k < wa.size(); ++k) {
                double w = doc.resolve(wa[k]).as_real(-1);
                if (w >= 0) {
                    font.widths[static_cast<uint32_t>(first_char + static_cast<int>(k))] = w;
                }
            }
        } else if (!have_builtin) {
            standard14_metrics("Helvetica", &font);
        }
        Object fd = doc.resolve(f.get("FontDescriptor"));
        if (fd.is_dict()) {
            double asc = doc.resolve(fd.get("Ascent")).as_real(0);
            double desc = doc.resolve(fd.get("Descent")).as_real(0);
            if (asc > 0) font.ascent1000 = asc;
            if (desc < 0) font.descent1000 = desc;
            double mw = doc.resolve(fd.get("MissingWidth")).as_real(-1);
            if (mw >= 0) font.default_width = mw;
        }
    }

    // Encoding: base name, then /Differences.
    Object enc = doc.resolve(f.get("Encoding"));
    if (enc.is_name()) {
        if (enc.name() == "WinAnsiEncoding") {
            font.simple_map = win_ansi_encoding();
        } else if (enc.name() == "MacRomanEncoding") {
            font.simple_map = mac_roman_encoding();
        } else if (enc.name() == "StandardEncoding" || enc.name() == "MacExpertEncoding") {
            font.simple_map = standard_encoding();
        }
        // Identity-H / Identity-V on Type0: code == CID, nothing to map here.
    } else if (enc.is_dict()) {
        Object base = doc.resolve(enc.get("BaseEncoding"));
        if (base.is_name()) {
            if (base.name() == "WinAnsiEncoding") {
                font.simple_map = win_ansi_encoding();
            } else if (base.name() == "MacRomanEncoding") {
                font.simple_map = mac_roman_encoding();
            }
        }
        Object diffs = doc.resolve(enc.get("Differences"));
        if (diffs.is_array()) {
            int code = 0;
            for (const auto& item_raw : diffs.array()) {
                Object item = doc.resolve(item_raw);
                if (item.is_number()) {
                    code = static_cast<int>(item.as_int());
                } else if (item.is_name() && code >= 0 && code < 256) {
                    font.simple_map[static_cast<size_t>(code)] =
                        glyph_name_to_unicode(item.name());
                    ++code;
                }
            }
        }
    }

    Object tounicode = doc.resolve(f.get("ToUnicode"));
    if (const Stream* s = tounicode.stream()) {
        DecodeResult dec = doc.decode(*s);
        if (dec.ok && !dec.unsupported_filter) {
            parse_tounicode_cmap(dec.data, &font.cmap);
            font.has_tounicode = !font.cmap.empty();
        }
    }
    return font;
}

std::vector<Glyph> FontInfo::decode_string(std::string_view bytes) const {
    std::vector<Glyph> glyphs;
    if (is_cid) {
        glyphs.reserve(bytes.size() / 2 + 1);
        for (size_t i = 0; i + 1 < bytes.size(); i += 2) {
            Glyph g;
            g.code = (static_cast<unsigned char>(bytes[i]) << 8) |
                     static_cast<unsigned char>(bytes[i + 1]);
            g.width1000 = width_of(g.code);
            if (auto it = cmap.find(g.code); it != cmap.end()) {
                g.utf8 = it->second;
            } else {
                g.unmapped = true;
                g.utf8 = "\xEF\xBF\xBD";  // U+FFFD
            }
            g.is_space = g.utf8 == " ";
            glyphs.push_back(std::move(g));
        }
        return glyphs;
    }

    glyphs.reserve(bytes.size());
    for (unsigned char code : bytes) {
        Glyph g;
        g.code = code;
        g.width1000 = width_of(code);
        if (auto it = cmap.find(code); it != cmap.end()) {
            g.utf8 = it->second;
        } else if (is_type3 && !has_tounicode) {
            g.unmapped = true;  // advances honored, text dropped
        } else {
            char32_t cp = simple_map[code];
            if (cp != 0) {
                pdfcorpus::utf8_append(g.utf8, cp);
            } else {
                g.unmapped = true;
                g.utf8 = "\xEF\xBF\xBD";
            }
        }
        g.is_space = code == 32 || g.utf8 == " ";
        glyphs.push_back(std::move(g));
    }
    return glyphs;
}

}  // namespace pdfcorpus::pdf
