#include "pdfcorpus/hocr.hpp"

#include <cctype>
#include <cstdlib>

#include "pdfcorpus/util.hpp"

namespace pdfcorpus {

namespace {

std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        size_t semi = s.find(';', i);
        if (semi == std::string_view::npos || semi - i > 10) {
            out.push_back(s[i++]);
            continue;
        }
        std::string_view ent = s.substr(i + 1, semi - i - 1);
        if (ent == "amp") out.push_back('&');
        else if (ent == "lt") out.push_back('<');
        else if (ent == "gt") out.push_back('>');
        else if (ent == "quot") out.push_back('"');
        else if (ent == "apos") out.push_back('\'');
        else if (ent == "nbsp") out.push_back(' ');
        else if (!ent.empty() && ent[0] == '#') {
            char32_t cp = 0;
            if (ent.size() > 2 && (ent[1] == 'x' || ent[1] == 'X')) {
                cp = static_cast<char32_t>(std::strtoul(std::string(ent.substr(2)).c_str(), nullptr, 16));
            } else {
                cp = static_cast<char32_t>(std::strtoul(std::string(ent.substr(1)).c_str(), nullptr, 10));
            }
            if (cp != 0 && cp <= 0x10FFFF) utf8_append(out, cp);
        } else {
            out.append(s.substr(i, semi - i + 1));
        }
        i = semi + 1;
    }
    return out;
}

std::string attr_value(std::string_view tag, std::string_view name) {
    size_t at = 0;
    while ((at = tag.find(name, at)) != std::string_view::npos) {
        size_t after = at + name.size();
        // Must be a standalone attribute name followed by =.
        bool boundary_ok = at == 0 || tag[at - 1] == ' ' || tag[at - 1] == '\t';
        size_t eq = tag.find_first_not_of(" \t", after);
        if (!boundary_ok || eq == std::string_view::npos || tag[eq] != '=') {
            at = after;
            continue;
        }
        size_t q = tag.find_first_not_of(" \t", eq + 1);
        if (q == std::string_view::npos) return "";
        char quote = tag[q];
        if (quote != '"' && quote != '\'') return "";
        size_t end = tag.find(quote, q + 1);
        if (end == std::string_view::npos) return "";
        return std::string(tag.substr(q + 1, end - q - 1));
    }
    return "";
}

bool parse_bbox(std::string_view title, double* x0, double* y0, double* x1, double* y1) {
    size_t at = title.find("bbox");
    if (at == std::string_view::npos) return false;
    const char* p = title.data() + at + 4;
    const char* end = title.data() + title.size();
    double vals[4];
    for (int i = 0; i < 4; ++i) {
        while (p < end && (*p == ' ' || *p == '\t')) ++p;
        char* next = nullptr;
        vals[i] = std::strtod(p, &next);
        if (next == p) return false;
        p = next;
    }
    *x0 = vals[0];
    *y0 = vals[1];
    *x1 = vals[2];
    *y1 = vals[3];
    return true;
}

std::string strip_tags(std::string_view s) {
    std::string out;
    bool in_tag = false;
    for (char c : s) {
        if (c == '<') in_tag = true;
        else if (c == '>') in_tag = false;
        else if (!in_tag) out.push_back(c);
    }
    return out;
}

}  // namespace

std::vector<PageText> import_hocr(std::string_view html) {
    std::vector<PageText> pages;
    PageText* page = nullptr;
    double page_h = 0;
    int explicit_lines = 0;
    bool saw_line_elements = false;

    size_t pos = 0;
    while (pos < html.size()) {
        size_t open = html.find('<', pos);
        if (open == std::string_view::npos) break;
        size_t close = html.find('>', open);
        if (close == std::string_view::npos) break;
        std::string_view tag = html.substr(open + 1, close - open - 1);
        pos = close + 1;

        std::string cls = attr_value(tag, "class");
        if (cls.find("ocr_page") != std::string::npos) {
            if (page != nullptr) {
                page->line_count = saw_line_elements ? explicit_lines : count_lines(*page);
            }
            PageText pt;
            pt.page_index = static_cast<int>(pages.size());
            double x0, y0, x1, y1;
            if (parse_bbox(attr_value(tag, "title"), &x0, &y0, &x1, &y1)) {
                pt.width = x1 - x0;
                pt.height = y1 - y0;
            }
            pages.push_back(std::move(pt));
            page = &pages.back();
            page_h = page->height;
            explicit_lines = 0;
            saw_line_elements = false;
            continue;
        }
        if (cls.find("ocr_line") != std::string::npos ||
            cls.find("ocrx_line") != std::string::npos) {
            saw_line_elements = true;
            ++explicit_lines;
            continue;
        }
        if (cls.find("ocrx_word") != std::string::npos && page != nullptr) {
            double x0, y0, x1, y1;
            if (!parse_bbox(attr_value(tag, "title"), &x0, &y0, &x1, &y1)) continue;
            size_t text_end = html.find("</span", pos);
            if (text_end == std::string_view::npos) continue;
            std::string text = trim(decode_entities(strip_tags(html.substr(pos, text_end - pos))));
            pos = text_end;
            if (text.empty()) continue;
            // Split on embedded whitespace; shares the word box when split.
            for (const auto& piece : split(text, ' ')) {
                if (piece.empty()) continue;
                Token t;
                t.text = piece;
                t.page_index = page->page_index;
                t.bbox = Rect{x0, page_h - y1, x1, page_h - y0};
                t.visible = true;
                if (t.bbox.valid()) page->tokens.push_back(std::move(t));
            }
        }
    }
    if (page != nullptr) {
        page->line_count = saw_line_elements ? explicit_lines : count_lines(*page);
    }
    return pages;
}

}  // namespace pdfcorpus
