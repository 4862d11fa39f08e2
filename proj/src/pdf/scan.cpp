#include "pdfcorpus/pdf/scan.hpp"

#include <cctype>
#include <chrono>
#include <ctime>
#include <set>

#include "pdfcorpus/pdf/content.hpp"
#include "pdfcorpus/pdf/fonts.hpp"
#include "pdfcorpus/util.hpp"

namespace pdfcorpus::pdf {

namespace {

// Distinct image XObjects reachable from a resources dict, descending into
// form XObjects. Direct (non-ref) image objects are keyed by page+name.
void count_resource_images(const Document& doc, const Object& resources,
                           std::set<std::pair<int, int>>* seen_refs,
                           std::set<std::string>* seen_direct, const std::string& path_key,
                           std::set<std::pair<int, int>>* visited_forms, int depth) {
    if (depth > 16) return;
    Object res = doc.resolve(resources);
    if (!res.is_dict()) return;
    Object xobjects_raw = res.get("XObject");
    Object xobjects = doc.resolve(xobjects_raw);
    if (!xobjects.is_dict()) return;
    for (const auto& [name, entry] : xobjects.dict()) {
        std::pair<int, int> key{-1, -1};
        if (entry.is_ref()) key = {entry.ref().num, entry.ref().gen};
        Object x = doc.resolve(entry);
        const Dict& xd = x.dict();
        auto subtype_it = xd.find("Subtype");
        std::string subtype =
            subtype_it != xd.end() ? doc.resolve(subtype_it->second).name() : "";
        if (subtype == "Image") {
            if (key.first >= 0) {
                seen_refs->insert(key);
            } else {
                seen_direct->insert(path_key + "/" + name);
            }
        } else if (subtype == "Form") {
            if (key.first >= 0 && !visited_forms->insert(key).second) continue;
            auto res_it = xd.find("Resources");
            if (res_it != xd.end()) {
                count_resource_images(doc, res_it->second, seen_refs, seen_direct,
                                      path_key + "/" + name, visited_forms, depth + 1);
            }
        }
    }
}

struct TextCountState {
    int render_mode = 0;
    double fill_alpha = 1.0;
};

struct PageCounts {
    uint64_t visible = 0;
    uint64_t hidden = 0;
    uint64_t inline_images = 0;
    uint64_t unmapped = 0;
};

size_t count_code_points(const Glyph& g) {
    if (g.unmapped) return 1;  // fall back to one unit per code
    return utf8_length(g.utf8);
}

// Counts show-operator characters in one content stream. Form XObjects drawn
// with Do are walked too, since their text is part of the visible document.
void count_content_text(const Document& doc, std::string_view content, const Object& resources,
                        PageCounts* counts, std::set<std::pair<int, int>>* visited_forms,
                        int depth) {
    if (depth > 12) return;
    Object res = doc.resolve(resources);

    std::map<std::string, FontInfo> font_cache;
    auto font_for = [&](const std::string& name) -> const FontInfo& {
        auto it = font_cache.find(name);
        if (it != font_cache.end()) return it->second;
        Object fonts = doc.resolve(res.get("Font"));
        FontInfo info = load_font(doc, fonts.get(name));
        return font_cache.emplace(name, std::move(info)).first->second;
    };

    TextCountState state;
    std::vector<TextCountState> gs_stack;
    std::string current_font;

    auto count_string = [&](const std::string& bytes) {
        const FontInfo& font = font_for(current_font);
        uint64_t n = 0;
        for (const Glyph& g : font.decode_string(bytes)) {
            n += count_code_points(g);
            if (g.unmapped) ++counts->unmapped;
        }
        bool hidden = state.render_mode == 3 || state.fill_alpha == 0.0;
        bool visible = state.render_mode >= 0 && state.render_mode <= 6 && state.render_mode != 3;
        if (hidden) {
            counts->hidden += n;
        } else if (visible) {
            counts->visible += n;
        }
    };

    for_each_content_op(content, [&](const ContentOp& op) {
        if (op.op == "q") {
            gs_stack.push_back(state);
        } else if (op.op == "Q") {
            if (!gs_stack.empty()) {
                state = gs_stack.back();
                gs_stack.pop_back();
            }
        } else if (op.op == "Tr") {
            if (!op.operands.empty()) {
                state.render_mode = static_cast<int>(op.operands[0].as_int(0));
            }
        } else if (op.op == "Tf") {
            if (op.operands.size() >= 1 && op.operands[0].is_name()) {
                current_font = op.operands[0].name();
            }
        } else if (op.op == "gs") {
            if (!op.operands.empty() && op.operands[0].is_name()) {
                Object extg = doc.resolve(doc.resolve(res.get("ExtGState")).get(op.operands[0].name()));
                Object ca = doc.resolve(extg.get("ca"));
                if (ca.is_number()) state.fill_alpha = ca.as_real(1.0);
            }
        } else if (op.op == "Tj" || op.op == "'") {
            if (!op.operands.empty() && op.operands.back().is_string()) {
                count_string(op.operands.back().str());
            }
        } else if (op.op == "\"") {
            if (op.operands.size() >= 3 && op.operands[2].is_string()) {
                count_string(op.operands[2].str());
            }
        } else if (op.op == "TJ") {
            if (!op.operands.empty() && op.operands.back().is_array()) {
                for (const Object& item : op.operands.back().array()) {
                    if (item.is_string()) count_string(item.str());
                }
            }
        } else if (op.op == "BI") {
            ++counts->inline_images;
        } else if (op.op == "Do") {
            if (!op.operands.empty() && op.operands[0].is_name()) {
                Object xobjects = doc.resolve(res.get("XObject"));
                const Object& entry = xobjects.get(op.operands[0].name());
                std::pair<int, int> key{-1, -1};
                if (entry.is_ref()) key = {entry.ref().num, entry.ref().gen};
                Object x = doc.resolve(entry);
                if (const Stream* s = x.stream()) {
                    if (doc.resolve(x.get("Subtype")).name() == "Form") {
                        if (key.first >= 0 && !visited_forms->insert(key).second) return;
                        DecodeResult dec = doc.decode(*s);
                        if (dec.ok && !dec.unsupported_filter) {
                            Object form_res = x.has("Resources") ? x.get("Resources") : resources;
                            count_content_text(doc, dec.data, form_res, counts, visited_forms,
                                               depth + 1);
                        }
                    }
                }
            }
        }
    });
}

}  // namespace

ScanReport scan(const Document& doc) {
    ScanReport report;
    report.page_count = static_cast<int>(doc.pages().size());
    report.version = doc.version();
    for (const auto& w : doc.warnings()) report.warnings.push_back(w);

    std::set<std::pair<int, int>> image_refs;
    std::set<std::string> direct_images;
    std::set<std::pair<int, int>> visited_forms;
    int page_index = 0;
    for (const Page& page : doc.pages()) {
        count_resource_images(doc, page.resources, &image_refs, &direct_images,
                              "p" + std::to_string(page_index), &visited_forms, 0);
        PageCounts counts;
        std::set<std::pair<int, int>> text_form_guard;
        count_content_text(doc, page.content, page.resources, &counts, &text_form_guard, 0);
        report.visible_text_len += counts.visible;
        report.hidden_text_len += counts.hidden;
        report.image_count += counts.inline_images;
        report.unmapped_glyphs += counts.unmapped;
        ++page_index;
    }
    report.image_count += image_refs.size() + direct_images.size();

    std::string creation = doc.info_text("CreationDate");
    if (!creation.empty()) {
        if (auto parsed = parse_creation_date(creation, current_utc_year())) {
            report.raw_creation_year = parsed->year;
            if (parsed->valid) report.creation_year = parsed->year;
        }
    }
    report.creator_vendor = normalize_creator(doc.info_text("Creator"), doc.info_text("Producer"));
    return report;
}

bool classify_born_digital(const ScanReport& report, const BornDigitalThresholds& t) {
    return report.visible_text_len > t.min_visible_text &&
           report.hidden_text_len <= t.max_hidden_text && report.image_count <= t.max_images;
}

int current_utc_year() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    return tm.tm_year + 1900;
}

std::optional<CreationYear> parse_creation_date(std::string_view raw, int current_year) {
    std::string s = trim(raw);
    if (starts_with(s, "D:")) s = s.substr(2);
    // Some writers wrap in parens or prefix junk; find the first digit run.
    size_t start = 0;
    while (start < s.size() && !std::isdigit(static_cast<unsigned char>(s[start]))) ++start;
    size_t len = 0;
    while (start + len < s.size() && std::isdigit(static_cast<unsigned char>(s[start + len]))) {
        ++len;
    }
    if (len < 4) return std::nullopt;
    if (start != 0) return std::nullopt;  // digits must lead; "hello2021" is garbage
    int year = std::atoi(s.substr(start, 4).c_str());
    CreationYear out;
    out.year = year;
    out.valid = year >= 1980 && year <= current_year + 1;
    return out;
}

std::string normalize_creator(std::string_view creator, std::string_view producer) {
    struct VendorPattern {
        const char* needle;
        const char* vendor;
    };
    static const VendorPattern kPatterns[] = {
        {"microsoft", "microsoft"}, {"word", "microsoft"},      {"excel", "microsoft"},
        {"powerpoint", "microsoft"}, {"sharepoint", "microsoft"},
        {"adobe", "adobe"},         {"acrobat", "adobe"},       {"indesign", "adobe"},
        {"distiller", "adobe"},     {"illustrator", "adobe"},   {"photoshop", "adobe"},
        {"framemaker", "adobe"},    {"pagemaker", "adobe"},     {"livecycle", "adobe"},
        {"libreoffice", "libreoffice"}, {"openoffice", "libreoffice"},
        {"neooffice", "libreoffice"},   {"staroffice", "libreoffice"},
        {"ghostscript", "ghostscript"},
        {"pdflatex", "latex"},      {"pdftex", "latex"},        {"xetex", "latex"},
        {"luatex", "latex"},        {"luahbtex", "latex"},      {"latex", "latex"},
        {"miktex", "latex"},        {"tex live", "latex"},      {"dvips", "latex"},
        {"quartz", "apple"},        {"keynote", "apple"},       {"mac os x", "apple"},
        {"macos", "apple"},         {"iwork", "apple"},
        {"skia", "google"},         {"google", "google"},       {"chromium", "google"},
        {"chrome", "google"},
        {"canva", "canva"},         {"wkhtmltopdf", "wkhtmltopdf"},
        {"itext", "itext"},         {"foxit", "foxit"},         {"prince", "prince"},
    };
    auto match = [](std::string_view text) -> const char* {
        std::string lower = to_lower(text);
        for (const auto& p : kPatterns) {
            if (lower.find(p.needle) != std::string::npos) return p.vendor;
        }
        return nullptr;
    };
    if (const char* v = match(creator)) return v;
    if (const char* v = match(producer)) return v;

    std::string source = trim(creator);
    if (source.empty()) source = trim(producer);
    if (source.empty()) return "";
    size_t sp = source.find_first_of(" \t");
    if (sp != std::string::npos) source.resize(sp);
    return to_lower(source);
}

}  // namespace pdfcorpus::pdf
