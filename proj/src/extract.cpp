#include "pdfcorpus/extract.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "pdfcorpus/pdf/content.hpp"
#include "pdfcorpus/pdf/fonts.hpp"
#include "pdfcorpus/util.hpp"

namespace pdfcorpus {

namespace {

using pdf::ContentOp;
using pdf::Document;
using pdf::FontInfo;
using pdf::Glyph;
using pdf::Object;

struct Mat {
    // | a b 0 |
    // | c d 0 |
    // | e f 1 |
    double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

    static Mat identity() { return {}; }
    static Mat translate(double tx, double ty) { return {1, 0, 0, 1, tx, ty}; }

    Mat mul(const Mat& m) const {  // this × m
        return {a * m.a + b * m.c,         a * m.b + b * m.d,
                c * m.a + d * m.c,         c * m.b + d * m.d,
                e * m.a + f * m.c + m.e,   e * m.b + f * m.d + m.f};
    }
    void apply(double x, double y, double* ox, double* oy) const {
        *ox = a * x + c * y + e;
        *oy = b * x + d * y + f;
    }
};

struct TextState {
    std::string font_name;
    double size = 0;
    double char_spacing = 0;
    double word_spacing = 0;
    double hscale = 1.0;
    double leading = 0;
    double rise = 0;
    int render_mode = 0;
};

struct GState {
    Mat ctm;
    TextState ts;
    double fill_alpha = 1.0;
};

struct RawToken {
    std::string text;
    Rect bbox;
    bool visible = true;
};

// Interprets one content stream, appending device-space tokens.
class PageInterpreter {
  public:
    PageInterpreter(const Document& doc, const ExtractOptions& options,
                    std::vector<RawToken>* out)
        : doc_(doc), options_(options), out_(out) {}

    void run(std::string_view content, const Object& resources, const Mat& base_ctm, int depth) {
        if (depth > 12) return;
        GState saved_state = state_;
        std::vector<GState> saved_stack = std::move(stack_);
        stack_.clear();
        const Object* saved_res = resources_;
        auto saved_fonts = std::move(font_cache_);  // font names are resource-scoped
        font_cache_.clear();

        Object resolved_res = doc_.resolve(resources);
        resources_ = &resolved_res;
        state_.ctm = base_ctm;

        pdf::for_each_content_op(content, [&](const ContentOp& op) { handle(op, depth); });

        flush();
        resources_ = saved_res;
        state_ = saved_state;
        stack_ = std::move(saved_stack);
        font_cache_ = std::move(saved_fonts);
    }

    void finish() { flush(); }

  private:
    const FontInfo& current_font() {
        std::string key = state_.ts.font_name;
        auto it = font_cache_.find(key);
        if (it != font_cache_.end()) return *it->second;
        Object fonts = doc_.resolve(resources_ != nullptr ? resources_->get("Font") : Object());
        auto font = std::make_shared<FontInfo>(pdf::load_font(doc_, fonts.get(key)));
        return *font_cache_.emplace(std::move(key), std::move(font)).first->second;
    }

    Mat text_render_matrix() const { return tm_.mul(state_.ctm); }

    double device_font_size() const {
        Mat m = text_render_matrix();
        double vx = m.c * state_.ts.size, vy = m.d * state_.ts.size;
        return std::sqrt(vx * vx + vy * vy);
    }

    void begin_text() {
        tm_ = Mat::identity();
        tlm_ = Mat::identity();
    }

    void move_text(double tx, double ty) {
        tlm_ = Mat::translate(tx, ty).mul(tlm_);
        tm_ = tlm_;
    }

    void flush() {
        if (!run_text_.empty() && run_box_.valid()) {
            out_->push_back({std::move(run_text_), run_box_, run_visible_});
        }
        run_text_.clear();
        run_box_ = Rect{};
        has_run_ = false;
    }

    void show_string(const std::string& bytes) {
        const FontInfo& font = current_font();
        double fs = state_.ts.size;
        double th = state_.ts.hscale;
        bool visible = state_.ts.render_mode != 3 && state_.fill_alpha != 0.0 &&
                       state_.ts.render_mode != 7;

        for (const Glyph& g : font.decode_string(bytes)) {
            Mat m = text_render_matrix();
            double ox, oy;
            m.apply(0, 0, &ox, &oy);

            double fsd = device_font_size();
            bool gap_break = false;
            if (has_run_) {
                double dxv = ox - pen_x_, dyv = oy - pen_y_;
                // Baseline direction = image of the x axis.
                double bx = m.a, by = m.b;
                double blen = std::hypot(bx, by);
                if (blen > 1e-12) {
                    bx /= blen;
                    by /= blen;
                }
                double forward = dxv * bx + dyv * by;
                double sideways = std::abs(-dxv * by + dyv * bx);
                double limit = options_.gap_factor * std::max(fsd, 1e-6);
                if (forward > limit || forward < -4 * limit || sideways > limit) {
                    gap_break = true;
                }
            }
            if (gap_break || visible != run_visible_) flush();

            double w0 = g.width1000 / 1000.0;
            double adv_glyph = w0 * fs * th;

            if (g.is_space || g.utf8.empty()) {
                flush();
            } else {
                double x0, y0, x1, y1;
                double asc = font.ascent1000 / 1000.0 * fs + state_.ts.rise;
                double desc = font.descent1000 / 1000.0 * fs + state_.ts.rise;
                double cx[4], cy[4];
                m.apply(0, desc, &cx[0], &cy[0]);
                m.apply(adv_glyph, desc, &cx[1], &cy[1]);
                m.apply(adv_glyph, asc, &cx[2], &cy[2]);
                m.apply(0, asc, &cx[3], &cy[3]);
                x0 = x1 = cx[0];
                y0 = y1 = cy[0];
                for (int i = 1; i < 4; ++i) {
                    x0 = std::min(x0, cx[i]);
                    x1 = std::max(x1, cx[i]);
                    y0 = std::min(y0, cy[i]);
                    y1 = std::max(y1, cy[i]);
                }
                Rect gbox{x0, y0, x1, y1};
                if (!has_run_ || run_text_.empty()) {
                    run_box_ = gbox;
                    run_visible_ = visible;
                } else {
                    run_box_ = run_box_.united(gbox);
                }
                run_text_ += g.utf8;
                has_run_ = true;
            }

            // Advance the text matrix past this glyph.
            double tx = (w0 * fs + state_.ts.char_spacing +
                         ((g.code == 32 && !font.is_cid) ? state_.ts.word_spacing : 0.0)) *
                        th;
            tm_ = Mat::translate(tx, 0).mul(tm_);
            Mat after = text_render_matrix();
            after.apply(0, 0, &pen_x_, &pen_y_);
        }
    }

    void handle(const ContentOp& op, int depth) {
        const auto& ops = op.operands;
        auto num = [&](size_t i) { return i < ops.size() ? ops[i].as_real(0) : 0.0; };

        if (op.op == "q") {
            stack_.push_back(state_);
        } else if (op.op == "Q") {
            if (!stack_.empty()) {
                state_ = stack_.back();
                stack_.pop_back();
            }
        } else if (op.op == "cm") {
            if (ops.size() >= 6) {
                Mat m{num(0), num(1), num(2), num(3), num(4), num(5)};
                state_.ctm = m.mul(state_.ctm);
            }
        } else if (op.op == "BT") {
            begin_text();
        } else if (op.op == "Tf") {
            if (ops.size() >= 2 && ops[0].is_name()) {
                state_.ts.font_name = ops[0].name();
                state_.ts.size = ops[1].as_real(0);
            }
        } else if (op.op == "Td") {
            move_text(num(0), num(1));
        } else if (op.op == "TD") {
            state_.ts.leading = -num(1);
            move_text(num(0), num(1));
        } else if (op.op == "Tm") {
            if (ops.size() >= 6) {
                tlm_ = Mat{num(0), num(1), num(2), num(3), num(4), num(5)};
                tm_ = tlm_;
            }
        } else if (op.op == "T*") {
            move_text(0, -state_.ts.leading);
        } else if (op.op == "TL") {
            state_.ts.leading = num(0);
        } else if (op.op == "Tc") {
            state_.ts.char_spacing = num(0);
        } else if (op.op == "Tw") {
            state_.ts.word_spacing = num(0);
        } else if (op.op == "Tz") {
            state_.ts.hscale = num(0) / 100.0;
        } else if (op.op == "Ts") {
            state_.ts.rise = num(0);
        } else if (op.op == "Tr") {
            state_.ts.render_mode = static_cast<int>(ops.empty() ? 0 : ops[0].as_int(0));
        } else if (op.op == "gs") {
            if (!ops.empty() && ops[0].is_name() && resources_ != nullptr) {
                Object extg =
                    doc_.resolve(doc_.resolve(resources_->get("ExtGState")).get(ops[0].name()));
                Object ca = doc_.resolve(extg.get("ca"));
                if (ca.is_number()) state_.fill_alpha = ca.as_real(1.0);
            }
        } else if (op.op == "Tj") {
            if (!ops.empty() && ops.back().is_string()) show_string(ops.back().str());
        } else if (op.op == "'") {
            move_text(0, -state_.ts.leading);
            if (!ops.empty() && ops.back().is_string()) show_string(ops.back().str());
        } else if (op.op == "\"") {
            if (ops.size() >= 3) {
                state_.ts.word_spacing = num(0);
                state_.ts.char_spacing = num(1);
                move_text(0, -state_.ts.leading);
                if (ops[2].is_string()) show_string(ops[2].str());
            }
        } else if (op.op == "TJ") {
            if (!ops.empty() && ops.back().is_array()) {
                for (const Object& item : ops.back().array()) {
                    if (item.is_string()) {
                        show_string(item.str());
                    } else if (item.is_number()) {
                        double tx = -item.as_real(0) / 1000.0 * state_.ts.size * state_.ts.hscale;
                        tm_ = Mat::translate(tx, 0).mul(tm_);
                    }
                }
            }
        } else if (op.op == "Do") {
            if (!ops.empty() && ops[0].is_name() && resources_ != nullptr) {
                Object xobjects = doc_.resolve(resources_->get("XObject"));
                const Object& entry = xobjects.get(ops[0].name());
                std::pair<int, int> key{-1, -1};
                if (entry.is_ref()) key = {entry.ref().num, entry.ref().gen};
                Object x = doc_.resolve(entry);
                const pdf::Stream* s = x.stream();
                if (s != nullptr && doc_.resolve(x.get("Subtype")).name() == "Form") {
                    if (key.first >= 0 && !form_guard_.insert(key).second) return;
                    pdf::DecodeResult dec = doc_.decode(*s);
                    if (dec.ok && !dec.unsupported_filter) {
                        Mat form_ctm = state_.ctm;
                        Object mx = doc_.resolve(x.get("Matrix"));
                        if (mx.is_array() && mx.array().size() == 6) {
                            Mat fm{mx.array()[0].as_real(1), mx.array()[1].as_real(0),
                                   mx.array()[2].as_real(0), mx.array()[3].as_real(1),
                                   mx.array()[4].as_real(0), mx.array()[5].as_real(0)};
                            form_ctm = fm.mul(form_ctm);
                        }
                        Object form_res = x.has("Resources") ? x.get("Resources")
                                                             : (resources_ != nullptr ? *resources_
                                                                                      : Object());
                        run(dec.data, form_res, form_ctm, depth + 1);
                    }
                    if (key.first >= 0) form_guard_.erase(key);
                }
            }
        }
    }

    const Document& doc_;
    ExtractOptions options_;
    std::vector<RawToken>* out_;

    const Object* resources_ = nullptr;
    GState state_;
    std::vector<GState> stack_;
    Mat tm_, tlm_;

    std::map<std::string, std::shared_ptr<FontInfo>> font_cache_;
    std::set<std::pair<int, int>> form_guard_;

    std::string run_text_;
    Rect run_box_;
    bool run_visible_ = true;
    bool has_run_ = false;
    double pen_x_ = 0, pen_y_ = 0;
};

Rect normalize_rotation(const Rect& r, const Rect& mb, int rotation) {
    auto map_point = [&](double x, double y, double* ox, double* oy) {
        switch (rotation) {
            case 90:
                *ox = y - mb.y0;
                *oy = mb.x1 - x;
                break;
            case 180:
                *ox = mb.x1 - x;
                *oy = mb.y1 - y;
                break;
            case 270:
                *ox = mb.y1 - y;
                *oy = x - mb.x0;
                break;
            default:
                *ox = x - mb.x0;
                *oy = y - mb.y0;
        }
    };
    double x0a, y0a, x1a, y1a;
    map_point(r.x0, r.y0, &x0a, &y0a);
    map_point(r.x1, r.y1, &x1a, &y1a);
    return Rect{std::min(x0a, x1a), std::min(y0a, y1a), std::max(x0a, x1a), std::max(y0a, y1a)};
}

double median_height(const std::vector<Token>& tokens) {
    if (tokens.empty()) return 1.0;
    std::vector<double> heights;
    heights.reserve(tokens.size());
    for (const auto& t : tokens) heights.push_back(t.bbox.height());
    std::sort(heights.begin(), heights.end());
    double h = heights[heights.size() / 2];
    return h > 1e-9 ? h : 1.0;
}

bool is_rtl_cp(char32_t cp) {
    return (cp >= 0x590 && cp <= 0x6FF) || (cp >= 0x750 && cp <= 0x77F) ||
           (cp >= 0xFB50 && cp <= 0xFDFF) || (cp >= 0xFE70 && cp <= 0xFEFF);
}

bool line_is_rtl(const std::vector<const Token*>& line) {
    size_t rtl = 0, total = 0;
    for (const Token* t : line) {
        size_t i = 0;
        while (i < t->text.size()) {
            char32_t cp = utf8_next(t->text, i);
            if (is_letter_cp(cp)) {
                ++total;
                if (is_rtl_cp(cp)) ++rtl;
            }
        }
    }
    return total > 0 && rtl * 2 > total;
}

// Vertical clustering into lines; input pointers are reordered into clusters.
std::vector<std::vector<const Token*>> cluster_lines(std::vector<const Token*> tokens,
                                                     double threshold) {
    std::vector<std::vector<const Token*>> lines;
    std::sort(tokens.begin(), tokens.end(), [](const Token* a, const Token* b) {
        double ca = (a->bbox.y0 + a->bbox.y1) / 2;
        double cb = (b->bbox.y0 + b->bbox.y1) / 2;
        if (ca != cb) return ca > cb;  // top first
        if (a->bbox.x0 != b->bbox.x0) return a->bbox.x0 < b->bbox.x0;
        return a->text < b->text;
    });
    double line_center_sum = 0;
    for (const Token* t : tokens) {
        double center = (t->bbox.y0 + t->bbox.y1) / 2;
        if (!lines.empty()) {
            double ref = line_center_sum / static_cast<double>(lines.back().size());
            if (std::abs(center - ref) < threshold) {
                lines.back().push_back(t);
                line_center_sum += center;
                continue;
            }
        }
        lines.push_back({t});
        line_center_sum = center;
    }
    return lines;
}

void order_region(std::vector<const Token*> tokens, double med_height,
                  const ExtractOptions& options, std::vector<Token>* out, int depth,
                  int* line_count) {
    if (tokens.empty()) return;
    auto lines = cluster_lines(tokens, options.line_cluster_factor * med_height);
    // A region with one line is just a line; x gaps there are word spacing.
    if (lines.size() > 1 && depth < 8 && tokens.size() > 1) {
        // Column detection: widest whitespace band in the x projection.
        std::vector<std::pair<double, double>> intervals;
        intervals.reserve(tokens.size());
        for (const Token* t : tokens) intervals.emplace_back(t->bbox.x0, t->bbox.x1);
        std::sort(intervals.begin(), intervals.end());
        double best_gap = 0, best_at = 0;
        double cover_end = intervals[0].second;
        for (size_t i = 1; i < intervals.size(); ++i) {
            if (intervals[i].first > cover_end) {
                double gap = intervals[i].first - cover_end;
                if (gap > best_gap) {
                    best_gap = gap;
                    best_at = cover_end + gap / 2;
                }
            }
            cover_end = std::max(cover_end, intervals[i].second);
        }
        if (best_gap >= options.column_gap_factor * med_height) {
            std::vector<const Token*> left, right;
            for (const Token* t : tokens) {
                double cx = (t->bbox.x0 + t->bbox.x1) / 2;
                (cx < best_at ? left : right).push_back(t);
            }
            if (!left.empty() && !right.empty()) {
                order_region(std::move(left), med_height, options, out, depth + 1, line_count);
                order_region(std::move(right), med_height, options, out, depth + 1, line_count);
                return;
            }
        }
    }

    *line_count += static_cast<int>(lines.size());
    for (auto& line : lines) {
        bool rtl = line_is_rtl(line);
        std::sort(line.begin(), line.end(), [rtl](const Token* a, const Token* b) {
            if (rtl) {
                if (a->bbox.x1 != b->bbox.x1) return a->bbox.x1 > b->bbox.x1;
            } else if (a->bbox.x0 != b->bbox.x0) {
                return a->bbox.x0 < b->bbox.x0;
            }
            if (a->bbox.y0 != b->bbox.y0) return a->bbox.y0 < b->bbox.y0;
            return a->text < b->text;
        });
        for (const Token* t : line) out->push_back(*t);
    }
}

std::vector<Token> order_tokens(std::vector<Token> tokens, const ExtractOptions& options,
                                int* line_count) {
    *line_count = 0;
    if (tokens.empty()) return tokens;
    double med = median_height(tokens);
    std::vector<const Token*> ptrs;
    ptrs.reserve(tokens.size());
    for (const auto& t : tokens) ptrs.push_back(&t);
    std::vector<Token> out;
    out.reserve(tokens.size());
    order_region(std::move(ptrs), med, options, &out, 0, line_count);
    return out;
}

}  // namespace

std::vector<Token> reading_order(std::vector<Token> tokens, const ExtractOptions& options) {
    int lines = 0;
    return order_tokens(std::move(tokens), options, &lines);
}

int count_lines(const PageText& page, const ExtractOptions& options) {
    int lines = 0;
    order_tokens(page.tokens, options, &lines);
    return lines;
}

std::vector<PageText> extract_tokens(const pdf::Document& doc, const ExtractOptions& options) {
    std::vector<PageText> result;
    int page_index = 0;
    for (const pdf::Page& page : doc.pages()) {
        PageText pt;
        pt.page_index = page_index;
        pt.width = page.display_width();
        pt.height = page.display_height();

        std::vector<RawToken> raw;
        PageInterpreter interp(doc, options, &raw);
        interp.run(page.content, page.resources, Mat::identity(), 0);
        interp.finish();

        Rect display_box{0, 0, pt.width, pt.height};
        std::vector<Token> tokens;
        tokens.reserve(raw.size());
        for (auto& rt : raw) {
            Token t;
            t.text = std::move(rt.text);
            t.page_index = page_index;
            t.bbox = normalize_rotation(rt.bbox, page.media_box, page.rotation);
            t.visible = rt.visible;
            if (!t.bbox.valid()) continue;
            if (!t.bbox.intersects(display_box)) continue;  // fully off-page
            tokens.push_back(std::move(t));
        }
        pt.tokens = order_tokens(std::move(tokens), options, &pt.line_count);
        result.push_back(std::move(pt));
        ++page_index;
    }
    return result;
}

std::string page_plain_text(const PageText& page) {
    std::string out;
    for (const Token& t : page.tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t.text;
    }
    return out;
}

std::string page_text_to_json(const PageText& page) {
    nlohmann::json j;
    j["page"] = page.page_index;
    j["width"] = page.width;
    j["height"] = page.height;
    j["line_count"] = page.line_count;
    nlohmann::json tokens = nlohmann::json::array();
    for (const Token& t : page.tokens) {
        tokens.push_back({t.text, t.bbox.x0, t.bbox.y0, t.bbox.x1, t.bbox.y1, t.visible});
    }
    j["tokens"] = std::move(tokens);
    return j.dump();
}

std::optional<PageText> page_text_from_json(std::string_view line) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    PageText page;
    page.page_index = j.value("page", 0);
    page.width = j.value("width", 0.0);
    page.height = j.value("height", 0.0);
    page.line_count = j.value("line_count", 0);
    if (j.contains("tokens") && j["tokens"].is_array()) {
        for (const auto& t : j["tokens"]) {
            if (!t.is_array() || t.size() < 6 || !t[0].is_string()) continue;
            Token tok;
            tok.text = t[0].get<std::string>();
            tok.page_index = page.page_index;
            tok.bbox = Rect{t[1].get<double>(), t[2].get<double>(), t[3].get<double>(),
                            t[4].get<double>()};
            tok.visible = t[5].get<bool>();
            page.tokens.push_back(std::move(tok));
        }
    }
    return page;
}

}  // namespace pdfcorpus
