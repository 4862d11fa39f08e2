#include "pdfcorpus/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pdfcorpus {

double union_area(const std::vector<Rect>& rects) {
    struct Event {
        double x;
        int delta;
        double y0, y1;
    };
    std::vector<Event> events;
    events.reserve(rects.size() * 2);
    for (const Rect& r : rects) {
        if (!r.valid()) continue;
        events.push_back({r.x0, +1, r.y0, r.y1});
        events.push_back({r.x1, -1, r.y0, r.y1});
    }
    if (events.empty()) return 0.0;
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.delta > b.delta;
    });

    // Active y intervals as a multiset; covered length by merge at each slab.
    std::vector<std::pair<double, double>> active;
    auto covered_length = [&] {
        if (active.empty()) return 0.0;
        std::vector<std::pair<double, double>> sorted = active;
        std::sort(sorted.begin(), sorted.end());
        double len = 0, cur_lo = sorted[0].first, cur_hi = sorted[0].second;
        for (size_t i = 1; i < sorted.size(); ++i) {
            if (sorted[i].first > cur_hi) {
                len += cur_hi - cur_lo;
                cur_lo = sorted[i].first;
                cur_hi = sorted[i].second;
            } else {
                cur_hi = std::max(cur_hi, sorted[i].second);
            }
        }
        return len + (cur_hi - cur_lo);
    };

    double area = 0;
    double prev_x = events[0].x;
    for (const Event& e : events) {
        if (e.x > prev_x) {
            area += covered_length() * (e.x - prev_x);
            prev_x = e.x;
        }
        if (e.delta > 0) {
            active.emplace_back(e.y0, e.y1);
        } else {
            auto it = std::find(active.begin(), active.end(), std::make_pair(e.y0, e.y1));
            if (it != active.end()) active.erase(it);
        }
    }
    return area;
}

void Histogram::add(double value) {
    ++total;
    if (bucket_edges.size() < 2) {
        ++undefined_count;
        return;
    }
    if (value < bucket_edges.front() || value >= bucket_edges.back()) {
        ++undefined_count;
        return;
    }
    size_t idx = static_cast<size_t>(
        std::upper_bound(bucket_edges.begin(), bucket_edges.end(), value) -
        bucket_edges.begin());
    if (idx == 0 || idx > counts.size()) {
        ++undefined_count;
        return;
    }
    ++counts[idx - 1];
}

void Histogram::add_undefined() {
    ++total;
    ++undefined_count;
}

bool Histogram::conserved() const {
    uint64_t sum = undefined_count;
    for (uint64_t c : counts) sum += c;
    return sum == total;
}

void Histogram::merge(const Histogram& other) {
    if (bucket_edges != other.bucket_edges || labels != other.labels) {
        throw std::invalid_argument("histogram merge: bucket layouts differ");
    }
    for (size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    total += other.total;
    undefined_count += other.undefined_count;
}

std::string Histogram::to_csv() const {
    std::ostringstream out;
    out << "bucket,count\n";
    for (size_t i = 0; i < counts.size(); ++i) {
        if (!labels.empty() && i < labels.size()) {
            out << labels[i];
        } else {
            out << bucket_edges[i] << "-" << bucket_edges[i + 1];
        }
        out << "," << counts[i] << "\n";
    }
    out << "undefined," << undefined_count << "\n";
    out << "total," << total << "\n";
    return out.str();
}

namespace {

Histogram make_uniform(double lo, double hi, double width) {
    Histogram h;
    for (double edge = lo; edge < hi + width / 2; edge += width) {
        h.bucket_edges.push_back(edge);
    }
    if (h.bucket_edges.size() < 2) h.bucket_edges = {lo, hi};
    h.counts.assign(h.bucket_edges.size() - 1, 0);
    return h;
}

}  // namespace

Histogram year_histogram(const std::vector<pdf::ScanReport>& reports) {
    int lo = 0, hi = 0;
    bool any = false;
    for (const auto& r : reports) {
        if (!r.creation_year) continue;
        if (!any || *r.creation_year < lo) lo = *r.creation_year;
        if (!any || *r.creation_year > hi) hi = *r.creation_year;
        any = true;
    }
    Histogram h;
    if (any) {
        for (int y = lo; y <= hi + 1; ++y) h.bucket_edges.push_back(y);
        h.counts.assign(h.bucket_edges.size() - 1, 0);
    } else {
        h.bucket_edges = {0};
    }
    for (const auto& r : reports) {
        if (r.creation_year) {
            h.add(*r.creation_year);
        } else {
            h.add_undefined();
        }
    }
    return h;
}

Histogram version_histogram(const std::vector<pdf::ScanReport>& reports) {
    static const std::vector<std::string> kVersions = {"1.0", "1.1", "1.2", "1.3", "1.4",
                                                       "1.5", "1.6", "1.7", "2.0"};
    Histogram h;
    h.labels = kVersions;
    for (size_t i = 0; i <= kVersions.size(); ++i) h.bucket_edges.push_back(static_cast<double>(i));
    h.counts.assign(kVersions.size(), 0);
    for (const auto& r : reports) {
        auto it = std::find(kVersions.begin(), kVersions.end(), r.version);
        if (it == kVersions.end()) {
            h.add_undefined();
        } else {
            h.add(static_cast<double>(it - kVersions.begin()));
        }
    }
    return h;
}

WordCountStats word_count_stats(const std::vector<std::vector<PageText>>& documents,
                                double doc_bucket_width, double doc_max, double page_bucket_width,
                                double page_max) {
    WordCountStats stats;
    stats.per_document = make_uniform(0, doc_max, doc_bucket_width);
    stats.per_page = make_uniform(0, page_max, page_bucket_width);
    // Overflow bucket so huge documents stay counted.
    stats.per_document.bucket_edges.push_back(1e18);
    stats.per_document.counts.push_back(0);
    stats.per_page.bucket_edges.push_back(1e18);
    stats.per_page.counts.push_back(0);

    for (const auto& doc : documents) {
        uint64_t doc_words = 0;
        for (const auto& page : doc) {
            uint64_t page_words = page.tokens.size();
            doc_words += page_words;
            stats.per_page.add(static_cast<double>(page_words));
        }
        stats.per_document.add(static_cast<double>(doc_words));
    }
    return stats;
}

double page_coverage(const std::vector<Rect>& boxes, const Rect& page_box) {
    if (!page_box.valid()) return 0.0;
    std::vector<Rect> clipped;
    clipped.reserve(boxes.size());
    for (const Rect& b : boxes) {
        Rect c = b.intersection(page_box);
        if (c.valid()) clipped.push_back(c);
    }
    return union_area(clipped) / page_box.area();
}

double page_coverage(const PageText& page) {
    std::vector<Rect> boxes;
    boxes.reserve(page.tokens.size());
    for (const Token& t : page.tokens) boxes.push_back(t.bbox);
    return page_coverage(boxes, Rect{0, 0, page.width, page.height});
}

FormatClass classify_page_format(double width_pt, double height_pt) {
    if (width_pt <= 0 || height_pt <= 0) {
        throw std::invalid_argument("classify_page_format: non-positive dimensions");
    }
    FormatClass fc;
    fc.orientation = height_pt >= width_pt ? Orientation::vertical : Orientation::horizontal;
    fc.ratio = std::max(width_pt, height_pt) / std::min(width_pt, height_pt);
    constexpr double kSqrt2 = 1.4142135623730951;
    constexpr double kLetterRatio = 792.0 / 612.0;
    if (std::abs(fc.ratio - kSqrt2) <= 0.02) {
        fc.series = PaperSeries::abc_series;
    } else if (std::abs(fc.ratio - kLetterRatio) <= 0.02) {
        fc.series = PaperSeries::letter;
    } else {
        fc.series = PaperSeries::other;
    }
    return fc;
}

double HeatmapGrid::max_cell() const {
    double m = 0;
    for (double c : cells) m = std::max(m, c);
    return m;
}

double HeatmapGrid::total_mass() const {
    double m = 0;
    for (double c : cells) m += c;
    return m;
}

void HeatmapGrid::merge(const HeatmapGrid& other) {
    if (width != other.width || height != other.height) {
        throw std::invalid_argument("heatmap merge: grid sizes differ");
    }
    for (size_t i = 0; i < cells.size(); ++i) cells[i] += other.cells[i];
    page_count += other.page_count;
}

std::string HeatmapGrid::to_pgm() const {
    std::ostringstream out;
    out << "P2\n" << width << " " << height << "\n255\n";
    double m = max_cell();
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            int v = m > 0 ? static_cast<int>(std::lround(at(x, y) / m * 255.0)) : 0;
            out << v << (x + 1 == width ? "" : " ");
        }
        out << "\n";
    }
    return out.str();
}

std::string HeatmapGrid::to_json() const {
    nlohmann::json j;
    j["width"] = width;
    j["height"] = height;
    j["page_count"] = page_count;
    j["cells"] = cells;
    return j.dump();
}

HeatmapGrid accumulate_heatmap(const std::vector<PageText>& pages, Orientation orientation,
                               int short_edge_cells) {
    HeatmapGrid grid;
    int long_edge_cells = static_cast<int>(std::lround(short_edge_cells * 1.4142135623730951));
    if (orientation == Orientation::vertical) {
        grid.width = short_edge_cells;
        grid.height = long_edge_cells;
    } else {
        grid.width = long_edge_cells;
        grid.height = short_edge_cells;
    }
    grid.cells.assign(static_cast<size_t>(grid.width) * grid.height, 0.0);

    for (const PageText& page : pages) {
        if (page.width <= 0 || page.height <= 0) continue;
        bool vertical = page.height >= page.width;
        if ((orientation == Orientation::vertical) != vertical) continue;
        ++grid.page_count;
        for (const Token& t : page.tokens) {
            // Normalize the box; grid row 0 is the top of the page.
            double nx0 = std::clamp(t.bbox.x0 / page.width, 0.0, 1.0);
            double nx1 = std::clamp(t.bbox.x1 / page.width, 0.0, 1.0);
            double ny0 = std::clamp(1.0 - t.bbox.y1 / page.height, 0.0, 1.0);
            double ny1 = std::clamp(1.0 - t.bbox.y0 / page.height, 0.0, 1.0);
            if (nx1 <= nx0 || ny1 <= ny0) continue;
            int cx0 = std::clamp(static_cast<int>(nx0 * grid.width), 0, grid.width - 1);
            int cx1 = std::clamp(static_cast<int>(std::ceil(nx1 * grid.width)) - 1, 0,
                                 grid.width - 1);
            int cy0 = std::clamp(static_cast<int>(ny0 * grid.height), 0, grid.height - 1);
            int cy1 = std::clamp(static_cast<int>(std::ceil(ny1 * grid.height)) - 1, 0,
                                 grid.height - 1);
            for (int cy = cy0; cy <= cy1; ++cy) {
                double cell_y0 = static_cast<double>(cy) / grid.height;
                double cell_y1 = static_cast<double>(cy + 1) / grid.height;
                double oy = std::min(ny1, cell_y1) - std::max(ny0, cell_y0);
                if (oy <= 0) continue;
                for (int cx = cx0; cx <= cx1; ++cx) {
                    double cell_x0 = static_cast<double>(cx) / grid.width;
                    double cell_x1 = static_cast<double>(cx + 1) / grid.width;
                    double ox = std::min(nx1, cell_x1) - std::max(nx0, cell_x0);
                    if (ox <= 0) continue;
                    grid.at(cx, cy) += ox * oy;
                }
            }
        }
    }
    return grid;
}

}  // namespace pdfcorpus
