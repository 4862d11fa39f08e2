#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdfcorpus/extract.hpp"
#include "pdfcorpus/geom.hpp"
#include "pdfcorpus/pdf/scan.hpp"

namespace pdfcorpus {

// Bucketed counts. For categorical data (PDF versions) labels name the
// buckets and edges are the integer bucket indexes 0..k.
struct Histogram {
    std::vector<double> bucket_edges;  // size = buckets + 1
    std::vector<uint64_t> counts;
    uint64_t total = 0;
    uint64_t undefined_count = 0;
    std::vector<std::string> labels;  // optional, categorical form

    void add(double value);
    void add_undefined();
    bool conserved() const;  // sum(counts) + undefined == total
    void merge(const Histogram& other);

    std::string to_csv() const;
};

Histogram year_histogram(const std::vector<pdf::ScanReport>& reports);
Histogram version_histogram(const std::vector<pdf::ScanReport>& reports);

struct WordCountStats {
    Histogram per_document;
    Histogram per_page;
};

// Per-page counts are token list lengths; per-document sums its pages.
WordCountStats word_count_stats(const std::vector<std::vector<PageText>>& documents,
                                double doc_bucket_width = 100, double doc_max = 10000,
                                double page_bucket_width = 25, double page_max = 1000);

// Fraction of the page covered by the union of token boxes, boxes clipped to
// the page rectangle first. Exact sweep-line union, no sampling.
double page_coverage(const PageText& page);
double page_coverage(const std::vector<Rect>& boxes, const Rect& page_box);

enum class PaperSeries { abc_series, letter, other };
enum class Orientation { vertical, horizontal };

struct FormatClass {
    PaperSeries series = PaperSeries::other;
    Orientation orientation = Orientation::vertical;
    double ratio = 0;  // max(w,h) / min(w,h)
};

// sqrt(2) within 0.02 -> A/B/C series; 792/612 within 0.02 -> LETTER.
// Throws std::invalid_argument on non-positive dimensions.
FormatClass classify_page_format(double width_pt, double height_pt);

// Token-box mass accumulated on a normalized grid; 100 cells along the short
// edge, 141 along the long one (the sqrt(2) page shape).
struct HeatmapGrid {
    int width = 0;
    int height = 0;
    std::vector<double> cells;  // row-major, row 0 = top of page
    uint64_t page_count = 0;

    double& at(int x, int y) { return cells[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return cells[static_cast<size_t>(y) * width + x]; }
    double max_cell() const;
    double total_mass() const;
    void merge(const HeatmapGrid& other);

    // P2 (ASCII) PGM, max cell scaled to 255.
    std::string to_pgm() const;
    std::string to_json() const;
};

HeatmapGrid accumulate_heatmap(const std::vector<PageText>& pages, Orientation orientation,
                               int short_edge_cells = 100);

double union_area(const std::vector<Rect>& rects);

}  // namespace pdfcorpus
