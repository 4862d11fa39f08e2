#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdfcorpus/geom.hpp"
#include "pdfcorpus/pdf/document.hpp"

namespace pdfcorpus {

// One extracted word with its box in rotation-normalized page points
// (origin bottom-left of the displayed page).
struct Token {
    std::string text;  // UTF-8, no internal whitespace
    int page_index = 0;
    Rect bbox;
    bool visible = true;
};

struct PageText {
    int page_index = 0;
    std::vector<Token> tokens;  // reading order
    int line_count = 0;
    double width = 0;   // displayed page size in points
    double height = 0;
};

struct ExtractOptions {
    // Split a run into two tokens when the pen jumps more than this fraction
    // of the font size along the baseline.
    double gap_factor = 0.25;
    // Tokens share a line when their vertical centers differ by less than
    // this fraction of the median token height.
    double line_cluster_factor = 0.5;
    // A column split needs a full-height whitespace band at least this many
    // median token heights wide.
    double column_gap_factor = 1.0;
};

std::vector<PageText> extract_tokens(const pdf::Document& doc, const ExtractOptions& options = {});

// XY-cut ordering: widest vertical whitespace band first (columns), then line
// clustering top to bottom, left to right within a line (right to left for
// predominantly RTL lines). Pure permutation of the input.
std::vector<Token> reading_order(std::vector<Token> tokens, const ExtractOptions& options = {});

// Number of line clusters over the page's tokens.
int count_lines(const PageText& page, const ExtractOptions& options = {});

// Whitespace-normalized concatenation of token texts in reading order.
std::string page_plain_text(const PageText& page);

// One JSON object per page: {"page":0,"width":..,"height":..,"line_count":..,
// "tokens":[[text,x0,y0,x1,y1,visible],...]}. This is the on-disk contract
// between extraction, language identification, and the statistics suite.
std::string page_text_to_json(const PageText& page);
std::optional<PageText> page_text_from_json(std::string_view line);

}  // namespace pdfcorpus
