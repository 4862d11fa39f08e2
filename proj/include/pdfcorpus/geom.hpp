#pragma once

#include <vector>

namespace pdfcorpus {

struct Rect {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return valid() ? width() * height() : 0.0; }
    bool valid() const { return x0 < x1 && y0 < y1; }

    bool intersects(const Rect& o) const {
        return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
    }
    Rect intersection(const Rect& o) const {
        return Rect{std::max(x0, o.x0), std::max(y0, o.y0), std::min(x1, o.x1),
                    std::min(y1, o.y1)};
    }
    Rect united(const Rect& o) const {
        return Rect{std::min(x0, o.x0), std::min(y0, o.y0), std::max(x1, o.x1),
                    std::max(y1, o.y1)};
    }
};

// Exact area of the union of rectangles via a sweep over x with interval
// merging on y. Invalid (empty) rectangles contribute nothing.
double union_area(const std::vector<Rect>& rects);

}  // namespace pdfcorpus
