#pragma once

#include <algorithm>
#include <cmath>

namespace coliseum {

// Closed interval [lo, hi] within [0,1]; hi - lo is certified truncation
// error of a probability value.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }

    static Interval exact(double v) { return {v, v}; }
    static Interval unknown() { return {0.0, 1.0}; }

    bool contains(double v) const { return lo <= v && v <= hi; }
    bool contains(const Interval& other, double eps = 0.0) const {
        return lo - eps <= other.lo && other.hi <= hi + eps;
    }
};

// Gap between intervals as sets: 0 when they intersect.
inline double interval_gap(const Interval& a, const Interval& b) {
    return std::max(0.0, std::max(a.lo - b.hi, b.lo - a.hi));
}

} // namespace coliseum
