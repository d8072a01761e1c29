#pragma once

#include "coliseum/poly.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

namespace coliseum {

// Uniform-grid nearest-neighbor index over planar points; lookups expand
// ring by ring until the found distance is certified minimal, so results
// are exact.
class NnGrid {
public:
    NnGrid(std::vector<cplx> points, double cell_size)
        : points_(std::move(points)), cell_(cell_size > 0 ? cell_size : 1.0) {
        double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
        for (size_t i = 0; i < points_.size(); ++i) {
            const cplx& p = points_[i];
            if (i == 0) {
                lo_x = hi_x = p.real();
                lo_y = hi_y = p.imag();
            } else {
                lo_x = std::min(lo_x, p.real());
                hi_x = std::max(hi_x, p.real());
                lo_y = std::min(lo_y, p.imag());
                hi_y = std::max(hi_y, p.imag());
            }
            cells_[key_of(cell_index(p.real()), cell_index(p.imag()))].push_back(uint32_t(i));
        }
        double span = std::max(hi_x - lo_x, hi_y - lo_y);
        max_ring_ = long(span / cell_) + 2;
    }

    struct Hit {
        size_t index = size_t(-1);
        double distance = std::numeric_limits<double>::infinity();
    };

    Hit nearest(cplx q, size_t skip = size_t(-1)) const {
        long cx = cell_index(q.real());
        long cy = cell_index(q.imag());
        Hit best;
        for (long ring = 0; ring <= max_ring_; ++ring) {
            if (best.index != size_t(-1) && double(ring - 1) * cell_ > best.distance) break;
            scan_ring(q, cx, cy, ring, best, skip);
        }
        if (best.index == size_t(-1)) {
            // Query far outside the point bounding box: brute force.
            for (size_t i = 0; i < points_.size(); ++i) {
                if (i == skip) continue;
                double d = std::abs(points_[i] - q);
                if (d < best.distance) best = {i, d};
            }
        }
        return best;
    }

    const std::vector<cplx>& points() const { return points_; }
    size_t size() const { return points_.size(); }

private:
    long cell_index(double v) const { return long(std::floor(v / cell_)); }
    static uint64_t key_of(long cx, long cy) {
        return (uint64_t(uint32_t(cx)) << 32) | uint64_t(uint32_t(cy));
    }

    void scan_ring(cplx q, long cx, long cy, long ring, Hit& best, size_t skip) const {
        auto visit = [&](long x, long y) {
            auto it = cells_.find(key_of(x, y));
            if (it == cells_.end()) return;
            for (uint32_t i : it->second) {
                if (size_t(i) == skip) continue;
                double d = std::abs(points_[i] - q);
                if (d < best.distance) best = {size_t(i), d};
            }
        };
        if (ring == 0) {
            visit(cx, cy);
            return;
        }
        for (long x = cx - ring; x <= cx + ring; ++x) {
            visit(x, cy - ring);
            visit(x, cy + ring);
        }
        for (long y = cy - ring + 1; y <= cy + ring - 1; ++y) {
            visit(cx - ring, y);
            visit(cx + ring, y);
        }
    }

    std::vector<cplx> points_;
    double cell_;
    long max_ring_ = 0;
    std::unordered_map<uint64_t, std::vector<uint32_t>> cells_;
};

// Median nearest-neighbor distance of a point set (0 when duplicates
// dominate).
double median_nn_distance(const std::vector<cplx>& points);

// One-sided Hausdorff distance sup_{a in from} dist(a, to).
double directed_hausdorff(const std::vector<cplx>& from, const NnGrid& to);

} // namespace coliseum
