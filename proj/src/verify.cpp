#include "coliseum/verify.hpp"

#include "coliseum/nn.hpp"
#include "coliseum/par.hpp"
#include "coliseum/rng.hpp"
#include "coliseum/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace coliseum {

BackwardSimilarityReport check_backward_self_similarity(const GeneratorSystem& system,
                                                        const PointCloud& cloud, double tol) {
    BackwardSimilarityReport report;
    report.tolerance = tol;
    report.median_nn = median_nn_distance(cloud.points);

    std::vector<cplx> pre;
    pre.reserve(cloud.size() * 4);
    for (const auto& z : cloud.points)
        for (const auto& h : system.generators())
            for (const auto& w : preimages(h, z)) pre.push_back(w);

    double cell = std::max(report.median_nn * 4.0, 1e-12);
    NnGrid pre_grid(pre, cell);
    for (const auto& z : cloud.points)
        report.containment = std::max(report.containment, pre_grid.nearest(z).distance);

    NnGrid cloud_grid(cloud.points, cell);
    double total = 0.0;
    for (const auto& w : pre) {
        double d = cloud_grid.nearest(w).distance;
        report.coverage_max = std::max(report.coverage_max, d);
        total += d;
    }
    report.coverage_mean = total / double(pre.size());
    report.pass = report.containment <= tol;
    return report;
}

DisjointPreimagesReport check_disjoint_preimages(const GeneratorSystem& system,
                                                 const PointCloud& cloud) {
    DisjointPreimagesReport report;
    report.median_nn = median_nn_distance(cloud.points);
    if (system.size() < 2) return report;

    std::vector<std::vector<cplx>> pieces(system.size());
    for (const auto& z : cloud.points)
        for (size_t j = 0; j < system.size(); ++j)
            for (const auto& w : preimages(system.generator(j), z)) pieces[j].push_back(w);

    double best = std::numeric_limits<double>::infinity();
    double cell = std::max(report.median_nn * 4.0, 1e-12);
    for (size_t i = 0; i + 1 < system.size(); ++i) {
        NnGrid grid(pieces[i], cell);
        for (size_t j = i + 1; j < system.size(); ++j)
            for (const auto& w : pieces[j]) best = std::min(best, grid.nearest(w).distance);
    }
    report.min_distance = best;
    report.pass = best >= 5.0 * report.median_nn;
    return report;
}

OpenSetReport check_open_set_condition(const GeneratorSystem& system,
                                       const std::function<bool(cplx)>& region,
                                       double xmin, double xmax, double ymin, double ymax,
                                       int samples, uint64_t rng_seed) {
    OpenSetReport report;
    report.min_branch_separation = std::numeric_limits<double>::infinity();
    Rng rng(rng_seed);
    int tested = 0;
    long attempts = 0;
    const long max_attempts = 1000L * samples + 1000;
    std::vector<std::vector<cplx>> pooled(system.size());
    while (tested < samples && attempts++ < max_attempts) {
        cplx z(xmin + (xmax - xmin) * rng.next_double(), ymin + (ymax - ymin) * rng.next_double());
        if (!region(z)) continue;
        ++tested;
        for (size_t j = 0; j < system.size(); ++j) {
            for (const auto& w : preimages(system.generator(j), z)) {
                if (!region(w)) ++report.containment_failures;
                pooled[j].push_back(w);
            }
        }
    }
    report.samples_tested = tested;

    // Branch-image regions must be pairwise disjoint: compare the pooled
    // branch sets across generators, at the resolution the sampling itself
    // achieves (overlapping regions collapse the cross distance to the
    // within-set spacing, disjoint regions keep a gap well above it).
    bool separated = true;
    if (system.size() >= 2 && tested > 0) {
        double resolution = 0.0;
        for (const auto& pts : pooled) resolution = std::max(resolution, median_nn_distance(pts));
        double cell = std::max(resolution, 1e-12);
        for (size_t i = 0; i + 1 < system.size(); ++i) {
            NnGrid grid(pooled[i], cell);
            for (size_t j = i + 1; j < system.size(); ++j)
                for (const auto& w : pooled[j])
                    report.min_branch_separation =
                        std::min(report.min_branch_separation, grid.nearest(w).distance);
        }
        separated = report.min_branch_separation > 3.0 * resolution;
    }
    report.pass = tested > 0 && report.containment_failures == 0 && separated;
    return report;
}

FixedPointReport check_fixed_point(const Raster& T, const RandomModel& model,
                                   const EscapeParams& params, int threads) {
    FixedPointReport report;
    report.global_bound = 2.0 * T.max_width();

    struct RowStat {
        double max_gap = 0.0;
        double max_osc = 0.0;
        int violations = 0;
        int unresolved = 0;
    };
    std::vector<RowStat> rows(T.ny);

    double dx = (T.xmax - T.xmin) / T.nx;
    double dy = (T.ymax - T.ymin) / T.ny;

    parallel_for(size_t(T.ny), threads, [&](size_t iy) {
        RowStat& stat = rows[iy];
        for (int ix = 0; ix < T.nx; ++ix) {
            cplx z = T.center(ix, int(iy));
            const Interval& here = T.at(ix, int(iy));
            double lo = 0.0, hi = 0.0;
            double local_osc = 0.0;
            double local_w = here.width();
            bool unresolved = false;
            for (size_t j = 0; j < model.size(); ++j) {
                double p = model.weights()[j];
                cplx w = model.system().generator(j)(z);
                Interval term;
                if (T.inside(w)) {
                    double fx = (w.real() - T.xmin) / dx - 0.5;
                    double fy = (w.imag() - T.ymin) / dy - 0.5;
                    int jx = std::clamp(int(std::floor(fx)), 0, T.nx - 2);
                    int jy = std::clamp(int(std::floor(fy)), 0, T.ny - 2);
                    double tx = std::clamp(fx - jx, 0.0, 1.0);
                    double ty = std::clamp(fy - jy, 0.0, 1.0);
                    const Interval& c00 = T.at(jx, jy);
                    const Interval& c10 = T.at(jx + 1, jy);
                    const Interval& c01 = T.at(jx, jy + 1);
                    const Interval& c11 = T.at(jx + 1, jy + 1);
                    auto blend = [&](double a, double b, double c, double d) {
                        return (1 - ty) * ((1 - tx) * a + tx * b) + ty * ((1 - tx) * c + tx * d);
                    };
                    term = {blend(c00.lo, c10.lo, c01.lo, c11.lo),
                            blend(c00.hi, c10.hi, c01.hi, c11.hi)};
                    // Interpolation modulus at the lookup: oscillation over
                    // the 4x4 block around the stencil. T keeps oscillating
                    // below pixel scale on the Julia set, so the bare 2x2
                    // stencil spread undershoots the true local modulus.
                    double osc_lo = 2.0, osc_hi = -1.0;
                    for (int wy = jy - 1; wy <= jy + 2; ++wy) {
                        for (int wx = jx - 1; wx <= jx + 2; ++wx) {
                            if (wx < 0 || wy < 0 || wx >= T.nx || wy >= T.ny) continue;
                            const Interval& c = T.at(wx, wy);
                            osc_lo = std::min(osc_lo, c.lo);
                            osc_hi = std::max(osc_hi, c.hi);
                        }
                    }
                    local_osc = std::max(local_osc, osc_hi - osc_lo);
                    local_w = std::max({local_w, c00.width(), c10.width(), c01.width(), c11.width()});
                } else if (std::abs(w) > params.radius) {
                    term = Interval::exact(1.0);
                } else if (params.trapped(model.system(), w)) {
                    term = Interval::exact(0.0);
                } else {
                    unresolved = true;
                    break;
                }
                lo += p * term.lo;
                hi += p * term.hi;
            }
            if (unresolved) {
                ++stat.unresolved;
                continue;
            }
            double gap = interval_gap(here, {lo, hi});
            stat.max_gap = std::max(stat.max_gap, gap);
            stat.max_osc = std::max(stat.max_osc, local_osc);
            if (gap > 2.0 * local_w + local_osc + 1e-12) ++stat.violations;
        }
    });

    double modulus = 0.0;
    for (const auto& s : rows) {
        report.max_gap = std::max(report.max_gap, s.max_gap);
        modulus = std::max(modulus, s.max_osc);
        report.violations += s.violations;
        report.unresolved_pixels += s.unresolved;
    }
    report.global_bound += modulus;
    report.pass = report.violations == 0 && report.max_gap <= report.global_bound;
    return report;
}

namespace {

std::vector<char> julia_band(const Raster& T, double band_eps) {
    std::vector<char> band(T.cells.size(), 0);
    for (int iy = 0; iy < T.ny; ++iy) {
        for (int ix = 0; ix < T.nx; ++ix) {
            double lo = 2.0, hi = -1.0;
            for (int sy = -1; sy <= 1; ++sy) {
                for (int sx = -1; sx <= 1; ++sx) {
                    int x = ix + sx, y = iy + sy;
                    if (x < 0 || y < 0 || x >= T.nx || y >= T.ny) continue;
                    double m = T.at(x, y).mid();
                    lo = std::min(lo, m);
                    hi = std::max(hi, m);
                }
            }
            if (hi - lo > 2.0 * band_eps) band[size_t(iy) * T.nx + ix] = 1;
        }
    }
    return band;
}

} // namespace

LevelOrderReport check_level_order(const Raster& T, double t1, double t2, double band_eps) {
    LevelOrderReport report;
    std::vector<char> band = julia_band(T, band_eps);

    // Barrier: pixels whose interval could contain the level t2.
    std::vector<char> barrier(T.cells.size(), 0);
    for (size_t i = 0; i < T.cells.size(); ++i)
        if (T.cells[i].lo - band_eps <= t2 && t2 <= T.cells[i].hi + band_eps) {
            barrier[i] = 1;
            ++report.barrier_pixels;
        }
    for (size_t i = 0; i < T.cells.size(); ++i)
        if (band[i] && std::abs(T.cells[i].mid() - t1) <= band_eps) ++report.target_pixels;
    if (report.barrier_pixels == 0 || report.target_pixels == 0) {
        report.band_empty = true;
        return report;
    }

    // 8-connected flood fill from the border through the barrier complement.
    std::vector<char> seen(T.cells.size(), 0);
    std::deque<std::pair<int, int>> queue;
    auto push = [&](int x, int y) {
        size_t i = size_t(y) * T.nx + x;
        if (seen[i] || barrier[i]) return;
        seen[i] = 1;
        queue.push_back({x, y});
    };
    for (int x = 0; x < T.nx; ++x) {
        push(x, 0);
        push(x, T.ny - 1);
    }
    for (int y = 0; y < T.ny; ++y) {
        push(0, y);
        push(T.nx - 1, y);
    }
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        for (int sy = -1; sy <= 1; ++sy)
            for (int sx = -1; sx <= 1; ++sx) {
                int nx2 = x + sx, ny2 = y + sy;
                if (nx2 < 0 || ny2 < 0 || nx2 >= T.nx || ny2 >= T.ny) continue;
                push(nx2, ny2);
            }
    }
    for (int iy = 0; iy < T.ny; ++iy)
        for (int ix = 0; ix < T.nx; ++ix) {
            size_t i = size_t(iy) * T.nx + ix;
            if (seen[i] && band[i] && std::abs(T.cells[i].mid() - t1) <= band_eps)
                ++report.reached_targets;
        }
    report.pass = report.reached_targets == 0;
    return report;
}

RangeReport check_range_full(const Raster& T, double bin_width, double band_eps) {
    RangeReport report;
    int bins = int(std::round(1.0 / bin_width));
    report.histogram.assign(bins, 0);
    std::vector<char> band = julia_band(T, band_eps);
    for (size_t i = 0; i < T.cells.size(); ++i) {
        if (!band[i]) continue;
        ++report.band_pixels;
        int b = std::min(bins - 1, int(T.cells[i].mid() / bin_width));
        ++report.histogram[b];
    }
    for (int b = 0; b < bins; ++b)
        if (report.histogram[b] == 0) ++report.missed_bins;
    report.pass = report.band_pixels > 0 && report.missed_bins == 0;
    return report;
}

GlobalHoelderReport check_global_hoelder(const RandomModel& model,
                                         const std::function<Interval(cplx)>& evaluator,
                                         const PointCloud& cloud, int pairs, uint64_t rng_seed) {
    GlobalHoelderReport report;
    std::vector<Polynomial> derivs;
    for (const auto& h : model.system().generators()) derivs.push_back(h.derivative());

    // Max derivative norm over the preimage pieces, from a cloud subsample.
    Rng rng(rng_seed);
    size_t step = std::max<size_t>(1, cloud.size() / 512);
    for (size_t i = 0; i < cloud.size(); i += step) {
        for (size_t j = 0; j < model.size(); ++j)
            for (const auto& w : preimages(model.system().generator(j), cloud.points[i]))
                report.max_derivative_norm =
                    std::max(report.max_derivative_norm,
                             deriv_norm(model.system().generator(j), derivs[j], w,
                                        DerivMetric::Spherical));
    }

    double max_p = *std::max_element(model.weights().begin(), model.weights().end());
    if (report.max_derivative_norm > 1.0)
        report.t_admissible = 0.99 * std::log(1.0 / max_p) / std::log(report.max_derivative_norm);
    else
        report.t_admissible = 1.0;

    for (int k = 0; k < pairs; ++k) {
        cplx a = cloud.points[rng.next_index(cloud.size())];
        cplx b = cloud.points[rng.next_index(cloud.size())];
        double d = std::abs(a - b);
        if (d < 1e-12) continue;
        double diff = std::abs(evaluator(a).mid() - evaluator(b).mid());
        report.observed_constant =
            std::max(report.observed_constant, diff / std::pow(d, report.t_admissible));
        ++report.pairs_tested;
    }
    return report;
}

} // namespace coliseum
