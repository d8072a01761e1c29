#pragma once

#include "coliseum/escape.hpp"
#include "coliseum/interval.hpp"
#include "coliseum/poly.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace coliseum {

// Rectangular grid of interval values over a bounding box in the plane.
struct Raster {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    int nx = 0, ny = 0;
    std::vector<Interval> cells; // row-major, y fastest varying last (row = y)

    Interval& at(int ix, int iy) { return cells[size_t(iy) * nx + ix]; }
    const Interval& at(int ix, int iy) const { return cells[size_t(iy) * nx + ix]; }
    cplx center(int ix, int iy) const {
        double x = xmin + (double(ix) + 0.5) * (xmax - xmin) / nx;
        double y = ymin + (double(iy) + 0.5) * (ymax - ymin) / ny;
        return {x, y};
    }
    bool inside(cplx z) const {
        return z.real() >= xmin && z.real() <= xmax && z.imag() >= ymin && z.imag() <= ymax;
    }
    double max_width() const;
};

struct TreeParams {
    int depth = 24;
    double prune_mass = 1e-6; // branches below this weight count as slack
};

// Exact bounded recursion for the escape probability: expands the weighted
// word tree, resolves leaves against the certified radius and trap, and
// returns [lo, hi] whose width is exactly the unresolved probability mass.
Interval t_infinity_exact(cplx z, const RandomModel& model, const EscapeParams& params,
                          const TreeParams& tree = {});

struct TMcResult {
    double estimate = 0.0;
    double stderr_ = 0.0;
    double indeterminate = 0.0;
    bool flagged = false; // indeterminate mass above threshold
};

// Monte Carlo escape probability: fraction of i.i.d. random orbits that
// escape before hitting the trap or the depth limit.
TMcResult t_infinity_mc(cplx z, const RandomModel& model, const EscapeParams& params,
                        uint64_t trials, uint64_t rng_seed, int max_depth = 256,
                        double indeterminate_threshold = 0.01);

// Per-pixel t_infinity_exact at pixel centers; data-parallel, deterministic.
Raster t_raster(const RandomModel& model, const EscapeParams& params, double xmin,
                double xmax, double ymin, double ymax, int nx, int ny,
                const TreeParams& tree = {}, int threads = 1);

struct MTauResult {
    Raster raster;
    int unresolved_lookups = 0;   // off-grid images not settled by escape/trap
    double interpolation_modulus = 0.0; // max oscillation over used stencils
};

// Transition operator on a raster: (M_tau phi)(z) = sum_j p_j phi(h_j(z)),
// with bilinear interpolation of the interval bounds. Off-grid images are
// resolved by the escape/trap rules or counted as unresolved.
MTauResult m_tau_apply(const Raster& raster, const RandomModel& model,
                       const EscapeParams& params, int threads = 1);

struct MinimalSetReport {
    struct Cluster {
        std::vector<cplx> points;
        cplx centroid;
        double diameter = 0.0;
        bool is_infinity = false;
        int period = 0;        // r_L for minimal clusters, 0 otherwise
        bool minimal = false;  // member of a bottom strongly connected component
    };
    std::vector<Cluster> clusters;
    // transition[k][j] = cluster reached from cluster k under generator j.
    std::vector<std::vector<int>> transition;
    bool ambiguous_clustering = false;
    bool slow_convergence = false;
    std::string note;

    int minimal_count() const;
    int period_sum() const; // sum of r_L over minimal sets
};

struct MinimalSetOptions {
    int burn_in = 512;
    int samples = 64; // retained post-burn-in iterates per seed
    uint64_t rng_seed = 1;
    double gap_factor = 20.0; // single-linkage gap threshold, x median NN
};

// Clusters long random forward orbits, builds the generator-transition
// graph on clusters, and reads off minimal sets as bottom strongly
// connected components with their cyclic periods r_L.
MinimalSetReport minimal_sets(const RandomModel& model, const std::vector<cplx>& seeds,
                              const EscapeParams& params, const MinimalSetOptions& opts = {});

struct TMinimalResult {
    std::vector<double> probabilities; // one per cluster in the report
    std::vector<uint64_t> counts;
    double indeterminate = 0.0;
    bool flagged = false;
};

// Monte Carlo probability of converging to each minimal set.
TMinimalResult t_minimal_mc(cplx z, const RandomModel& model, const MinimalSetReport& report,
                            const EscapeParams& params, uint64_t trials, uint64_t rng_seed,
                            int max_depth = 512, double indeterminate_threshold = 0.02);

struct ContractionEstimate {
    double eta = 0.0;     // estimated per-step contraction factor, < 1 when contracting
    int probes_used = 0;
    bool contracting = false;
};

// Least-squares slope of log |(gamma_n o ... o gamma_1)'(z)| over random
// words started at Fatou probes near the attractor.
ContractionEstimate contraction_rate(const RandomModel& model, const std::vector<cplx>& probes,
                                     const EscapeParams& params, int word_length,
                                     int words_per_probe, uint64_t rng_seed);

} // namespace coliseum
