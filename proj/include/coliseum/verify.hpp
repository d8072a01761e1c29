#pragma once

#include "coliseum/cloud.hpp"
#include "coliseum/escape.hpp"
#include "coliseum/markov.hpp"
#include "coliseum/poly.hpp"

#include <functional>
#include <string>
#include <vector>

namespace coliseum {

// Backward self-similarity J(G) = union_j h_j^{-1}(J(G)), in two discrete
// directions. The containment direction (cloud into preimage set) is sharp
// and carries the verdict; the coverage direction measures how uniformly
// the sampler resolved J(G) and is reported alongside.
struct BackwardSimilarityReport {
    double containment = 0.0;      // sup_{z in cloud} d(z, union preimages)
    double coverage_max = 0.0;     // sup_{w in preimages} d(w, cloud)
    double coverage_mean = 0.0;
    double median_nn = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

BackwardSimilarityReport check_backward_self_similarity(const GeneratorSystem& system,
                                                        const PointCloud& cloud, double tol);

struct DisjointPreimagesReport {
    double min_distance = 0.0; // min over i<j between h_i^{-1}(cloud), h_j^{-1}(cloud)
    double median_nn = 0.0;
    bool pass = false; // margin >= 5x median nearest-neighbor distance
};

DisjointPreimagesReport check_disjoint_preimages(const GeneratorSystem& system,
                                                 const PointCloud& cloud);

struct OpenSetReport {
    int samples_tested = 0;
    int containment_failures = 0; // preimages leaving the region
    double min_branch_separation = 0.0;
    bool pass = false;
};

// Open set condition: for sampled z in U, every inverse branch stays in U
// and the branch images are pairwise disjoint. The region is supplied as a
// membership predicate plus a sampling box.
OpenSetReport check_open_set_condition(const GeneratorSystem& system,
                                       const std::function<bool(cplx)>& region,
                                       double xmin, double xmax, double ymin, double ymax,
                                       int samples, uint64_t rng_seed);

struct FixedPointReport {
    double max_gap = 0.0;            // sup over pixels of the interval gap
    double global_bound = 0.0;       // 2 max cell width + interpolation modulus
    int violations = 0;              // pixels whose gap exceeds the local bound
    int unresolved_pixels = 0;       // off-grid lookups not settled by escape/trap
    bool pass = false;
};

// M_tau(T) = T on the raster: the per-pixel interval gap must stay within
// twice the local cell widths plus the local interpolation oscillation.
FixedPointReport check_fixed_point(const Raster& T, const RandomModel& model,
                                   const EscapeParams& params, int threads = 1);

struct LevelOrderReport {
    int barrier_pixels = 0;
    int target_pixels = 0;
    int reached_targets = 0;
    bool band_empty = false;
    bool pass = false;
};

// Surrounding order of level sets: flood fill from the raster border must
// not reach the t1 level band without crossing the t2 band.
LevelOrderReport check_level_order(const Raster& T, double t1, double t2, double band_eps);

struct RangeReport {
    int band_pixels = 0;
    std::vector<int> histogram; // 20 bins over [0,1]
    int missed_bins = 0;
    bool pass = false;
};

// T restricted to the Julia band attains every value bin in [0,1].
RangeReport check_range_full(const Raster& T, double bin_width = 0.05, double band_eps = 0.02);

struct GlobalHoelderReport {
    double t_admissible = 0.0;
    double max_derivative_norm = 0.0; // max ||h_j'|| over preimages of the cloud
    double observed_constant = 0.0;   // max |T(z1)-T(z2)| / d^t over sampled pairs
    int pairs_tested = 0;
};

GlobalHoelderReport check_global_hoelder(const RandomModel& model,
                                         const std::function<Interval(cplx)>& evaluator,
                                         const PointCloud& cloud, int pairs, uint64_t rng_seed);

} // namespace coliseum
