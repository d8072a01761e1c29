#pragma once

#include "coliseum/poly.hpp"

#include <cstdint>
#include <vector>

namespace coliseum {

// Weighted sample of J(G); the discrete substrate for transfer operators,
// dimension estimates and Hausdorff-measure quadrature.
struct PointCloud {
    std::vector<cplx> points;
    std::vector<double> weights;    // nonnegative, sums to 1
    std::vector<int> provenance;    // last inverse branch taken (generator index)

    size_t size() const { return points.size(); }
    void validate() const;
};

struct CloudOptions {
    int n_points = 100000;
    int burn_in = 64;
    uint64_t rng_seed = 1;
    int chains = 8;
    // Branch selection. Uniform picks a generator uniformly, then a root
    // uniformly; it samples the balanced measure, whose coverage of J(G)
    // can be severely nonuniform. Conformal weights every candidate branch
    // by the spherical derivative to the power -t, approximating the
    // t-conformal measure; with t near dim_H J(G) the samples cover J(G)
    // at a nearly uniform resolution.
    enum class Branches { Uniform, Conformal };
    Branches branches = Branches::Uniform;
    double conformal_exponent = 1.0;
};

// Inverse-branch chaos game approximating J(G): repeatedly pick a generator
// uniformly, then a uniformly random root of h_j(w) = z. Runs `chains`
// independent chains with derived seeds, merged in chain order, so the
// result is bit-identical for a fixed seed regardless of thread count.
PointCloud julia_backward_cloud(const GeneratorSystem& system, const CloudOptions& opts,
                                int threads = 1);

// Repelling fixed point of the first generator, used to seed the chains.
cplx repelling_seed(const GeneratorSystem& system);

} // namespace coliseum
