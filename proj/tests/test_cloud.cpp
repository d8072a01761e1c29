#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coliseum/cloud.hpp"
#include "coliseum/escape.hpp"
#include "coliseum/nn.hpp"
#include "coliseum/rng.hpp"

#include <cmath>

using namespace coliseum;

namespace {

GeneratorSystem sys_zsq() { return GeneratorSystem({poly({0, 0, 1})}); }
GeneratorSystem sys_cheb() { return GeneratorSystem({poly({-2, 0, 1})}); }
GeneratorSystem sys_dc1() {
    Polynomial g1 = poly({-1, 0, 1});
    Polynomial g2 = poly({0, 0, 0.25});
    return GeneratorSystem({compose(g1, g1), compose(g2, g2)});
}

} // namespace

TEST_CASE("unit circle cloud") {
    CloudOptions opts;
    opts.n_points = 20000;
    opts.rng_seed = 5;
    auto cloud = julia_backward_cloud(sys_zsq(), opts);
    REQUIRE(cloud.size() == 20000);
    double worst = 0.0;
    for (const auto& z : cloud.points) worst = std::max(worst, std::abs(std::abs(z) - 1.0));
    CHECK(worst <= 1e-6);
}

TEST_CASE("chebyshev cloud lies on the real segment and neither escapes nor attracts") {
    CloudOptions opts;
    opts.n_points = 20000;
    opts.rng_seed = 5;
    auto system = sys_cheb();
    auto cloud = julia_backward_cloud(system, opts);
    const Polynomial& h = system.generator(0);
    int checked = 0;
    for (size_t i = 0; i < cloud.size(); i += 97) {
        const cplx& z = cloud.points[i];
        CHECK(std::abs(z.imag()) <= 1e-4);
        CHECK(std::abs(z.real()) <= 2.0 + 1e-4);
        // Escape-side oracle: depth-40 orbits from Julia points stay bounded.
        cplx w = z;
        for (int k = 0; k < 40; ++k) w = h(w);
        CHECK(std::abs(w) <= 4.0);
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("dc1 cloud stays in the invariant annulus region") {
    CloudOptions opts;
    opts.n_points = 20000;
    opts.rng_seed = 9;
    auto system = sys_dc1();
    auto cloud = julia_backward_cloud(system, opts);
    const Polynomial& h2 = system.generator(1);
    double bound = single_escape_radius(h2);
    for (size_t i = 0; i < cloud.size(); i += 53) {
        const cplx& z = cloud.points[i];
        CHECK(std::abs(z) >= 0.4 - 1e-9);
        cplx w = z;
        bool stays = true;
        for (int k = 0; k < 64 && stays; ++k) {
            w = h2(w);
            if (std::abs(w) > bound) stays = false;
        }
        CHECK(stays);
    }
}

TEST_CASE("cloud determinism and chain merge order") {
    CloudOptions opts;
    opts.n_points = 5000;
    opts.rng_seed = 123;
    auto a = julia_backward_cloud(sys_dc1(), opts, 1);
    auto b = julia_backward_cloud(sys_dc1(), opts, 4);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a.points[i] == b.points[i]); // bit-identical across thread counts
        CHECK(a.provenance[i] == b.provenance[i]);
    }
    auto c = julia_backward_cloud(sys_dc1(), opts, 1);
    for (size_t i = 0; i < a.size(); ++i) CHECK(a.points[i] == c.points[i]);
}

TEST_CASE("backward invariance of the cloud on subsamples") {
    CloudOptions opts;
    opts.n_points = 30000;
    opts.rng_seed = 4;
    auto system = sys_dc1();
    auto cloud = julia_backward_cloud(system, opts);
    double med = median_nn_distance(cloud.points);
    REQUIRE(med > 0.0);

    // Containment direction: every cloud point is close to a preimage of a
    // cloud point (sharp; the chaos game makes each point an exact preimage
    // of its predecessor).
    std::vector<cplx> pre;
    for (size_t i = 0; i < cloud.size(); ++i)
        for (const auto& h : system.generators())
            for (const auto& w : preimages(h, cloud.points[i])) pre.push_back(w);
    NnGrid pre_grid(pre, 4 * med);
    double containment = 0.0;
    for (const auto& z : cloud.points)
        containment = std::max(containment, pre_grid.nearest(z).distance);
    CHECK(containment <= 3 * med);

    // Coverage direction: preimages land within the sampler's coverage
    // radius of the cloud. The balanced measure covers J(G) unevenly, so
    // this tolerance is a diameter-scale sanity bound, not a mesh bound.
    NnGrid grid(cloud.points, 4 * med);
    for (size_t i = 0; i < cloud.size(); i += 449)
        for (const auto& h : system.generators())
            for (const auto& w : preimages(h, cloud.points[i]))
                CHECK(grid.nearest(w).distance <= 0.5);
}

TEST_CASE("kernel witnesses exist for dc1 cloud points") {
    CloudOptions opts;
    opts.n_points = 2000;
    opts.rng_seed = 31;
    auto system = sys_dc1();
    auto cloud = julia_backward_cloud(system, opts);
    EscapeParams params =
        certify_escape_params(system, TrapSpec::two_stage(cplx(0, 0), 0.4, 0), 12);
    Rng rng(8);
    for (int k = 0; k < 100; ++k) {
        const cplx& z = cloud.points[rng.next_index(cloud.size())];
        auto w = kernel_witness(z, system, params);
        CHECK(w.has_value());
    }
}
