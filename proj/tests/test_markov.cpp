#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coliseum/markov.hpp"
#include "coliseum/rng.hpp"
#include "common.hpp"

#include <cmath>

using namespace coliseum;
using namespace coliseum::testing;

namespace {

EscapeParams params_two() {
    return certify_escape_params(sys_two(), TrapSpec::disk(cplx(0, 0), 0.5));
}
EscapeParams params_dc1() { return certify_escape_params(sys_dc1(), dc1_trap()); }

} // namespace

TEST_CASE("exact recursion base cases") {
    auto model = model_two();
    auto params = params_two();
    Interval far = t_infinity_exact(cplx(10, 0), model, params);
    CHECK(far.lo == 1.0);
    CHECK(far.hi == 1.0);

    auto dc1 = model_dc1();
    auto pdc1 = params_dc1();
    Interval zero = t_infinity_exact(cplx(0, 0), dc1, pdc1);
    CHECK(zero.lo == 0.0);
    CHECK(zero.hi == 0.0);
    // -1 is a superattracting fixed point of h1, inside K(h1): the two-stage
    // trap resolves it at depth 0.
    Interval minus1 = t_infinity_exact(cplx(-1, 0), dc1, pdc1);
    CHECK(minus1.lo == 0.0);
    CHECK(minus1.hi == 0.0);
}

TEST_CASE("exact recursion width and MC cross-oracle at z = 1.2") {
    auto dc1 = model_dc1();
    auto pdc1 = params_dc1();
    Interval exact = t_infinity_exact(cplx(1.2, 0), dc1, pdc1, {24, 1e-6});
    CHECK(exact.width() <= 0.01);
    auto mc = t_infinity_mc(cplx(1.2, 0), dc1, pdc1, 20000, 71);
    CHECK_FALSE(mc.flagged);
    CHECK(std::abs(mc.estimate - exact.mid()) <=
          3 * mc.stderr_ + 0.5 * exact.width() + mc.indeterminate);
}

TEST_CASE("mc base cases resolve exactly") {
    auto model = model_two();
    auto params = params_two();
    auto far = t_infinity_mc(cplx(9, 0), model, params, 500, 3);
    CHECK(far.estimate == 1.0);
    auto dc1 = model_dc1();
    auto pdc1 = params_dc1();
    auto zero = t_infinity_mc(cplx(0, 0), dc1, pdc1, 500, 3);
    CHECK(zero.estimate == 0.0);
    CHECK(zero.indeterminate == 0.0);
}

TEST_CASE("interval nesting under depth refinement") {
    auto dc1 = model_dc1();
    auto pdc1 = params_dc1();
    Rng rng(41);
    for (int k = 0; k < 40; ++k) {
        cplx z(8 * rng.next_double() - 4, 8 * rng.next_double() - 4);
        Interval coarse = t_infinity_exact(z, dc1, pdc1, {10, 1e-9});
        Interval fine = t_infinity_exact(z, dc1, pdc1, {18, 1e-9});
        CHECK(coarse.contains(fine, 1e-14));
    }
}

TEST_CASE("mc/exact consistency on random probes") {
    auto dc1 = model_dc1();
    auto pdc1 = params_dc1();
    Rng rng(43);
    // A strict 3-sigma gate over 100 independent probes trips about a
    // quarter of the time on correct code; allow a small exceedance budget
    // with a hard cap instead.
    int over_3sigma = 0;
    for (int k = 0; k < 100; ++k) {
        cplx z(9 * rng.next_double() - 4.5, 9 * rng.next_double() - 4.5);
        Interval exact = t_infinity_exact(z, dc1, pdc1, {24, 1e-6});
        auto mc = t_infinity_mc(z, dc1, pdc1, 2000, 100 + k);
        double slack = 0.5 * exact.width() + mc.indeterminate + 1e-12;
        double dev = std::abs(mc.estimate - exact.mid());
        if (dev > 3 * mc.stderr_ + slack) ++over_3sigma;
        CHECK(dev <= 4.5 * mc.stderr_ + slack);
    }
    CHECK(over_3sigma <= 2);
}

TEST_CASE("raster base cases") {
    auto model = model_two();
    auto params = params_two();
    Raster r = t_raster(model, params, -10, 10, -10, 10, 64, 64, {16, 1e-6});
    for (int iy = 0; iy < r.ny; ++iy) {
        for (int ix = 0; ix < r.nx; ++ix) {
            cplx z = r.center(ix, iy);
            const Interval& v = r.at(ix, iy);
            if (std::abs(z) < 0.4) {
                CHECK(v.lo == 0.0);
                CHECK(v.hi == 0.0);
            }
            if (std::abs(z) > 8.0)
                CHECK(v.lo == 1.0);
        }
    }
}

TEST_CASE("raster determinism across thread counts") {
    auto dc1 = model_dc1();
    auto pdc1 = params_dc1();
    Raster a = t_raster(dc1, pdc1, -5.2, 5.2, -5.2, 5.2, 32, 32, {12, 1e-6}, 1);
    Raster b = t_raster(dc1, pdc1, -5.2, 5.2, -5.2, 5.2, 32, 32, {12, 1e-6}, 4);
    for (size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].lo == b.cells[i].lo);
        CHECK(a.cells[i].hi == b.cells[i].hi);
    }
}

TEST_CASE("transition operator fixes constants") {
    auto model = model_two();
    auto params = params_two();
    Raster r;
    r.xmin = r.ymin = -0.5;
    r.xmax = r.ymax = 0.5;
    r.nx = r.ny = 16;
    r.cells.assign(256, Interval::exact(0.37));
    // All images of the box stay in the box, so the result is the same
    // affine combination everywhere.
    auto out = m_tau_apply(r, model, params);
    CHECK(out.unresolved_lookups == 0);
    for (const auto& c : out.raster.cells) {
        CHECK(c.lo == doctest::Approx(0.37).epsilon(1e-14));
        CHECK(c.width() <= 1e-14);
    }
}

TEST_CASE("transition operator against a direct-summation oracle") {
    auto model = model_two();
    auto params = params_two();
    Raster r;
    r.xmin = r.ymin = -0.5;
    r.xmax = r.ymax = 0.5;
    r.nx = r.ny = 64;
    r.cells.resize(size_t(r.nx) * r.ny);
    auto bump = [](cplx z) { return std::exp(-8.0 * std::norm(z)); };
    for (int iy = 0; iy < r.ny; ++iy)
        for (int ix = 0; ix < r.nx; ++ix)
            r.at(ix, iy) = Interval::exact(bump(r.center(ix, iy)));

    auto out = m_tau_apply(r, model, params);

    // Independent bilinear lookup written from scratch.
    auto lookup = [&](cplx w) {
        double dx = (r.xmax - r.xmin) / r.nx;
        double gx = (w.real() - r.xmin) / dx - 0.5;
        double gy = (w.imag() - r.ymin) / dx - 0.5;
        int ix = std::clamp(int(std::floor(gx)), 0, r.nx - 2);
        int iy = std::clamp(int(std::floor(gy)), 0, r.ny - 2);
        double tx = std::clamp(gx - ix, 0.0, 1.0);
        double ty = std::clamp(gy - iy, 0.0, 1.0);
        double v00 = r.at(ix, iy).lo, v10 = r.at(ix + 1, iy).lo;
        double v01 = r.at(ix, iy + 1).lo, v11 = r.at(ix + 1, iy + 1).lo;
        return (1 - ty) * ((1 - tx) * v00 + tx * v10) + ty * ((1 - tx) * v01 + tx * v11);
    };
    Rng rng(77);
    for (int probe = 0; probe < 10; ++probe) {
        int ix = 8 + int(rng.next_index(48));
        int iy = 8 + int(rng.next_index(48));
        cplx z = r.center(ix, iy);
        double expected = 0.0;
        for (size_t j = 0; j < model.size(); ++j)
            expected += model.weights()[j] * lookup(model.system().generator(j)(z));
        CHECK(out.raster.at(ix, iy).mid() == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("minimal sets of the two-attractor system") {
    auto model = model_two();
    auto params = params_two();
    std::vector<cplx> seeds;
    for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j) seeds.push_back(cplx(0.61 * i, 0.61 * j));
    auto report = minimal_sets(model, seeds, params, {});
    CHECK(report.minimal_count() == 2);
    CHECK(report.period_sum() == 2);
    bool has_inf = false, has_zero = false;
    for (const auto& c : report.clusters) {
        if (!c.minimal) continue;
        if (c.is_infinity) has_inf = true;
        else if (std::abs(c.centroid) <= 1e-6) has_zero = true;
    }
    CHECK(has_inf);
    CHECK(has_zero);
}

TEST_CASE("minimal sets of a single superattracting 2-cycle") {
    RandomModel model(sys_basilica(), {1.0});
    EscapeParams params = certify_escape_params(sys_basilica(), TrapSpec::none());
    std::vector<cplx> seeds{cplx(0.1, 0.1), cplx(0.3, -0.2), cplx(3, 0), cplx(-0.7, 0.2)};
    auto report = minimal_sets(model, seeds, params, {});
    int finite_minimal = 0;
    for (const auto& c : report.clusters) {
        if (c.minimal && !c.is_infinity) {
            ++finite_minimal;
            CHECK(c.period == 2); // the cycle {0, -1}
        }
    }
    // The 2-cycle appears as two exact atoms joined in one bottom component.
    CHECK(finite_minimal == 2);
    CHECK(report.minimal_count() >= 2);
}

TEST_CASE("minimal sets of the coliseum system") {
    auto model = model_dc1();
    auto params = params_dc1();
    std::vector<cplx> seeds;
    for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j) seeds.push_back(cplx(1.7 * i, 1.7 * j));
    auto report = minimal_sets(model, seeds, params, {});
    CHECK(report.minimal_count() == 2);
    bool finite_in_k = false;
    for (const auto& c : report.clusters)
        if (c.minimal && !c.is_infinity) finite_in_k = std::abs(c.centroid) < 0.4;
    CHECK(finite_in_k);
}

TEST_CASE("minimal set determinism and sample stability") {
    auto model = model_two();
    auto params = params_two();
    std::vector<cplx> seeds{cplx(0.2, 0.1), cplx(1.4, -0.4), cplx(-0.8, 0.9), cplx(2.5, 2.5)};
    MinimalSetOptions opts;
    opts.rng_seed = 7;
    auto a = minimal_sets(model, seeds, params, opts);
    auto b = minimal_sets(model, seeds, params, opts);
    REQUIRE(a.clusters.size() == b.clusters.size());
    for (size_t k = 0; k < a.clusters.size(); ++k)
        CHECK(a.clusters[k].centroid == b.clusters[k].centroid);
    MinimalSetOptions doubled = opts;
    doubled.samples *= 2;
    auto c = minimal_sets(model, seeds, params, doubled);
    CHECK(c.minimal_count() == a.minimal_count());
}

TEST_CASE("per-minimal-set probabilities") {
    auto model = model_two();
    auto params = params_two();
    std::vector<cplx> seeds;
    for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j) seeds.push_back(cplx(0.61 * i, 0.61 * j));
    auto report = minimal_sets(model, seeds, params, {});

    auto far = t_minimal_mc(cplx(10, 0), model, report, params, 400, 5);
    int inf_idx = -1;
    for (size_t k = 0; k < report.clusters.size(); ++k)
        if (report.clusters[k].is_infinity) inf_idx = int(k);
    REQUIRE(inf_idx >= 0);
    CHECK(far.probabilities[inf_idx] == 1.0);
    CHECK(far.probabilities[inf_idx] + far.indeterminate == 1.0);

    auto near0 = t_minimal_mc(cplx(0.1, 0), model, report, params, 400, 5);
    double zero_prob = 0.0;
    for (size_t k = 0; k < report.clusters.size(); ++k)
        if (report.clusters[k].minimal && !report.clusters[k].is_infinity)
            zero_prob += near0.probabilities[k];
    CHECK(zero_prob == 1.0);

    // Consistency of the two estimators on the coliseum scene.
    auto dc1 = model_dc1();
    auto pdc1 = params_dc1();
    std::vector<cplx> dseeds{cplx(1.2, 0), cplx(0.2, 0.2), cplx(3.3, 0), cplx(-1.5, 1.5)};
    auto dreport = minimal_sets(dc1, dseeds, pdc1, {});
    auto probs = t_minimal_mc(cplx(1.2, 0), dc1, dreport, pdc1, 20000, 9);
    double total = 0.0;
    for (double p : probs.probabilities) total += p;
    CHECK(total + probs.indeterminate == 1.0); // bookkeeping identity
    auto tmc = t_infinity_mc(cplx(1.2, 0), dc1, pdc1, 20000, 9);
    int dinf = -1;
    for (size_t k = 0; k < dreport.clusters.size(); ++k)
        if (dreport.clusters[k].is_infinity) dinf = int(k);
    REQUIRE(dinf >= 0);
    CHECK(std::abs(probs.probabilities[dinf] - tmc.estimate) <=
          3 * (tmc.stderr_ + 0.01) + probs.indeterminate + tmc.indeterminate);
}

TEST_CASE("contraction rate estimates") {
    RandomModel single(sys_zsq(), {1.0});
    EscapeParams ps = certify_escape_params(sys_zsq(), TrapSpec::none());
    auto e1 = contraction_rate(single, {cplx(0.5, 0)}, ps, 16, 8, 3);
    CHECK(e1.contracting);
    CHECK(e1.eta < 1.0);

    auto model = model_two();
    auto params = params_two();
    auto e2 = contraction_rate(model, {cplx(0.1, 0.05), cplx(-0.07, 0.02)}, params, 16, 8, 3);
    CHECK(e2.contracting);

    // Probes outside the radius are excluded from the fit.
    auto e3 = contraction_rate(model, {cplx(100, 0), cplx(0.1, 0)}, params, 8, 4, 3);
    CHECK(e3.probes_used == 1);
}
