#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coliseum/markov.hpp"
#include "coliseum/rng.hpp"
#include "coliseum/staircase.hpp"
#include "coliseum/thermo.hpp"
#include "common.hpp"

#include <cmath>

using namespace coliseum;
using namespace coliseum::testing;

TEST_CASE("green's function of the squaring word") {
    RandomModel model(sys_zsq(), {1.0});
    auto g = green_function(model, 1, cplx(2, 0), 200, 2.0);
    CHECK_FALSE(g.bounded);
    CHECK(std::abs(g.value - std::log(2.0)) <= 1e-10);

    // Bounded orbits give 0 with the flag set.
    auto b = green_function(model, 1, cplx(0.1, 0), 200, 2.0);
    CHECK(b.bounded);
    CHECK(b.value == 0.0);
}

TEST_CASE("green's function vanishes on the coliseum postcritical set") {
    auto model = model_dc1();
    double r = certify_escape_params(sys_dc1(), TrapSpec::none()).radius;
    for (cplx c : {cplx(0, 0), cplx(1, 0), cplx(-1, 0)}) {
        for (uint64_t seed : {1ull, 2ull, 3ull, 99ull}) {
            auto g = green_function(model, seed, c, 400, r);
            CHECK(g.bounded);
            CHECK(g.value == 0.0);
        }
    }
}

TEST_CASE("green's function agrees with the direct finite-n limit") {
    // z^2 - 4 sends its critical point to infinity.
    GeneratorSystem sys({poly({-4, 0, 1})});
    RandomModel model(sys, {1.0});
    double r = certify_escape_params(sys, TrapSpec::none()).radius;
    auto g = green_along(model, std::vector<int>(64, 0), cplx(0, 0), 64, r);
    CHECK_FALSE(g.bounded);
    // Direct evaluation (1/deg) log|gamma_n(0)| at increasing n.
    const Polynomial& h = sys.generator(0);
    double prev = 0.0;
    for (int n : {6, 8, 10}) {
        cplx z(0, 0);
        double deg = 1.0;
        for (int k = 0; k < n; ++k) {
            z = h(z);
            deg *= 2.0;
        }
        double direct = std::log(std::abs(z)) / deg;
        CHECK(std::abs(direct - g.value) <= 1e-4);
        if (prev != 0.0) CHECK(std::abs(direct - g.value) <= std::abs(prev - g.value) + 1e-12);
        prev = direct;
    }
    CHECK(g.value > 0.0);
}

TEST_CASE("omega examples") {
    RandomModel single(sys_zsq(), {1.0});
    CHECK(omega(single, 5, 100, 2.0) == 0.0);

    auto dc1 = model_dc1();
    double r = certify_escape_params(sys_dc1(), TrapSpec::none()).radius;
    for (uint64_t seed : {1ull, 7ull, 23ull}) CHECK(omega(dc1, seed, 200, r) == 0.0);

    auto oi = omega_integral(dc1, 200, 200, r, 11);
    CHECK(oi.estimate == 0.0);
    CHECK(oi.stderr_ <= 1e-12);

    // Nonnegativity on a scene with an escaping critical orbit.
    GeneratorSystem esc({poly({-4, 0, 1}), poly({0, 0, 1})});
    RandomModel esc_model(esc, {0.5, 0.5});
    double r2 = certify_escape_params(esc, TrapSpec::none()).radius;
    auto oi2 = omega_integral(esc_model, 100, 100, r2, 3);
    CHECK(oi2.estimate >= 0.0);
    CHECK(oi2.estimate > 0.0); // h1's critical point escapes under every word
}

TEST_CASE("entropy hoelder exponent closed form") {
    auto dc1 = model_dc1();
    CHECK(hoelder_entropy(dc1, 0.0) == 0.5); // log 2 / log 4 exactly in doubles

    auto skew = model_dc1(0.25);
    CHECK(std::abs(hoelder_entropy(skew, 0.0) - 0.4056390) <= 1e-4);

    // m generators of common degree with uniform weights: log m / log d.
    GeneratorSystem three({poly({0, 0, 1}), poly({-2, 0, 1}), poly({1, 0, 1})});
    RandomModel m3(three, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(std::abs(hoelder_entropy(m3, 0.0) - std::log(3.0) / std::log(2.0)) <= 1e-12);

    CHECK_THROWS(hoelder_entropy(dc1, -10.0)); // nonpositive denominator
}

TEST_CASE("u is invariant under permuting generators with their weights") {
    Polynomial g1 = poly({-1, 0, 1});
    Polynomial g2 = poly({0, 0, 0.25});
    RandomModel a(GeneratorSystem({compose(g1, g1), compose(g2, g2)}), {0.3, 0.7});
    RandomModel b(GeneratorSystem({compose(g2, g2), compose(g1, g1)}), {0.7, 0.3});
    CHECK(hoelder_entropy(a, 0.0) == hoelder_entropy(b, 0.0));
}

TEST_CASE("nondifferentiability conditions") {
    auto dc1 = model_dc1();
    auto params = certify_escape_params(sys_dc1(), dc1_trap());
    auto c1 = nondiff_conditions(dc1, params, 0.5);
    CHECK(c1.entropy_positive);
    CHECK(c1.postcritical_bounded);
    CHECK(c1.two_generators);
    CHECK(c1.nondifferentiable_dense);

    auto skew = model_dc1(0.05);
    auto c2 = nondiff_conditions(skew, params, hoelder_entropy(skew, 0.0));
    CHECK(c2.entropy_positive); // 0.05 log 0.2 + 0.95 log 3.8 > 0

    // Three generators, escaping critical orbits, negative entropy sum.
    GeneratorSystem bad({poly({-4, 0, 1}), poly({4, 0, 1}), poly({-5, 0, 1})});
    RandomModel bad_model(bad, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    auto bad_params = certify_escape_params(bad, TrapSpec::none());
    auto c3 = nondiff_conditions(bad_model, bad_params, 0.9);
    CHECK_FALSE(c3.entropy_positive); // log(2/3) < 0 termwise
    CHECK_FALSE(c3.postcritical_bounded);
    CHECK_FALSE(c3.two_generators);
    CHECK_FALSE(c3.nondifferentiable_dense);
}

TEST_CASE("bowen dimension of the unit circle") {
    CloudOptions opts;
    opts.n_points = 4000;
    opts.rng_seed = 3;
    auto cloud = julia_backward_cloud(sys_zsq(), opts);
    auto result = bowen_dimension(sys_zsq(), cloud);
    CHECK(std::abs(result.delta - 1.0) <= 0.02);
    CHECK(result.trace.size() >= 3);
}

TEST_CASE("bowen dimension of the chebyshev segment") {
    CloudOptions opts;
    opts.n_points = 8000;
    opts.rng_seed = 3;
    auto cloud = julia_backward_cloud(sys_cheb(), opts);
    auto result = bowen_dimension(sys_cheb(), cloud);
    CHECK(std::abs(result.delta - 1.0) <= 0.05);
}

TEST_CASE("box counting dimension") {
    // Smooth curve oracle.
    std::vector<cplx> circle;
    for (int k = 0; k < 40000; ++k)
        circle.push_back(std::polar(1.0, 2 * M_PI * double(k) / 40000));
    std::vector<double> scales{0.02, 0.01, 0.005, 0.0025};
    CHECK(std::abs(box_counting_dim(circle, scales) - 1.0) <= 0.05);

    std::vector<cplx> segment;
    Rng rng(9);
    for (int k = 0; k < 40000; ++k) segment.push_back(cplx(4 * rng.next_double() - 2, 0));
    CHECK(std::abs(box_counting_dim(segment, scales) - 1.0) <= 0.05);

    CHECK_THROWS(box_counting_dim(circle, {0.01}));
}

TEST_CASE("bowen and box dimension agree on the coliseum set") {
    CloudOptions opts;
    opts.n_points = 30000;
    opts.rng_seed = 5;
    opts.branches = CloudOptions::Branches::Conformal;
    opts.conformal_exponent = 1.6;
    auto cloud = julia_backward_cloud(sys_dc1(), opts);
    auto bowen = bowen_dimension(sys_dc1(), cloud);
    CHECK(bowen.delta > 0.0);
    CHECK(bowen.delta < 2.0);

    // Box counting needs the occupied-box count at the finest scale to stay
    // well below the sample count, hence the large cloud and coarse scales.
    std::vector<double> scales{0.32, 0.16, 0.08, 0.04};
    CloudOptions big = opts;
    big.n_points = 400000;
    auto cloud_big = julia_backward_cloud(sys_dc1(), big);
    double box = box_counting_dim(cloud_big.points, scales);
    CHECK(box > 1.0);
    CHECK(box < 2.0);
    CHECK(std::abs(box - bowen.delta) <= 0.1);

    // Estimator stability under point-count doubling.
    CloudOptions half = opts;
    half.n_points = 200000;
    auto cloud_half = julia_backward_cloud(sys_dc1(), half);
    double box_half = box_counting_dim(cloud_half.points, scales);
    CHECK(std::abs(box_half - box) <= 0.1);
}

TEST_CASE("hausdorff hoelder exponent on the symmetric circle scene") {
    // {z^2, -z^2}: both derivative norms are 2 on the unit circle, so
    // u = -log(1/2) / log 2 = 1 exactly.
    GeneratorSystem sym({poly({0, 0, 1}), poly({0, 0, -1})});
    RandomModel model(sym, {0.5, 0.5});
    CloudOptions opts;
    opts.n_points = 4000;
    opts.rng_seed = 3;
    auto cloud = julia_backward_cloud(sym, opts);
    double u = hoelder_hausdorff(model, cloud, 1.0);
    CHECK(std::abs(u - 1.0) <= 1e-3);
}

TEST_CASE("hausdorff hoelder exponent on the coliseum scene") {
    CloudOptions opts;
    opts.n_points = 20000;
    opts.rng_seed = 5;
    opts.branches = CloudOptions::Branches::Conformal;
    opts.conformal_exponent = 1.2;
    auto cloud = julia_backward_cloud(sys_dc1(), opts);
    auto bowen = bowen_dimension(sys_dc1(), cloud);

    // Remark-style ordering: small p1 pushes the exponent above 1.
    double u_low = hoelder_hausdorff(model_dc1(0.05), cloud, bowen.delta);
    CHECK(u_low > 1.0);

    // Stability across cloud seeds at p = 1/2.
    double u_half = hoelder_hausdorff(model_dc1(0.5), cloud, bowen.delta);
    CloudOptions other = opts;
    other.rng_seed = 17;
    auto cloud2 = julia_backward_cloud(sys_dc1(), other);
    double u_half2 = hoelder_hausdorff(model_dc1(0.5), cloud2, bowen.delta);
    CHECK(std::abs(u_half - u_half2) <= 0.1);
}

TEST_CASE("pointwise hoelder slope: locally constant points") {
    auto dc1 = model_dc1();
    auto params = certify_escape_params(sys_dc1(), dc1_trap());
    auto evaluator = [&](cplx z) { return t_infinity_exact(z, dc1, params, {28, 1e-8}); };
    std::vector<double> radii{0.02, 0.05, 0.1, 0.2, 0.3};
    auto flat = pointwise_hoelder_empirical(evaluator, cplx(0, 0), radii, 8);
    CHECK(flat.locally_constant);
    CHECK(std::isinf(flat.slope));

    // Midpoint of the first middle-third gap of the Cantor set.
    auto stair = [&](double x) { return devils_staircase(x, 40); };
    auto flat1d = pointwise_hoelder_empirical_1d(stair, 0.5, {0.01, 0.02, 0.05, 0.1});
    CHECK(flat1d.locally_constant);
}

TEST_CASE("pointwise hoelder slope near the expected exponent on cloud points") {
    auto dc1 = model_dc1();
    auto params = certify_escape_params(sys_dc1(), dc1_trap());
    CloudOptions opts;
    opts.n_points = 4000;
    opts.rng_seed = 21;
    auto cloud = julia_backward_cloud(sys_dc1(), opts);
    auto evaluator = [&](cplx z) { return t_infinity_exact(z, dc1, params, {30, 1e-8}); };
    std::vector<double> radii{0.003, 0.006, 0.012, 0.025, 0.05, 0.1};
    std::vector<double> slopes;
    Rng rng(2);
    for (int k = 0; k < 12; ++k) {
        cplx z0 = cloud.points[rng.next_index(cloud.size())];
        auto fit = pointwise_hoelder_empirical(evaluator, z0, radii, 12);
        if (fit.reliable && !fit.locally_constant) slopes.push_back(fit.slope);
    }
    REQUIRE(slopes.size() >= 8);
    std::sort(slopes.begin(), slopes.end());
    double median = slopes[slopes.size() / 2];
    CHECK(std::abs(median - 0.5) <= 0.2);
}
