#include "coliseum/cloud.hpp"
#include "coliseum/nn.hpp"
#include "coliseum/rng.hpp"

#include <algorithm>
#include <cstdio>

using namespace coliseum;

static void stats(const char* tag, std::vector<double>& ds, double med) {
    std::sort(ds.begin(), ds.end());
    auto q = [&](double p) { return ds[size_t(double(ds.size() - 1) * p)]; };
    std::printf("  %s: max=%.5g(%.1fx) p99=%.5g(%.1fx) p95=%.5g(%.1fx) p90=%.5g(%.1fx) p50=%.5g(%.1fx)\n",
                tag, ds.back(), ds.back() / med, q(0.99), q(0.99) / med, q(0.95), q(0.95) / med,
                q(0.90), q(0.90) / med, q(0.50), q(0.50) / med);
}

static void run(const char* name, const GeneratorSystem& system, const std::vector<cplx>& pts) {
    double med = median_nn_distance(pts);
    std::printf("%s medNN=%.5g\n", name, med);
    NnGrid grid(pts, 4 * med);
    std::vector<cplx> pre;
    for (const auto& z : pts)
        for (const auto& h : system.generators())
            for (const auto& w : preimages(h, z)) pre.push_back(w);
    std::vector<double> d1;
    for (const auto& w : pre) d1.push_back(grid.nearest(w).distance);
    stats("pre->cloud", d1, med);
    NnGrid pgrid(pre, 4 * med);
    std::vector<double> d2;
    for (const auto& z : pts) d2.push_back(pgrid.nearest(z).distance);
    stats("cloud->pre", d2, med);
}

int main() {
    Polynomial g1 = poly({-1, 0, 1});
    Polynomial g2 = poly({0, 0, 0.25});
    GeneratorSystem system({compose(g1, g1), compose(g2, g2)});
    CloudOptions opts;
    opts.n_points = 100000;
    opts.rng_seed = 4;
    auto cloud = julia_backward_cloud(system, opts);
    run("clean", system, cloud.points);

    auto corrupted = cloud.points;
    Rng rng(77);
    for (size_t i = 0; i < corrupted.size(); ++i)
        if (rng.next_double() < 0.10) corrupted[i] += cplx(0.2, 0.0);
    run("corrupted", system, corrupted);
    return 0;
}
