#include "coliseum/cloud.hpp"
#include "coliseum/nn.hpp"

#include <algorithm>
#include <cstdio>

using namespace coliseum;

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 100000;
    double texp = argc > 2 ? std::atof(argv[2]) : -1.0;
    Polynomial g1 = poly({-1, 0, 1});
    Polynomial g2 = poly({0, 0, 0.25});
    GeneratorSystem system({compose(g1, g1), compose(g2, g2)});

    CloudOptions opts;
    opts.n_points = n;
    opts.rng_seed = 4;
    if (texp >= 0) {
        opts.branches = CloudOptions::Branches::Conformal;
        opts.conformal_exponent = texp;
    }
    auto cloud = julia_backward_cloud(system, opts);
    double med = median_nn_distance(cloud.points);
    std::printf("n=%d texp=%.2f median NN=%.6g\n", n, texp, med);

    NnGrid grid(cloud.points, 4 * med);
    std::vector<cplx> pre;
    for (size_t i = 0; i < cloud.size(); ++i)
        for (const auto& h : system.generators())
            for (const auto& w : preimages(h, cloud.points[i])) pre.push_back(w);

    double worst = 0;
    cplx worst_pt;
    std::vector<double> ds;
    ds.reserve(pre.size());
    for (const auto& w : pre) {
        double d = grid.nearest(w).distance;
        ds.push_back(d);
        if (d > worst) { worst = d; worst_pt = w; }
    }
    std::sort(ds.begin(), ds.end());
    std::printf("pre->cloud: max=%.6g (%.4f,%.4f) p999=%.5g p99=%.5g p50=%.5g ratio=%.2f\n",
                worst, worst_pt.real(), worst_pt.imag(), ds[size_t(ds.size() * 0.999)],
                ds[size_t(ds.size() * 0.99)], ds[ds.size() / 2], worst / med);
    NnGrid pgrid(pre, 4 * med);
    double worst2 = 0;
    for (const auto& z : cloud.points) worst2 = std::max(worst2, pgrid.nearest(z).distance);
    std::printf("cloud->pre: max=%.6g ratio=%.2f\n", worst2, worst2 / med);
    return 0;
}
