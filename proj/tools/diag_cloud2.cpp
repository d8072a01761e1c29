#include "coliseum/cloud.hpp"
#include "coliseum/nn.hpp"
#include "coliseum/rng.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

using namespace coliseum;

static void metrics(const char* tag, const GeneratorSystem& system,
                    const std::vector<cplx>& pts, double med) {
    NnGrid grid(pts, 4 * med);
    std::vector<cplx> pre;
    for (const auto& z : pts)
        for (const auto& h : system.generators())
            for (const auto& w : preimages(h, z)) pre.push_back(w);
    double mx1 = 0, mean1 = 0;
    for (const auto& w : pre) {
        double d = grid.nearest(w).distance;
        mx1 = std::max(mx1, d);
        mean1 += d;
    }
    mean1 /= double(pre.size());
    NnGrid pgrid(pre, 4 * med);
    double mx2 = 0, mean2 = 0;
    for (const auto& z : pts) {
        double d = pgrid.nearest(z).distance;
        mx2 = std::max(mx2, d);
        mean2 += d;
    }
    mean2 /= double(pts.size());
    std::printf("%s: medNN=%.5g  max-Hausdorff=%.5g (%.1fx)  mean-sym=%.5g (%.2fx)\n", tag, med,
                std::max(mx1, mx2), std::max(mx1, mx2) / med, std::max(mean1, mean2),
                std::max(mean1, mean2) / med);
}

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 100000;
    Polynomial g1 = poly({-1, 0, 1});
    Polynomial g2 = poly({0, 0, 0.25});
    GeneratorSystem system({compose(g1, g1), compose(g2, g2)});
    CloudOptions opts;
    opts.n_points = n;
    opts.rng_seed = 4;
    auto cloud = julia_backward_cloud(system, opts);
    double med = median_nn_distance(cloud.points);
    metrics("clean   ", system, cloud.points, med);

    auto corrupted = cloud.points;
    Rng rng(77);
    for (size_t i = 0; i < corrupted.size(); ++i)
        if (rng.next_double() < 0.10) corrupted[i] += cplx(0.2, 0.0);
    double med2 = median_nn_distance(corrupted);
    metrics("corrupt ", system, corrupted, med2);
    return 0;
}
