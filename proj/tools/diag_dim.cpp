#include "coliseum/cloud.hpp"
#include "coliseum/nn.hpp"
#include "coliseum/thermo.hpp"

#include <cstdio>

using namespace coliseum;

int main() {
    Polynomial g1 = poly({-1, 0, 1});
    Polynomial g2 = poly({0, 0, 0.25});
    GeneratorSystem sys({compose(g1, g1), compose(g2, g2)});

    for (double texp : {1.0, 1.4, 1.7}) {
        CloudOptions o;
        o.n_points = 30000;
        o.rng_seed = 5;
        o.branches = CloudOptions::Branches::Conformal;
        o.conformal_exponent = texp;
        auto cloud = julia_backward_cloud(sys, o);
        auto b = bowen_dimension(sys, cloud);
        std::printf("bowen with conformal t=%.1f cloud: delta=%.4f (mesh median=%.4g)\n", texp,
                    b.delta, median_nn_distance(cloud.points));
    }
    {
        CloudOptions o;
        o.n_points = 30000;
        o.rng_seed = 5;
        auto cloud = julia_backward_cloud(sys, o);
        auto b = bowen_dimension(sys, cloud);
        std::printf("bowen with uniform cloud:        delta=%.4f\n", b.delta);
    }

    for (int n : {100000, 200000, 400000}) {
        CloudOptions o;
        o.n_points = n;
        o.rng_seed = 5;
        o.branches = CloudOptions::Branches::Conformal;
        o.conformal_exponent = 1.6;
        auto cloud = julia_backward_cloud(sys, o);
        for (double smax : {0.32, 0.16}) {
            std::vector<double> scales{smax, smax / 2, smax / 4, smax / 8};
            double box = box_counting_dim(cloud.points, scales);
            std::printf("box n=%d scales[%.2f..%.3f]: %.4f\n", n, smax, smax / 8, box);
        }
    }
    return 0;
}
