#include "coliseum/markov.hpp"
#include "coliseum/verify.hpp"
#include <cstdio>
using namespace coliseum;
int main() {
    Polynomial g1 = poly({-1, 0, 1});
    Polynomial g2 = poly({0, 0, 0.25});
    GeneratorSystem sys({compose(g1, g1), compose(g2, g2)});
    RandomModel model(sys, {0.5, 0.5});
    auto params = certify_escape_params(sys, TrapSpec::two_stage(cplx(0, 0), 0.4, 0));
    std::printf("R = %.6f\n", params.radius);
    Raster T = t_raster(model, params, -5.2, 5.2, -5.2, 5.2, 128, 128, {20, 1e-7});
    std::printf("max width = %.4f\n", T.max_width());
    auto rep = check_fixed_point(T, model, params);
    std::printf("pass=%d max_gap=%.5f global_bound=%.5f violations=%d unresolved=%d\n",
                rep.pass, rep.max_gap, rep.global_bound, rep.violations, rep.unresolved_pixels);
    return 0;
}
