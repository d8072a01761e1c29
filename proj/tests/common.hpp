#pragma once

#include "coliseum/escape.hpp"
#include "coliseum/poly.hpp"

namespace coliseum::testing {

inline GeneratorSystem sys_zsq() { return GeneratorSystem({poly({0, 0, 1})}); }
inline GeneratorSystem sys_cheb() { return GeneratorSystem({poly({-2, 0, 1})}); }
inline GeneratorSystem sys_basilica() { return GeneratorSystem({poly({-1, 0, 1})}); }
inline GeneratorSystem sys_two() {
    return GeneratorSystem({poly({0, 0, 1}), poly({0, 0, 0.25})});
}
inline GeneratorSystem sys_dc1() {
    Polynomial g1 = poly({-1, 0, 1});
    Polynomial g2 = poly({0, 0, 0.25});
    return GeneratorSystem({compose(g1, g1), compose(g2, g2)});
}
inline GeneratorSystem sys_disjoint() {
    // z^2 - 6 and (z-7)^2 - 6: filled-in sets a real Cantor set in [-3,3]
    // and its translate by 7, so no common bounded orbit exists.
    return GeneratorSystem({poly({-6, 0, 1}), poly({43, -14, 1})});
}

inline TrapSpec dc1_trap() { return TrapSpec::two_stage(cplx(0, 0), 0.4, 0); }

inline RandomModel model_dc1(double p1 = 0.5) {
    return RandomModel(sys_dc1(), {p1, 1.0 - p1});
}
inline RandomModel model_two() { return RandomModel(sys_two(), {0.5, 0.5}); }

} // namespace coliseum::testing
