#pragma once

#include "coliseum/interval.hpp"

#include <cstdint>

namespace coliseum {

// Random-walk models on the line whose escape probabilities are the
// classical singular functions: the Cantor model (devil's staircase) and
// the Bernoulli model (Lebesgue's singular function with parameter a).
struct StaircaseModel {
    enum class Kind { Cantor, Bernoulli };
    Kind kind = Kind::Cantor;
    double a = 0.5; // Bernoulli parameter, in (0,1)

    static StaircaseModel cantor() { return {Kind::Cantor, 0.5}; }
    static StaircaseModel bernoulli(double a);
};

// phi(x) = 1/2 phi(3x) + 1/2 phi(3x-2), phi = 0 on (-inf,0], 1 on [1,inf).
// Depth-limited exact recursion; unresolved leaves contribute their
// probability mass as interval slack.
Interval devils_staircase(double x, int depth);

// psi_a(x) = a psi_a(2x) + (1-a) psi_a(2x-1), same boundary conditions.
Interval lebesgue_singular(double x, double a, int depth);

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    double indeterminate = 0.0; // fraction of unresolved orbits
    uint64_t trials = 0;
};

// Monte Carlo escape probability to +infinity for the random walk of the
// model; orbits resolve at x > 1 (certified growth) or x < 0.
McEstimate staircase_mc(double x, const StaircaseModel& model, uint64_t trials,
                        int max_iter, uint64_t rng_seed);

} // namespace coliseum
