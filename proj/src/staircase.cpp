#include "coliseum/staircase.hpp"

#include "coliseum/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace coliseum {

StaircaseModel StaircaseModel::bernoulli(double a) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("bernoulli parameter must be in (0,1)");
    return {Kind::Bernoulli, a};
}

namespace {

// Shared recursion: value(x) = w0 * value(f0(x)) + w1 * value(f1(x)) with
// boundary values 0 below 0 and 1 above 1. Accumulates the resolved lower
// bound and the unresolved mass.
struct Recursion {
    double w0, w1;
    double (*f0)(double);
    double (*f1)(double);
    double resolved_lo = 0.0;
    double unresolved = 0.0;

    void walk(double x, double mass, int depth) {
        if (x >= 1.0) {
            resolved_lo += mass;
            return;
        }
        if (x <= 0.0) return;
        if (depth == 0) {
            unresolved += mass;
            return;
        }
        walk(f0(x), mass * w0, depth - 1);
        walk(f1(x), mass * w1, depth - 1);
    }
};

} // namespace

Interval devils_staircase(double x, int depth) {
    Recursion rec{0.5, 0.5, [](double t) { return 3.0 * t; },
                  [](double t) { return 3.0 * t - 2.0; }};
    rec.walk(x, 1.0, depth);
    return {rec.resolved_lo, rec.resolved_lo + rec.unresolved};
}

Interval lebesgue_singular(double x, double a, int depth) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("parameter a must be in (0,1)");
    Recursion rec{a, 1.0 - a, [](double t) { return 2.0 * t; },
                  [](double t) { return 2.0 * t - 1.0; }};
    rec.walk(x, 1.0, depth);
    return {rec.resolved_lo, rec.resolved_lo + rec.unresolved};
}

McEstimate staircase_mc(double x, const StaircaseModel& model, uint64_t trials,
                        int max_iter, uint64_t rng_seed) {
    // Both model families map [1,inf) into itself increasingly and
    // (-inf,0] into itself, so x > 1 certifies escape to +infinity and
    // x < 0 escape to -infinity.
    const bool cantor = model.kind == StaircaseModel::Kind::Cantor;
    const double p0 = cantor ? 0.5 : model.a;
    uint64_t up = 0, undecided = 0;
    Rng rng(rng_seed);
    for (uint64_t t = 0; t < trials; ++t) {
        double v = x;
        bool resolved = false;
        for (int k = 0; k < max_iter && !resolved; ++k) {
            if (v > 1.0) {
                ++up;
                resolved = true;
                break;
            }
            if (v < 0.0) {
                resolved = true;
                break;
            }
            if (rng.next_double() < p0)
                v = cantor ? 3.0 * v : 2.0 * v;
            else
                v = cantor ? 3.0 * v - 2.0 : 2.0 * v - 1.0;
        }
        if (!resolved) {
            if (v > 1.0)
                ++up;
            else if (!(v < 0.0))
                ++undecided;
        }
    }
    McEstimate out;
    out.trials = trials;
    double p = double(up) / double(trials);
    out.estimate = p;
    out.stderr_ = std::sqrt(p * (1.0 - p) / double(trials));
    out.indeterminate = double(undecided) / double(trials);
    return out;
}

} // namespace coliseum
