#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace coliseum {

using cplx = std::complex<double>;

// Complex polynomial, coefficients in ascending powers. Immutable after
// construction; all operations are pure.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<cplx> coeffs);

    int degree() const { return int(coeffs_.size()) - 1; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    cplx leading() const { return coeffs_.back(); }
    double coeff_scale() const; // max |coeff|

    // Horner evaluation, fixed order (highest coefficient first).
    cplx operator()(cplx z) const;
    cplx eval(cplx z) const { return (*this)(z); }

    Polynomial derivative() const;

    bool operator==(const Polynomial& other) const { return coeffs_ == other.coeffs_; }

private:
    std::vector<cplx> coeffs_;
};

// Builds a polynomial from a monomial shorthand, e.g. poly({-1, 0, 1}) = z^2 - 1.
inline Polynomial poly(std::vector<cplx> ascending) { return Polynomial(std::move(ascending)); }

// outer(inner(z)) at the coefficient level. Throws if the resulting degree
// exceeds degree_cap (guards against accidental exponential blowup in
// scene files).
Polynomial compose(const Polynomial& outer, const Polynomial& inner, int degree_cap = 64);

struct RootSolveOptions {
    int max_iterations = 400;
    double residual_rel = 1e-12; // target |p(root)| <= residual_rel * coeff scale
};

// All degree-many roots, with multiplicity, by simultaneous iteration
// (Durand-Kerner) from a deterministic initial circle. Sorted by
// (re, im) so the output order is part of the contract.
std::vector<cplx> roots(const Polynomial& p, const RootSolveOptions& opts = {});

// Roots of p(w) = value.
std::vector<cplx> preimages(const Polynomial& p, cplx value, const RootSolveOptions& opts = {});

struct CriticalPoint {
    cplx location;
    int multiplicity;
};

// Zeros of the derivative, clustered into (location, multiplicity) pairs;
// multiplicities sum to degree - 1. Requires degree >= 2.
std::vector<CriticalPoint> critical_points(const Polynomial& p);

// Ordered generator list; houses the semigroup generated by it.
class GeneratorSystem {
public:
    explicit GeneratorSystem(std::vector<Polynomial> generators);

    size_t size() const { return generators_.size(); }
    const Polynomial& generator(size_t j) const { return generators_[j]; }
    const std::vector<Polynomial>& generators() const { return generators_; }

private:
    std::vector<Polynomial> generators_;
};

// Generator system with a probability vector: the finitely supported
// random model tau = sum_j p_j delta_{h_j}.
class RandomModel {
public:
    RandomModel(GeneratorSystem system, std::vector<double> weights);

    const GeneratorSystem& system() const { return system_; }
    const std::vector<double>& weights() const { return weights_; }
    size_t size() const { return system_.size(); }

private:
    GeneratorSystem system_;
    std::vector<double> weights_;
};

// Finite composition word; indices are zero-based positions into the
// generator list, applied left to right: w = [i0, i1] means h_{i1} o h_{i0}.
using Word = std::vector<int>;

} // namespace coliseum
