#include "coliseum/poly.hpp"

#include <algorithm>
#include <cmath>

namespace coliseum {

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
    if (coeffs_.size() > 1 && coeffs_.back() == cplx(0.0, 0.0))
        throw std::invalid_argument("leading coefficient must be nonzero");
}

double Polynomial::coeff_scale() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s = std::max(s, std::abs(c));
    return s;
}

cplx Polynomial::operator()(cplx z) const {
    cplx acc = coeffs_.back();
    for (size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * z + coeffs_[k];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() == 1) return Polynomial({cplx(0.0, 0.0)});
    std::vector<cplx> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * double(k);
    while (d.size() > 1 && d.back() == cplx(0.0, 0.0)) d.pop_back();
    return Polynomial(std::move(d));
}

namespace {

std::vector<cplx> multiply(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> out(a.size() + b.size() - 1, cplx(0.0, 0.0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

} // namespace

Polynomial compose(const Polynomial& outer, const Polynomial& inner, int degree_cap) {
    long target = long(outer.degree()) * long(inner.degree());
    if (target > degree_cap)
        throw std::invalid_argument("composition degree " + std::to_string(target) +
                                    " exceeds cap " + std::to_string(degree_cap));
    // Horner in coefficient space: acc = acc * inner + c_k.
    const auto& oc = outer.coeffs();
    std::vector<cplx> acc{oc.back()};
    for (size_t k = oc.size() - 1; k-- > 0;) {
        acc = multiply(acc, inner.coeffs());
        acc[0] += oc[k];
    }
    while (acc.size() > 1 && acc.back() == cplx(0.0, 0.0)) acc.pop_back();
    return Polynomial(std::move(acc));
}

namespace {

// Cauchy-style bound: all roots lie in |z| <= 1 + max |a_i| / |a_d|.
double root_radius_bound(const std::vector<cplx>& c) {
    double m = 0.0;
    for (size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, std::abs(c[i]));
    return 1.0 + m / std::abs(c.back());
}

} // namespace

std::vector<cplx> roots(const Polynomial& p, const RootSolveOptions& opts) {
    int d = p.degree();
    if (d < 1) throw std::invalid_argument("roots: degree must be >= 1");
    const double scale = p.coeff_scale();

    // Monic copy for conditioning.
    std::vector<cplx> c = p.coeffs();
    cplx lead = c.back();
    for (auto& x : c) x /= lead;

    auto eval = [&](cplx z) {
        cplx acc = c.back();
        for (size_t k = c.size() - 1; k-- > 0;) acc = acc * z + c[k];
        return acc;
    };

    if (d == 1) return {-c[0]};

    // Initial guesses on a circle just outside the root bound, offset by a
    // fixed irrational angle so real-axis symmetry cannot trap the iteration.
    const double r0 = root_radius_bound(c) * 1.02;
    const double offset = 0.447213595499958; // sqrt(5)/5, radians
    std::vector<cplx> x(d);
    for (int k = 0; k < d; ++k) {
        double ang = 2.0 * M_PI * double(k) / double(d) + offset;
        x[k] = std::polar(r0, ang);
    }

    // Durand-Kerner sweeps.
    const double step_tol = 1e-15 * std::max(1.0, r0);
    for (int it = 0; it < opts.max_iterations; ++it) {
        double max_step = 0.0;
        for (int i = 0; i < d; ++i) {
            cplx denom(1.0, 0.0);
            for (int j = 0; j < d; ++j)
                if (j != i) denom *= x[i] - x[j];
            if (denom == cplx(0.0, 0.0)) {
                // Coincident iterates: nudge deterministically.
                x[i] += cplx(1e-8 * r0, 1e-8 * r0);
                continue;
            }
            cplx dx = eval(x[i]) / denom;
            x[i] -= dx;
            max_step = std::max(max_step, std::abs(dx));
        }
        if (max_step < step_tol) break;
    }

    // Residuals are checked against the original (non-monic) polynomial.
    double worst = 0.0;
    for (const auto& r : x) worst = std::max(worst, std::abs(p(r)));
    if (worst > opts.residual_rel * scale * 1e2) {
        // Multiple roots converge linearly; a few extra sweeps usually land
        // within tolerance. If they do not, report the failure.
        for (int extra = 0; extra < 4 * opts.max_iterations; ++extra) {
            for (int i = 0; i < d; ++i) {
                cplx denom(1.0, 0.0);
                for (int j = 0; j < d; ++j)
                    if (j != i) denom *= x[i] - x[j];
                if (denom == cplx(0.0, 0.0)) continue;
                x[i] -= eval(x[i]) / denom;
            }
        }
        worst = 0.0;
        for (const auto& r : x) worst = std::max(worst, std::abs(p(r)));
        if (worst > opts.residual_rel * scale * 1e2)
            throw std::runtime_error("root solver did not converge, residual " + std::to_string(worst));
    }

    std::sort(x.begin(), x.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return x;
}

std::vector<cplx> preimages(const Polynomial& p, cplx value, const RootSolveOptions& opts) {
    std::vector<cplx> c = p.coeffs();
    c[0] -= value;
    // Shifting the constant term cannot zero the leading coefficient.
    return roots(Polynomial(std::move(c)), opts);
}

std::vector<CriticalPoint> critical_points(const Polynomial& p) {
    if (p.degree() < 2) throw std::invalid_argument("critical_points: degree must be >= 2");
    Polynomial q = p.derivative();
    std::vector<cplx> zs = roots(q);

    // Cluster root approximations of a multiple zero; Durand-Kerner leaves
    // them spread by about residual^(1/multiplicity).
    const double tol = 1e-3 * std::max(1.0, root_radius_bound(q.coeffs()));
    std::vector<CriticalPoint> out;
    std::vector<bool> used(zs.size(), false);
    for (size_t i = 0; i < zs.size(); ++i) {
        if (used[i]) continue;
        std::vector<size_t> cluster{i};
        used[i] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            for (size_t j = 0; j < zs.size(); ++j) {
                if (used[j]) continue;
                for (size_t k : cluster) {
                    if (std::abs(zs[j] - zs[k]) < tol) {
                        cluster.push_back(j);
                        used[j] = true;
                        grew = true;
                        break;
                    }
                }
            }
        }
        cplx centroid(0.0, 0.0);
        for (size_t k : cluster) centroid += zs[k];
        centroid /= double(cluster.size());
        int m = int(cluster.size());
        // Multiplicity-aware Newton polish: x -= m q / q'.
        Polynomial qd = q.derivative();
        for (int step = 0; step < 40; ++step) {
            cplx qv = q(centroid);
            cplx qdv = qd(centroid);
            if (std::abs(qdv) == 0.0) break;
            cplx dx = double(m) * qv / qdv;
            centroid -= dx;
            if (std::abs(dx) < 1e-16 * std::max(1.0, std::abs(centroid))) break;
        }
        out.push_back({centroid, m});
    }
    std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });
    return out;
}

GeneratorSystem::GeneratorSystem(std::vector<Polynomial> generators)
    : generators_(std::move(generators)) {
    if (generators_.empty()) throw std::invalid_argument("generator system must be nonempty");
    for (const auto& g : generators_)
        if (g.degree() < 2) throw std::invalid_argument("generators must have degree >= 2");
    for (size_t i = 0; i < generators_.size(); ++i)
        for (size_t j = i + 1; j < generators_.size(); ++j)
            if (generators_[i] == generators_[j])
                throw std::invalid_argument("generators must be pairwise distinct");
}

RandomModel::RandomModel(GeneratorSystem system, std::vector<double> weights)
    : system_(std::move(system)), weights_(std::move(weights)) {
    if (weights_.size() != system_.size())
        throw std::invalid_argument("weight count must match generator count");
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0)) throw std::invalid_argument("weights must be strictly positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("weights must sum to 1 within 1e-12");
}

} // namespace coliseum
