#include "coliseum/thermo.hpp"

#include "coliseum/nn.hpp"
#include "coliseum/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace coliseum {

double deriv_norm(const Polynomial& h, const Polynomial& h_deriv, cplx z, DerivMetric metric) {
    double d = std::abs(h_deriv(z));
    if (metric == DerivMetric::Euclidean) return d;
    return d * (1.0 + std::norm(z)) / (1.0 + std::norm(h(z)));
}

namespace {

double lower_sum(const Polynomial& h) {
    double s = 0.0;
    for (size_t i = 0; i + 1 < h.coeffs().size(); ++i) s += std::abs(h.coeffs()[i]);
    return s;
}

} // namespace

GreenResult green_along(const RandomModel& model, const std::vector<int>& word, cplx y,
                        int n_max, double escape_r) {
    GreenResult out;
    // Phase 1: numeric orbit until far outside the escape radius.
    cplx z = y;
    double deg_product = 1.0;
    size_t k = 0;
    const double switch_at = 1e18;
    while (std::abs(z) <= switch_at) {
        if (k >= word.size() || int(k) >= n_max) {
            if (std::abs(z) <= escape_r) {
                out.bounded = true;
                out.value = 0.0;
                return out;
            }
            break; // escaped but slowly; fall through with the current state
        }
        const Polynomial& h = model.system().generator(word[k]);
        z = h(z);
        deg_product *= double(h.degree());
        ++k;
    }
    if (std::abs(z) <= escape_r) {
        out.bounded = true;
        return out;
    }

    // Phase 2: once |z| is astronomically large the orbit is governed by the
    // leading terms: log|h(z)| = d log|z| + log|lead| + log|1+eps| with
    // |eps| <= S/(|lead| |z|). Sum the remaining tail of log|.|/deg(...).
    double log_abs = std::log(std::abs(z));
    double green = log_abs / deg_product;
    for (size_t extra = k; extra < word.size() && extra < size_t(n_max) + 64; ++extra) {
        const Polynomial& h = model.system().generator(word[extra]);
        double d = double(h.degree());
        double llead = std::log(std::abs(h.leading()));
        double s = lower_sum(h);
        double eps_bound = s > 0.0 ? std::exp(std::log(s / std::abs(h.leading())) - log_abs) : 0.0;
        eps_bound = std::min(eps_bound, 0.5);
        log_abs = d * log_abs + llead; // midpoint of the recursion
        deg_product *= d;
        if (deg_product > 1e300) break;
        double term = llead / deg_product;
        double err = std::abs(std::log1p(eps_bound)) / deg_product;
        green += term;
        if (std::abs(term) + err < 1e-18 * std::max(1.0, std::abs(green))) break;
    }
    out.value = std::max(green, 0.0);
    return out;
}

namespace {

std::vector<int> sample_word(const RandomModel& model, uint64_t word_seed, int length) {
    Rng rng(word_seed);
    std::vector<int> word(length);
    for (int i = 0; i < length; ++i) word[i] = int(rng.next_weighted(model.weights()));
    return word;
}

} // namespace

GreenResult green_function(const RandomModel& model, uint64_t word_seed, cplx y, int n_max,
                           double escape_r) {
    return green_along(model, sample_word(model, word_seed, n_max + 64), y, n_max, escape_r);
}

double omega(const RandomModel& model, uint64_t word_seed, int n_max, double escape_r) {
    std::vector<int> word = sample_word(model, word_seed, n_max + 64);
    const Polynomial& first = model.system().generator(word[0]);
    double total = 0.0;
    for (const auto& cp : critical_points(first)) {
        GreenResult g = green_along(model, word, cp.location, n_max, escape_r);
        total += double(cp.multiplicity) * g.value;
    }
    return total;
}

OmegaIntegral omega_integral(const RandomModel& model, int samples, int n_max, double escape_r,
                             uint64_t rng_seed) {
    if (samples <= 0) throw std::invalid_argument("omega_integral needs samples > 0");
    double sum = 0.0, sumsq = 0.0;
    for (int s = 0; s < samples; ++s) {
        uint64_t mix = rng_seed;
        uint64_t word_seed = splitmix64(mix) ^ (0x9e3779b97f4a7c15ULL * uint64_t(s + 1));
        double v = omega(model, word_seed, n_max, escape_r);
        sum += v;
        sumsq += v * v;
    }
    OmegaIntegral out;
    out.estimate = sum / samples;
    double var = std::max(0.0, sumsq / samples - out.estimate * out.estimate);
    out.stderr_ = samples > 1 ? std::sqrt(var / (samples - 1)) : 0.0;
    return out;
}

double hoelder_entropy(const RandomModel& model, double omega_integral_value) {
    double numerator = 0.0, log_degs = 0.0;
    for (size_t j = 0; j < model.size(); ++j) {
        double p = model.weights()[j];
        numerator -= p * std::log(p);
        log_degs += p * std::log(double(model.system().generator(j).degree()));
    }
    double denominator = log_degs + omega_integral_value;
    if (!(denominator > 0.0))
        throw std::domain_error("hoelder_entropy: nonpositive denominator");
    return numerator / denominator;
}

NondiffConditions nondiff_conditions(const RandomModel& model, const EscapeParams& params,
                                     double u_entropy, int words, int word_depth,
                                     uint64_t rng_seed) {
    NondiffConditions out;
    out.u_entropy = u_entropy;

    double entropy_sum = 0.0;
    for (size_t j = 0; j < model.size(); ++j) {
        double p = model.weights()[j];
        entropy_sum += p * std::log(p * double(model.system().generator(j).degree()));
    }
    out.entropy_positive = entropy_sum > 0.0;
    out.two_generators = model.size() == 2;

    // Probabilistic certificate that the planar postcritical set is bounded:
    // critical values followed through random words stay below the radius.
    out.postcritical_bounded = true;
    size_t stream = 0;
    for (size_t j = 0; j < model.size() && out.postcritical_bounded; ++j) {
        const Polynomial& h = model.system().generator(j);
        for (const auto& cp : critical_points(h)) {
            cplx v = h(cp.location);
            for (int w = 0; w < words && out.postcritical_bounded; ++w) {
                Rng rng = Rng::chain(rng_seed, stream++);
                cplx z = v;
                for (int k = 0; k < word_depth; ++k) {
                    if (std::abs(z) > params.radius) {
                        out.postcritical_bounded = false;
                        break;
                    }
                    z = model.system().generator(rng.next_weighted(model.weights()))(z);
                }
            }
        }
    }

    out.nondifferentiable_dense =
        (out.entropy_positive || out.postcritical_bounded || out.two_generators) &&
        u_entropy < 1.0;
    return out;
}

TransferOperator::TransferOperator(const GeneratorSystem& system, const PointCloud& cloud,
                                   const TransferOptions& opts) {
    if (cloud.size() == 0) throw std::invalid_argument("transfer operator needs a nonempty cloud");
    n_ = cloud.size();
    mesh_ = median_nn_distance(cloud.points);
    if (mesh_ > opts.mesh_max)
        throw std::runtime_error("cloud too sparse for nearest-neighbor transfer");

    NnGrid grid(cloud.points, std::max(mesh_ * 4.0, 1e-12));
    rows_.resize(n_);
    std::vector<Polynomial> derivs;
    for (const auto& h : system.generators()) derivs.push_back(h.derivative());

    for (size_t i = 0; i < n_; ++i) {
        for (size_t j = 0; j < system.size(); ++j) {
            for (const auto& w : preimages(system.generator(j), cloud.points[i])) {
                double nd = deriv_norm(system.generator(j), derivs[j], w, opts.metric);
                if (nd < opts.deriv_floor) {
                    ++dropped_;
                    continue;
                }
                auto hit = grid.nearest(w);
                rows_[i].push_back({uint32_t(i), uint32_t(hit.index), std::log(nd)});
            }
        }
    }

    point_log_deriv_.resize(n_);
    prov_ = cloud.provenance;
    for (size_t i = 0; i < n_; ++i) {
        int j = cloud.provenance[i];
        double nd = deriv_norm(system.generator(j), derivs[j], cloud.points[i], opts.metric);
        point_log_deriv_[i] = std::log(std::max(nd, 1e-300));
    }
}

std::vector<double> TransferOperator::apply(const std::vector<double>& v, double t) const {
    std::vector<double> out(n_, 0.0);
    for (size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (const auto& e : rows_[i]) acc += std::exp(-t * e.log_deriv) * v[e.target];
        out[i] = acc;
    }
    return out;
}

double TransferOperator::log_rho(double t, int sweeps) const {
    std::vector<double> v(n_, 1.0);
    double acc = 0.0;
    int counted = 0;
    for (int s = 0; s < sweeps; ++s) {
        v = apply(v, t);
        double sup = *std::max_element(v.begin(), v.end());
        if (!(sup > 0.0)) return -std::numeric_limits<double>::infinity();
        for (auto& x : v) x /= sup;
        if (s >= (2 * sweeps) / 3) {
            acc += std::log(sup);
            ++counted;
        }
    }
    return acc / counted;
}

std::vector<double> TransferOperator::eigenfunction(double t, int sweeps) const {
    std::vector<double> v(n_, 1.0);
    for (int s = 0; s < sweeps; ++s) {
        v = apply(v, t);
        double sup = *std::max_element(v.begin(), v.end());
        if (!(sup > 0.0)) throw std::runtime_error("transfer operator iteration degenerated");
        for (auto& x : v) x /= sup;
    }
    return v;
}

std::vector<double> TransferOperator::stationary_adjoint(double t, int sweeps) const {
    std::vector<double> w(n_, 1.0 / double(n_));
    std::vector<double> next(n_);
    for (int s = 0; s < sweeps; ++s) {
        std::fill(next.begin(), next.end(), 0.0);
        for (size_t i = 0; i < n_; ++i)
            for (const auto& e : rows_[i]) next[e.target] += std::exp(-t * e.log_deriv) * w[i];
        double sum = std::accumulate(next.begin(), next.end(), 0.0);
        if (!(sum > 0.0)) throw std::runtime_error("adjoint iteration degenerated");
        for (auto& x : next) x /= sum;
        std::swap(w, next);
    }
    return w;
}

BowenResult bowen_dimension(const GeneratorSystem& system, const PointCloud& cloud, double t_lo,
                            double t_hi, double tol, const TransferOptions& opts) {
    TransferOperator op(system, cloud, opts);
    BowenResult out;
    auto f = [&](double t) {
        double v = op.log_rho(t);
        out.trace.push_back({t, v});
        return v;
    };
    double f_lo = f(t_lo), f_hi = f(t_hi);
    if (!(f_lo > 0.0 && f_hi < 0.0))
        throw std::runtime_error("bowen_dimension: bracket does not straddle rho = 1");
    double lo = t_lo, hi = t_hi;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (std::abs(fm) <= tol) {
            out.delta = mid;
            return out;
        }
        (fm > 0.0 ? lo : hi) = mid;
    }
    out.delta = 0.5 * (lo + hi);
    return out;
}

double box_counting_dim(const std::vector<cplx>& points, const std::vector<double>& scales) {
    if (scales.size() < 2) throw std::invalid_argument("box_counting_dim needs >= 2 scales");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double eps : scales) {
        if (!(eps > 0.0)) throw std::invalid_argument("scales must be positive");
        std::vector<uint64_t> keys;
        keys.reserve(points.size());
        for (const auto& p : points) {
            uint64_t a = uint64_t(uint32_t(int32_t(std::floor(p.real() / eps))));
            uint64_t b = uint64_t(uint32_t(int32_t(std::floor(p.imag() / eps))));
            keys.push_back((a << 32) | b);
        }
        std::sort(keys.begin(), keys.end());
        double n = double(std::unique(keys.begin(), keys.end()) - keys.begin());
        double x = std::log(1.0 / eps), y = std::log(n);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = double(scales.size());
    double denom = m * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) throw std::runtime_error("box_counting_dim: degenerate fit");
    return (m * sxy - sx * sy) / denom;
}

double hoelder_hausdorff(const RandomModel& model, const PointCloud& cloud, double delta,
                         int iterations, const TransferOptions& opts) {
    TransferOperator op(model.system(), cloud, opts);
    std::vector<double> alpha = op.eigenfunction(delta, iterations);
    std::vector<double> nu = op.stationary_adjoint(delta, iterations);
    double min_alpha = *std::min_element(alpha.begin(), alpha.end());
    if (!(min_alpha > 0.0))
        throw std::runtime_error("hoelder_hausdorff: eigenfunction not strictly positive");

    double numerator = 0.0, denominator = 0.0;
    const auto& lognd = op.point_log_deriv();
    for (size_t i = 0; i < cloud.size(); ++i) {
        double mass = alpha[i] * nu[i];
        numerator += -std::log(model.weights()[cloud.provenance[i]]) * mass;
        denominator += lognd[i] * mass;
    }
    if (!(denominator > 0.0))
        throw std::runtime_error("hoelder_hausdorff: nonpositive expansion integral");
    return numerator / denominator;
}

namespace {

HoelderSlope fit_slope(const std::vector<double>& radii, const std::vector<double>& osc,
                       double noise) {
    HoelderSlope out;
    double biggest = *std::max_element(osc.begin(), osc.end());
    if (biggest <= std::max(3.0 * noise, 1e-300)) {
        out.locally_constant = true;
        out.slope = std::numeric_limits<double>::infinity();
        out.reliable = true;
        return out;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t k = 0; k < radii.size(); ++k) {
        if (osc[k] <= noise || osc[k] <= 0.0) continue;
        double x = std::log(radii[k]), y = std::log(osc[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 3) {
        out.reliable = false;
        return out;
    }
    double denom = n * sxx - sx * sx;
    out.slope = (n * sxy - sx * sy) / denom;
    double intercept = (sy - out.slope * sx) / n;
    for (size_t k = 0; k < radii.size(); ++k) {
        if (osc[k] <= noise || osc[k] <= 0.0) continue;
        double fit = intercept + out.slope * std::log(radii[k]);
        out.fit_residual = std::max(out.fit_residual, std::abs(fit - std::log(osc[k])));
    }
    out.reliable = true;
    return out;
}

} // namespace

HoelderSlope pointwise_hoelder_empirical(const std::function<Interval(cplx)>& evaluator, cplx z0,
                                         const std::vector<double>& radii,
                                         int probes_per_radius) {
    Interval base = evaluator(z0);
    std::vector<double> osc(radii.size(), 0.0);
    double noise = base.width();
    for (size_t k = 0; k < radii.size(); ++k) {
        for (int p = 0; p < probes_per_radius; ++p) {
            double ang = 2.0 * M_PI * double(p) / probes_per_radius;
            Interval v = evaluator(z0 + std::polar(radii[k], ang));
            osc[k] = std::max(osc[k], std::abs(v.mid() - base.mid()));
            noise = std::max(noise, v.width());
        }
    }
    return fit_slope(radii, osc, noise);
}

HoelderSlope pointwise_hoelder_empirical_1d(const std::function<Interval(double)>& evaluator,
                                            double x0, const std::vector<double>& radii) {
    Interval base = evaluator(x0);
    std::vector<double> osc(radii.size(), 0.0);
    double noise = base.width();
    for (size_t k = 0; k < radii.size(); ++k) {
        for (double x : {x0 - radii[k], x0 + radii[k]}) {
            Interval v = evaluator(x);
            osc[k] = std::max(osc[k], std::abs(v.mid() - base.mid()));
            noise = std::max(noise, v.width());
        }
    }
    return fit_slope(radii, osc, noise);
}

} // namespace coliseum
