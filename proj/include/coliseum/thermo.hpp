#pragma once

#include "coliseum/cloud.hpp"
#include "coliseum/escape.hpp"
#include "coliseum/interval.hpp"
#include "coliseum/poly.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace coliseum {

enum class DerivMetric { Spherical, Euclidean };

// Norm of the derivative of h at z; spherical uses the round metric on the
// sphere, which is what the transfer operators are stated in.
double deriv_norm(const Polynomial& h, const Polynomial& h_deriv, cplx z, DerivMetric metric);

struct GreenResult {
    double value = 0.0;
    bool bounded = false; // orbit never exceeded the escape radius
};

// Green's-function value of the sampled word at y: the limit of
// log^+ |gamma_{n,1}(y)| / deg(gamma_{n,1}), computed by following the
// orbit past the escape radius and summing the remaining tail from the
// leading-coefficient recursion with an explicit error bound.
GreenResult green_function(const RandomModel& model, uint64_t word_seed, cplx y, int n_max,
                           double escape_r);

// Same along an explicit word prefix (padded by the seed stream if shorter
// than n_max).
GreenResult green_along(const RandomModel& model, const std::vector<int>& word, cplx y,
                        int n_max, double escape_r);

// Omega(gamma): sum of the Green's function over the critical points of the
// first map of the word, with multiplicity.
double omega(const RandomModel& model, uint64_t word_seed, int n_max, double escape_r);

struct OmegaIntegral {
    double estimate = 0.0;
    double stderr_ = 0.0;
};

// Monte Carlo mean of omega over i.i.d. words sampled from the model.
OmegaIntegral omega_integral(const RandomModel& model, int samples, int n_max, double escape_r,
                             uint64_t rng_seed);

// u(h,p,mu) for the maximal relative entropy measure, in closed form:
//   u = (-sum p_j log p_j) / (sum p_j log deg h_j + omega_integral).
double hoelder_entropy(const RandomModel& model, double omega_integral_value);

struct NondiffConditions {
    bool entropy_positive = false;   // (a) sum p_j log(p_j deg h_j) > 0
    bool postcritical_bounded = false; // (b) numeric certificate
    bool two_generators = false;     // (c) m == 2
    double u_entropy = 0.0;
    bool nondifferentiable_dense = false; // any flag true and u < 1
};

NondiffConditions nondiff_conditions(const RandomModel& model, const EscapeParams& params,
                                     double u_entropy, int words = 32, int word_depth = 64,
                                     uint64_t rng_seed = 2);

// Discrete transfer operator L_t on a point cloud: preimages of each cloud
// point under each generator, function values transferred from the nearest
// cloud point.
struct TransferOptions {
    DerivMetric metric = DerivMetric::Spherical;
    double deriv_floor = 1e-4; // entries with smaller derivative norm are dropped
    double mesh_max = 0.05;    // reject clouds with median NN distance above this
};

class TransferOperator {
public:
    TransferOperator(const GeneratorSystem& system, const PointCloud& cloud,
                     const TransferOptions& opts = {});

    size_t size() const { return n_; }
    int dropped_entries() const { return dropped_; }
    double median_mesh() const { return mesh_; }

    // One application of L_t.
    std::vector<double> apply(const std::vector<double>& v, double t) const;
    // Asymptotic growth rate log rho(L_t) from power iteration.
    double log_rho(double t, int sweeps = 60) const;
    // Eigenfunction alpha = lim L_t^n(1), sup-normalized.
    std::vector<double> eigenfunction(double t, int sweeps = 80) const;
    // Stationary adjoint vector (conformal-measure weights), sum-normalized.
    std::vector<double> stationary_adjoint(double t, int sweeps = 80) const;

    // log derivative norm at cloud point i under its provenance generator.
    const std::vector<double>& point_log_deriv() const { return point_log_deriv_; }
    const std::vector<int>& provenance() const { return prov_; }

private:
    struct Entry {
        uint32_t source;  // cloud index whose preimage this is
        uint32_t target;  // nearest cloud index to the preimage
        double log_deriv; // log ||h_j'(w)||
    };
    size_t n_ = 0;
    std::vector<std::vector<Entry>> rows_; // rows_[i]: entries with source i
    std::vector<double> point_log_deriv_;
    std::vector<int> prov_;
    int dropped_ = 0;
    double mesh_ = 0.0;
};

struct BowenResult {
    double delta = 0.0;
    std::vector<std::pair<double, double>> trace; // (t, log rho)
};

// Bowen-equation dimension: the t with spectral radius of L_t equal to 1.
BowenResult bowen_dimension(const GeneratorSystem& system, const PointCloud& cloud,
                            double t_lo = 0.2, double t_hi = 1.99, double tol = 1e-3,
                            const TransferOptions& opts = {});

// Least-squares box-counting dimension of a planar point set.
double box_counting_dim(const std::vector<cplx>& points, const std::vector<double>& scales);

// u(h,p,rho~) by transfer-operator quadrature: alpha and the conformal
// weights from L_delta, integrals split by the cloud's provenance pieces.
double hoelder_hausdorff(const RandomModel& model, const PointCloud& cloud, double delta,
                         int iterations = 80, const TransferOptions& opts = {});

struct HoelderSlope {
    double slope = 0.0;
    double fit_residual = 0.0;
    bool locally_constant = false; // all oscillation below noise: slope +inf
    bool reliable = false;
};

// Empirical pointwise Hoelder exponent: least-squares slope of
// log max_{|z-z0|=r} |T(z)-T(z0)| against log r.
HoelderSlope pointwise_hoelder_empirical(const std::function<Interval(cplx)>& evaluator, cplx z0,
                                         const std::vector<double>& radii, int probes_per_radius);

// Real-line variant for the staircase models.
HoelderSlope pointwise_hoelder_empirical_1d(const std::function<Interval(double)>& evaluator,
                                            double x0, const std::vector<double>& radii);

} // namespace coliseum
