#include "coliseum/escape.hpp"

#include "coliseum/rng.hpp"

#include <cmath>
#include <deque>

namespace coliseum {

namespace {

double lower_coeff_sum(const Polynomial& h) {
    double s = 0.0;
    for (size_t i = 0; i + 1 < h.coeffs().size(); ++i) s += std::abs(h.coeffs()[i]);
    return s;
}

double spec_radius(const Polynomial& h) {
    double lead = std::abs(h.leading());
    double s = lower_coeff_sum(h);
    return std::max(1.0, std::pow((2.0 + s) / lead, 1.0 / double(h.degree() - 1)));
}

// Sufficient check that |z| >= R doubles under h:
//   |h(z)| >= |z|^{d-1} (|a_d||z| - S), increasing in |z| once |a_d||z| >= S,
// so testing at |z| = R covers all larger radii.
bool doubling_certified(const Polynomial& h, double R) {
    double lead = std::abs(h.leading());
    double s = lower_coeff_sum(h);
    if (R < 1.0) return false;
    if (lead * R < s) return false;
    return std::pow(R, double(h.degree() - 2)) * (lead * R - s) >= 2.0;
}

} // namespace

double escape_radius(const GeneratorSystem& system) {
    double r = 1.0;
    for (const auto& h : system.generators()) r = std::max(r, spec_radius(h));
    return r;
}

double single_escape_radius(const Polynomial& h) {
    double lead = std::abs(h.leading());
    return std::max(1.0, (2.0 + lower_coeff_sum(h)) / lead);
}

EscapeParams certify_escape_params(const GeneratorSystem& system, TrapSpec trap,
                                   int max_depth, std::optional<double> radius_override) {
    double r = radius_override.value_or(escape_radius(system));
    // The closed form is exactly tight for monomials; a hair of headroom
    // keeps the certification below from failing on rounding alone.
    r *= 1.0 + 1e-9;
    bool ok = true;
    for (const auto& h : system.generators()) ok = ok && doubling_certified(h, r);
    if (!ok) {
        // The closed-form radius is tight for monomial-dominated generators
        // but can undercut maps with large middle coefficients; fall back to
        // the always-valid Cauchy-style bound.
        for (const auto& h : system.generators()) r = std::max(r, single_escape_radius(h));
        for (const auto& h : system.generators())
            if (!doubling_certified(h, r))
                throw std::runtime_error("escape radius certification failed");
    }
    if (trap.kind != TrapSpec::Kind::None) {
        TrapCertificate cert = validate_trap(system, trap);
        if (!cert.certified) throw std::runtime_error("trap validation failed: " + cert.failure);
    }
    EscapeParams params;
    params.radius = r;
    params.trap = std::move(trap);
    params.max_depth = max_depth;
    return params;
}

namespace {

// Boundary cloud of the Julia set of a single map, by inverse iteration.
// Internal helper for two-stage trap validation.
std::vector<cplx> single_julia_samples(const Polynomial& h, int n, uint64_t seed) {
    Polynomial shifted = [&] {
        auto c = h.coeffs();
        c[1] -= 1.0;
        return Polynomial(c);
    }();
    Polynomial hd = h.derivative();
    cplx z0;
    bool found = false;
    for (const auto& fp : roots(shifted)) {
        if (std::abs(hd(fp)) > 1.0 + 1e-9) {
            z0 = fp;
            found = true;
            break;
        }
    }
    if (!found) throw std::runtime_error("no repelling fixed point found for stage map");

    Rng rng(seed);
    std::vector<cplx> out;
    out.reserve(n);
    cplx z = z0;
    const int burn = 64;
    for (int i = -burn; i < n; ++i) {
        auto pre = preimages(h, z);
        z = pre[rng.next_index(pre.size())];
        if (i >= 0) out.push_back(z);
    }
    return out;
}

bool bounded_orbit(const Polynomial& h, cplx z, double bound, int depth) {
    for (int k = 0; k < depth; ++k) {
        if (std::abs(z) > bound) return false;
        z = h(z);
    }
    return std::abs(z) <= bound;
}

} // namespace

TrapCertificate validate_trap(const GeneratorSystem& system, const TrapSpec& trap,
                              int samples) {
    TrapCertificate cert;
    if (trap.kind == TrapSpec::Kind::None) {
        cert.failure = "no trap specified";
        return cert;
    }
    const cplx b = trap.center;
    const double r = trap.radius;
    if (!(r > 0.0)) {
        cert.failure = "trap radius must be positive";
        return cert;
    }

    double min_margin = r;
    for (size_t j = 0; j < system.size(); ++j) {
        const Polynomial& h = system.generator(j);
        Polynomial hd = h.derivative();
        Polynomial hdd = hd.derivative();
        double max_image = 0.0, max_d = 0.0, max_dd = 0.0;
        cplx worst_point = b + r;
        for (int k = 0; k < samples; ++k) {
            cplx z = b + std::polar(r, 2.0 * M_PI * double(k) / double(samples));
            double v = std::abs(h(z) - b);
            if (v > max_image) {
                max_image = v;
                worst_point = z;
            }
            max_d = std::max(max_d, std::abs(hd(z)));
            max_dd = std::max(max_dd, std::abs(hdd(z)));
        }
        // Between adjacent samples the image can move by at most
        // (max |h'| + max |h''| * halfgap) * halfgap along the arc.
        double halfgap = M_PI * r / double(samples);
        double slack = (max_d + max_dd * halfgap) * halfgap;
        double margin = r - (max_image + slack);
        if (margin <= 0.0) {
            cert.failure = "generator " + std::to_string(j) + " leaves disk near z=(" +
                           std::to_string(worst_point.real()) + "," +
                           std::to_string(worst_point.imag()) + ")";
            return cert;
        }
        min_margin = std::min(min_margin, margin);
    }

    if (trap.kind == TrapSpec::Kind::TwoStage) {
        int g = trap.stage_generator;
        if (g < 0 || size_t(g) >= system.size()) {
            cert.failure = "stage generator index out of range";
            return cert;
        }
        const Polynomial& stage = system.generator(g);
        double stage_bound = single_escape_radius(stage);
        if (!bounded_orbit(stage, b, stage_bound, trap.membership_depth)) {
            cert.failure = "disk center not in the stage filled-in set";
            return cert;
        }
        auto boundary = single_julia_samples(stage, 512, 0x7261704bULL);
        for (size_t j = 0; j < system.size(); ++j) {
            if (int(j) == g) continue; // K(h_stage) is exactly invariant under h_stage
            const Polynomial& h = system.generator(j);
            for (const auto& s : boundary) {
                if (!bounded_orbit(stage, h(s), stage_bound, trap.membership_depth)) {
                    cert.failure = "generator " + std::to_string(j) +
                                   " maps the stage boundary out of the stage filled-in set";
                    return cert;
                }
            }
        }
    }

    cert.certified = true;
    cert.margin = min_margin;
    return cert;
}

bool EscapeParams::trapped(const GeneratorSystem& system, cplx z) const {
    switch (trap.kind) {
        case TrapSpec::Kind::None:
            return false;
        case TrapSpec::Kind::Disk:
            return std::abs(z - trap.center) <= trap.radius;
        case TrapSpec::Kind::TwoStage: {
            if (std::abs(z - trap.center) <= trap.radius) return true;
            const Polynomial& stage = system.generator(trap.stage_generator);
            double bound = single_escape_radius(stage);
            if (std::abs(z) > bound) return false;
            cplx w = z;
            for (int k = 0; k < trap.membership_depth; ++k) {
                w = stage(w);
                if (std::abs(w) > bound) return false;
            }
            return true;
        }
    }
    return false;
}

OrbitResult forward_orbit(const GeneratorSystem& system, const Word& word, cplx z,
                          double escape_radius_r) {
    OrbitResult out;
    out.points.push_back(z);
    const double abort_at = escape_radius_r * 1024.0;
    for (int idx : word) {
        z = system.generator(idx)(z);
        out.points.push_back(z);
        if (std::abs(z) > abort_at) {
            out.escaped = true;
            break;
        }
    }
    if (!out.escaped && std::abs(z) > escape_radius_r) out.escaped = true;
    return out;
}

std::optional<Word> kernel_witness(cplx z, const GeneratorSystem& system,
                                   const EscapeParams& params) {
    if (std::abs(z) > params.radius || params.trapped(system, z)) return Word{};
    struct Node {
        cplx z;
        Word word;
    };
    std::deque<Node> queue{{z, {}}};
    while (!queue.empty()) {
        Node node = std::move(queue.front());
        queue.pop_front();
        if (int(node.word.size()) >= params.max_depth) continue;
        for (size_t j = 0; j < system.size(); ++j) {
            cplx w = system.generator(j)(node.z);
            Word word = node.word;
            word.push_back(int(j));
            if (std::abs(w) > params.radius || params.trapped(system, w)) return word;
            queue.push_back({w, std::move(word)});
        }
    }
    return std::nullopt;
}

} // namespace coliseum
