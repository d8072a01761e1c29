#pragma once

#include "coliseum/poly.hpp"

#include <optional>
#include <string>

namespace coliseum {

// Certified doubling radius: |z| >= R implies |h_j(z)| >= 2|z| for every
// generator, hence certified escape to infinity.
double escape_radius(const GeneratorSystem& system);

// Per-generator radius bound such that the filled-in set K(h) lies inside
// |z| <= bound (|z| > bound certifies escape under iteration of h alone).
double single_escape_radius(const Polynomial& h);

// Trap: a region certified forward invariant under every generator, so
// membership certifies escape probability 0.
//
//   Disk      - closed disk D(b, r) with h_j(D) inside D for all j.
//   TwoStage  - the disk plus the rule that numerically verified members
//               of K(h_stage) are trapped (valid when every generator maps
//               K(h_stage) into itself, which validate_trap checks).
struct TrapSpec {
    enum class Kind { None, Disk, TwoStage };
    Kind kind = Kind::None;
    cplx center{0.0, 0.0};
    double radius = 0.0;
    int stage_generator = 0;   // TwoStage: index of the stage map
    int membership_depth = 64; // TwoStage: iterations of the boundedness test

    static TrapSpec none() { return {}; }
    static TrapSpec disk(cplx b, double r) {
        TrapSpec t;
        t.kind = Kind::Disk;
        t.center = b;
        t.radius = r;
        return t;
    }
    static TrapSpec two_stage(cplx b, double r, int stage, int depth = 64) {
        TrapSpec t;
        t.kind = Kind::TwoStage;
        t.center = b;
        t.radius = r;
        t.stage_generator = stage;
        t.membership_depth = depth;
        return t;
    }
};

struct TrapCertificate {
    bool certified = false;
    double margin = 0.0;        // min over generators of r - max |h(z) - b| - lipschitz slack
    std::string failure;        // empty when certified
};

// Checks max_{|z-b|=r} |h_j(z) - b| + margin <= r for every generator over
// `samples` boundary points, with a derivative-based Lipschitz slack for the
// gaps between samples. For TwoStage traps additionally checks, on a sampled
// boundary cloud of K(h_stage), that every generator maps it back into the
// membership test.
TrapCertificate validate_trap(const GeneratorSystem& system, const TrapSpec& trap,
                              int samples = 1024);

// Escape parameters used by every probability computation. Construction via
// `certify` re-derives R if the analytic doubling bound cannot be verified
// for the spec formula value.
struct EscapeParams {
    double radius = 0.0; // R
    TrapSpec trap;
    int max_depth = 24;

    // True when z is inside the trap region (escape probability 0);
    // requires a validated trap.
    bool trapped(const GeneratorSystem& system, cplx z) const;
};

EscapeParams certify_escape_params(const GeneratorSystem& system, TrapSpec trap,
                                   int max_depth = 24,
                                   std::optional<double> radius_override = std::nullopt);

struct OrbitResult {
    std::vector<cplx> points; // z, h_{i0}(z), ..., full trajectory
    bool escaped = false;     // aborted once |.| > R * 2^10
};

// Trajectory of z under the composition word.
OrbitResult forward_orbit(const GeneratorSystem& system, const Word& word, cplx z,
                          double escape_radius_r);

// Breadth-first search over words of length <= max_depth for one sending z
// past R or into the trap; the returned shortest word certifies that z is
// not in the kernel Julia set. Empty optional: search exhausted.
std::optional<Word> kernel_witness(cplx z, const GeneratorSystem& system,
                                   const EscapeParams& params);

} // namespace coliseum
