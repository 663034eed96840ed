#pragma once

#include <cstdint>
#include <vector>

#include "ufix/family.hpp"

namespace ufix {

/// Closure [A] of the seed set under U-bootstrap percolation on the seeds'
/// domain. Exterior sites follow the domain boundary: frozen_minus (and the
/// minus side of a half-plane) count as infected, frozen_plus never, and on a
/// free boundary any rule touching the exterior cannot fire.
SiteSet closure(const UpdateFamily& family, const SiteSet& seeds);

// Incremental closure: infects `site` in an already closed set and closes
// again. Returns the number of newly infected sites (including `site`).
std::size_t close_with(const UpdateFamily& family, SiteSet& closed, const LatticeVector& site);

struct Interval {
    double low = 0;
    double high = 1;
};

// Wilson score interval at the given normal quantile (1.96 ~ 95%).
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96);

struct SpanningProbe {
    std::int64_t n = 0;
    double p = 0;
    std::uint64_t trials = 0;
    std::uint64_t spanning = 0;
    Interval ci;

    double fraction() const { return trials ? static_cast<double>(spanning) / static_cast<double>(trials) : 0.0; }
};

// Trial t draws one uniform per torus site from Rng(derive_seed(seed, t)) and
// seeds the sites whose uniform is below p. The uniforms do not depend on p,
// so spanning is monotone in p trial by trial.
SpanningProbe spanning_probability(const UpdateFamily& family, std::int64_t n, double p, std::uint64_t trials,
                                   std::uint64_t seed, unsigned workers = 1);

struct PcEstimate {
    std::int64_t n = 0;
    // Final bisection bracket, width <= tolerance.
    double low = 0;
    double high = 1;
    double estimate = 0.5;
    // Largest probe confidently below 1/2 and smallest confidently above.
    Interval ci;
    std::vector<SpanningProbe> probes;
};

/// Bisection for inf{p : P_p([A] = torus) >= 1/2}. A probe counts as "at or
/// above" when its empirical spanning fraction is >= 1/2.
PcEstimate estimate_pc_torus(const UpdateFamily& family, std::int64_t n, std::uint64_t trials, double tolerance,
                             std::uint64_t seed, unsigned workers = 1);

}  // namespace ufix
