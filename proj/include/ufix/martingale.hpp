#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ufix/family.hpp"

namespace ufix {

/// f(eta) = h_{|eta^-|} with h_0 = 0 and h_{k+1} - h_k = (L-k) m.
struct PotentialFunction {
    std::int64_t L = 0;
    std::int64_t m = 0;
    std::vector<std::int64_t> h;

    PotentialFunction(std::int64_t L, std::int64_t m);
    std::int64_t operator()(std::int64_t minus_count) const { return h.at(static_cast<std::size_t>(minus_count)); }
};

// h_L - h_0 = m L (L+1) / 2.
std::int64_t potential_gap(std::int64_t L, std::int64_t m);

struct DriftReport {
    int L = 0;
    std::uint64_t ok = 0;
    std::uint64_t violations = 0;
    std::uint64_t stuck = 0;
    std::optional<std::string> first_violation;
    std::int64_t first_violation_mvf = 0;
    std::optional<std::string> first_stuck;
};

constexpr int kMaxDriftLength = 20;

/// For every eta != [+]: m Vf(eta) = -sum_{eta^-} r (L-k+1) m + sum_{eta^+} r (L-k) m
/// with k = |eta^-|. ok iff m Vf <= -m; stuck iff every rate vanishes.
DriftReport drift_check(const UpdateFamily& family, const Direction& y, int L, int max_length = kMaxDriftLength);

struct TauBoundReport {
    std::int64_t L = 0;
    std::uint64_t trials = 0;
    std::uint64_t eroded = 0;
    double mean = 0;
    double std_error = 0;
    std::int64_t bound = 0;
    // (bound - mean) / std_error
    double margin_se = 0;
    // Fraction of trials with tau > bound, and its null standard deviation
    // sqrt(e^-1 (1 - e^-1) / trials).
    double exceed_fraction = 0;
    double exceed_sigma = 0;
    std::vector<double> times;

    bool mean_below_bound(double z) const { return mean + z * std_error <= static_cast<double>(bound); }
    bool tail_ok(double sigmas = 3) const;
};

TauBoundReport tau_bound_check(const UpdateFamily& family, const Direction& y, std::int64_t L, std::uint64_t trials,
                               std::uint64_t seed, unsigned workers = 1);

struct FitResult {
    double alpha = 0;
    double prefactor = 0;
    // RMS of the log-space residuals.
    double residual = 0;
    std::vector<double> sizes;
};

// Least squares of log(time) on log(L).
FitResult fit_exponent(const std::vector<std::pair<double, double>>& points);

}  // namespace ufix
