#include "ufix/martingale.hpp"

#include <bit>
#include <cmath>

#include "ufix/dynamics.hpp"
#include "ufix/fairness.hpp"
#include "ufix/parallel.hpp"

namespace ufix {

PotentialFunction::PotentialFunction(std::int64_t L_, std::int64_t m_) : L(L_), m(m_) {
    if (L < 1 || m < 1) throw ValidationError("potential needs L >= 1 and m >= 1");
    h.push_back(0);
    for (std::int64_t k = 0; k < L; ++k) h.push_back(h.back() + (L - k) * m);
}

std::int64_t potential_gap(std::int64_t L, std::int64_t m) {
    if (L < 1 || m < 1) throw ValidationError("potential_gap needs L >= 1 and m >= 1");
    return m * L * (L + 1) / 2;
}

DriftReport drift_check(const UpdateFamily& family, const Direction& y, int L, int max_length) {
    if (L < 1 || L > max_length) throw ValidationError("drift_check: L must lie in [1, " + std::to_string(max_length) + "]");
    const SegmentRates seg(family, y, L);
    const auto m = static_cast<std::int64_t>(family.m());
    DriftReport rep;
    rep.L = L;
    const std::uint64_t all_plus = (std::uint64_t{1} << L) - 1;
    for (std::uint64_t eta = 0; eta < all_plus; ++eta) {
        const auto [ps, ms] = seg.sums(eta);
        const auto k = static_cast<std::int64_t>(L - std::popcount(eta));
        const auto mvf = -ms * (L - k + 1) * m + ps * (L - k) * m;
        if (ps + ms == 0) {
            ++rep.stuck;
            if (!rep.first_stuck) rep.first_stuck = seg.format(eta);
        } else if (mvf <= -m) {
            ++rep.ok;
        } else {
            ++rep.violations;
            if (!rep.first_violation) {
                rep.first_violation = seg.format(eta);
                rep.first_violation_mvf = mvf;
            }
        }
    }
    return rep;
}

bool TauBoundReport::tail_ok(double sigmas) const { return exceed_fraction <= std::exp(-1.0) + sigmas * exceed_sigma; }

TauBoundReport tau_bound_check(const UpdateFamily& family, const Direction& y, std::int64_t L, std::uint64_t trials,
                               std::uint64_t seed, unsigned workers) {
    if (trials < 2) throw ValidationError("tau_bound_check needs at least 2 trials");
    TauBoundReport rep;
    rep.L = L;
    rep.trials = trials;
    rep.bound = potential_gap(L, static_cast<std::int64_t>(family.m()));
    std::vector<ErosionRecord> recs(trials);
    parallel_for(trials, workers, [&](std::size_t t) {
        recs[t] = segment_erosion(family, y, L, DynamicsKind::voter, derive_seed(seed, t));
    });
    double sum = 0;
    std::uint64_t exceed = 0;
    for (const auto& r : recs) {
        rep.times.push_back(r.time);
        sum += r.time;
        rep.eroded += r.outcome == Outcome::eroded ? 1 : 0;
        exceed += r.time > static_cast<double>(rep.bound) ? 1 : 0;
    }
    const auto n = static_cast<double>(trials);
    rep.mean = sum / n;
    double var = 0;
    for (auto t : rep.times) var += (t - rep.mean) * (t - rep.mean);
    rep.std_error = std::sqrt(var / (n - 1) / n);
    rep.margin_se = rep.std_error > 0 ? (static_cast<double>(rep.bound) - rep.mean) / rep.std_error : INFINITY;
    rep.exceed_fraction = static_cast<double>(exceed) / n;
    const double e1 = std::exp(-1.0);
    rep.exceed_sigma = std::sqrt(e1 * (1 - e1) / n);
    return rep;
}

FitResult fit_exponent(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw ValidationError("fit_exponent needs at least 3 points");
    std::vector<double> xs, ys;
    FitResult fit;
    for (const auto& [L, t] : points) {
        if (!(L > 0 && t > 0)) throw ValidationError("fit_exponent needs positive sizes and times");
        xs.push_back(std::log(L));
        ys.push_back(std::log(t));
        fit.sizes.push_back(L);
    }
    const auto n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) throw ValidationError("fit_exponent needs at least two distinct sizes");
    fit.alpha = sxy / sxx;
    const double intercept = my - fit.alpha * mx;
    fit.prefactor = std::exp(intercept);
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (intercept + fit.alpha * xs[i]);
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

}  // namespace ufix
