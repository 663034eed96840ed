#include "ufix/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "ufix/parallel.hpp"
#include "ufix/rng.hpp"

namespace ufix {

namespace {

constexpr std::int64_t kExteriorInfected = -1;
constexpr std::int64_t kExteriorHealthy = -2;

// Per-site, per-offset neighbour table. Entries >= 0 are site indices.
class ClosureKernel {
public:
    ClosureKernel(const UpdateFamily& family, const Domain& domain) : family_(family), domain_(domain) {
        for (const auto& r : family.rules()) {
            rule_begin_.push_back(offsets_.size());
            offsets_.insert(offsets_.end(), r.begin(), r.end());
        }
        rule_begin_.push_back(offsets_.size());
        reverse_ = family.all_offsets();
        const std::size_t n = domain.size();
        table_.resize(n * offsets_.size());
        for (std::size_t s = 0; s < n; ++s) {
            const auto p = domain.site(s);
            for (std::size_t k = 0; k < offsets_.size(); ++k) {
                const auto q = p + offsets_[k];
                std::int64_t e;
                if (domain.contains(q)) {
                    e = static_cast<std::int64_t>(domain.index(q));
                } else {
                    const auto st = domain.exterior_state(q);
                    e = (st && *st < 0) ? kExteriorInfected : kExteriorHealthy;
                }
                table_[s * offsets_.size() + k] = e;
            }
        }
    }

    bool fires(const SiteSet& inf, std::size_t s) const {
        const std::size_t K = offsets_.size();
        for (std::size_t r = 0; r + 1 < rule_begin_.size(); ++r) {
            bool all = true;
            for (std::size_t k = rule_begin_[r]; k < rule_begin_[r + 1] && all; ++k) {
                const auto e = table_[s * K + k];
                all = e == kExteriorInfected || (e >= 0 && inf.test(static_cast<std::size_t>(e)));
            }
            if (all) return true;
        }
        return false;
    }

    // Sites whose neighbourhood contains s.
    template <class F>
    void for_each_dependent(std::size_t s, F&& f) const {
        const auto p = domain_.site(s);
        for (const auto& x : reverse_) {
            const auto q = p - x;
            if (domain_.contains(q)) f(domain_.index(q));
        }
    }

    std::size_t propagate(SiteSet& inf, std::deque<std::size_t>& queue) const {
        std::size_t added = 0;
        while (!queue.empty()) {
            const auto s = queue.front();
            queue.pop_front();
            for_each_dependent(s, [&](std::size_t w) {
                if (!inf.test(w) && fires(inf, w)) {
                    inf.set(w);
                    ++added;
                    queue.push_back(w);
                }
            });
        }
        return added;
    }

    std::size_t close_all(SiteSet& inf) const {
        std::deque<std::size_t> queue;
        std::size_t added = 0;
        for (std::size_t s = 0; s < domain_.size(); ++s) {
            if (inf.test(s)) {
                queue.push_back(s);
            } else if (fires(inf, s)) {
                inf.set(s);
                ++added;
                queue.push_back(s);
            }
        }
        return added + propagate(inf, queue);
    }

private:
    const UpdateFamily& family_;
    Domain domain_;
    std::vector<LatticeVector> offsets_;
    std::vector<std::size_t> rule_begin_;
    std::vector<LatticeVector> reverse_;
    std::vector<std::int64_t> table_;
};

}  // namespace

SiteSet closure(const UpdateFamily& family, const SiteSet& seeds) {
    SiteSet out = seeds;
    ClosureKernel(family, seeds.domain()).close_all(out);
    return out;
}

std::size_t close_with(const UpdateFamily& family, SiteSet& closed, const LatticeVector& site) {
    if (!closed.insert(site)) return 0;
    ClosureKernel k(family, closed.domain());
    std::deque<std::size_t> queue{closed.domain().index(site)};
    return 1 + k.propagate(closed, queue);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double ph = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (ph + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z / (1 + z2 / n) * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

SpanningProbe spanning_probability(const UpdateFamily& family, std::int64_t n, double p, std::uint64_t trials,
                                   std::uint64_t seed, unsigned workers) {
    const auto domain = Domain::torus(n);
    const ClosureKernel kernel(family, domain);
    std::vector<std::uint8_t> spans(trials, 0);
    parallel_for(trials, workers, [&](std::size_t t) {
        Rng rng(derive_seed(seed, t));
        SiteSet a(domain);
        for (std::size_t s = 0; s < domain.size(); ++s)
            if (rng.uniform() < p) a.set(s);
        kernel.close_all(a);
        spans[t] = a.full() ? 1 : 0;
    });
    SpanningProbe probe;
    probe.n = n;
    probe.p = p;
    probe.trials = trials;
    for (auto s : spans) probe.spanning += s;
    probe.ci = wilson_interval(probe.spanning, trials);
    return probe;
}

PcEstimate estimate_pc_torus(const UpdateFamily& family, std::int64_t n, std::uint64_t trials, double tolerance,
                             std::uint64_t seed, unsigned workers) {
    if (n < 8) throw ValidationError("estimate_pc_torus needs n >= 8");
    if (trials < 50) throw ValidationError("estimate_pc_torus needs at least 50 trials");
    if (!(tolerance > 0 && tolerance < 1)) throw ValidationError("tolerance must lie in (0,1)");
    PcEstimate est;
    est.n = n;
    est.low = 0;
    est.high = 1;
    while (est.high - est.low > tolerance) {
        const double mid = 0.5 * (est.low + est.high);
        auto probe = spanning_probability(family, n, mid, trials, seed, workers);
        if (probe.fraction() >= 0.5)
            est.high = mid;
        else
            est.low = mid;
        est.probes.push_back(probe);
    }
    est.estimate = 0.5 * (est.low + est.high);
    est.ci = {0.0, 1.0};
    for (const auto& pr : est.probes) {
        if (pr.ci.high < 0.5) est.ci.low = std::max(est.ci.low, pr.p);
        if (pr.ci.low > 0.5) est.ci.high = std::min(est.ci.high, pr.p);
    }
    return est;
}

}  // namespace ufix
