#include "ufix/fairness.hpp"

#include <functional>
#include <map>
#include <sstream>
#include <tuple>

#include "ufix/dynamics.hpp"
#include "ufix/parallel.hpp"
#include "ufix/stable_set.hpp"

namespace ufix {

SegmentRates::SegmentRates(const UpdateFamily& family, const Direction& y, int L) : L_(L) {
    if (L < 1 || L > 63) throw ValidationError("segment length must lie in [1, 63]");
    const auto sites = segment_sites(y, L);
    std::map<LatticeVector, int> index;
    for (int k = 0; k < L; ++k) index[sites[static_cast<std::size_t>(k)]] = k;
    groups_.resize(static_cast<std::size_t>(L));
    for (int k = 0; k < L; ++k) {
        std::map<std::tuple<std::uint64_t, bool, bool>, int> merged;
        for (const auto& r : family.rules()) {
            std::uint64_t mask = 0;
            bool fp = false, fm = false;
            for (const auto& x : r) {
                const auto q = sites[static_cast<std::size_t>(k)] + x;
                if (auto it = index.find(q); it != index.end())
                    mask |= std::uint64_t{1} << (L - 1 - it->second);
                else if (dot(q, y.vec()) < 0)
                    fm = true;
                else
                    fp = true;
            }
            ++merged[{mask, fp, fm}];
        }
        for (const auto& [key, n] : merged)
            groups_[static_cast<std::size_t>(k)].push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), n});
    }
}

int SegmentRates::rate(int site, std::uint64_t eta) const {
    const bool plus = (eta >> (L_ - 1 - site)) & 1;
    int r = 0;
    for (const auto& g : groups_[static_cast<std::size_t>(site)]) {
        const auto hit = eta & g.mask;
        if (plus ? (!g.frozen_plus && hit == 0) : (!g.frozen_minus && hit == g.mask)) r += g.count;
    }
    return r;
}

std::pair<std::int64_t, std::int64_t> SegmentRates::sums(std::uint64_t eta) const {
    std::int64_t ps = 0, ms = 0;
    for (int k = 0; k < L_; ++k) {
        const int r = rate(k, eta);
        if ((eta >> (L_ - 1 - k)) & 1)
            ps += r;
        else
            ms += r;
    }
    return {ps, ms};
}

std::uint64_t SegmentRates::parse(const std::string& eta) const {
    if (static_cast<int>(eta.size()) != L_) throw ValidationError("configuration length differs from L");
    std::uint64_t m = 0;
    for (char c : eta) {
        if (c != '+' && c != '-') throw ValidationError("configuration must consist of '+' and '-'");
        m = (m << 1) | (c == '+' ? 1u : 0u);
    }
    return m;
}

std::string SegmentRates::format(std::uint64_t eta) const {
    std::string s;
    for (int k = 0; k < L_; ++k) s += ((eta >> (L_ - 1 - k)) & 1) ? '+' : '-';
    return s;
}

std::string to_string(FairnessMethod m) {
    switch (m) {
        case FairnessMethod::exhaustive: return "exhaustive";
        case FairnessMethod::trajectory: return "trajectory";
        case FairnessMethod::matching: return "matching";
    }
    return "?";
}

std::string render(const FairnessReport& r, const UpdateFamily& family) {
    std::ostringstream os;
    os << "direction: " << r.direction.x() << "," << r.direction.y() << "\n";
    os << "method: " << to_string(r.method) << "\n";
    os << "verdict: " << (r.pass ? "pass" : "fail") << "\n";
    if (r.method != FairnessMethod::matching) {
        os << "L: " << r.L << "\n";
        os << "configurations_checked: " << r.configurations_checked << "\n";
        os << "counterexample: " << (r.counterexample ? *r.counterexample : "none") << "\n";
        if (r.counterexample) {
            os << "plus_sum: " << r.plus_sum << "\n";
            os << "minus_sum: " << r.minus_sum << "\n";
        }
    } else {
        os << "matching:";
        if (r.matching.empty()) os << " none";
        for (const auto& [s, t] : r.matching) os << " " << s << "->" << t;
        os << "\n";
        for (auto s : r.unmatched) os << "unmatched: " << s << " " << family.rule(s) << "\n";
        for (auto s : r.condition_a_failures) os << "condition_a_fails: " << s << " " << family.rule(s) << "\n";
    }
    if (!r.note.empty()) os << "note: " << r.note << "\n";
    return os.str();
}

FairnessReport presym_exhaustive(const UpdateFamily& family, const Direction& y, int L, unsigned workers,
                                 int max_length) {
    if (L < 1) throw ValidationError("L must be >= 1");
    if (L > max_length) throw ValidationError("L exceeds the exhaustive limit of " + std::to_string(max_length));
    if (!is_stable(family, y)) throw ValidationError("direction is not stable");
    const SegmentRates seg(family, y, L);
    const std::uint64_t total = std::uint64_t{1} << L;
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::uint64_t>(total, 64));
    const std::uint64_t per = (total + chunks - 1) / chunks;
    std::vector<std::uint64_t> first(chunks, UINT64_MAX);
    parallel_for(chunks, workers, [&](std::size_t c) {
        const auto lo = c * per, hi = std::min(total, lo + per);
        for (auto eta = lo; eta < hi; ++eta) {
            const auto [ps, ms] = seg.sums(eta);
            if (ps > ms) {
                first[c] = eta;
                return;
            }
        }
    });
    FairnessReport r;
    r.direction = y;
    r.method = FairnessMethod::exhaustive;
    r.L = L;
    const auto best = *std::min_element(first.begin(), first.end());
    r.pass = best == UINT64_MAX;
    r.configurations_checked = r.pass ? total : best + 1;
    if (!r.pass) {
        r.counterexample = seg.format(best);
        std::tie(r.plus_sum, r.minus_sum) = seg.sums(best);
    }
    return r;
}

FairnessReport presym_trajectory(const UpdateFamily& family, const Direction& y, int L, std::uint64_t trials,
                                 std::uint64_t seed, double time_cap) {
    const SegmentRates seg(family, y, L);
    std::map<LatticeVector, int> index;
    const auto sites = segment_sites(y, L);
    for (int k = 0; k < L; ++k) index[sites[static_cast<std::size_t>(k)]] = k;

    FairnessReport r;
    r.direction = y;
    r.method = FairnessMethod::trajectory;
    r.L = L;
    r.pass = true;
    r.note = "evidence only: no violation along the sampled trajectories";
    for (std::uint64_t t = 0; t < trials && r.pass; ++t) {
        std::uint64_t eta = 0;  // [-]: plus sum 0
        ++r.configurations_checked;
        segment_erosion(family, y, L, DynamicsKind::voter, derive_seed(seed, t), time_cap,
                        [&](const Engine& e, const Flip& f) {
                            if (!r.pass) return;
                            const int k = index.at(e.config().domain.site(f.site));
                            eta ^= std::uint64_t{1} << (L - 1 - k);
                            ++r.configurations_checked;
                            const auto [ps, ms] = seg.sums(eta);
                            if (ps > ms) {
                                r.pass = false;
                                r.counterexample = seg.format(eta);
                                r.plus_sum = ps;
                                r.minus_sum = ms;
                                r.note = "violation reached at trial " + std::to_string(t);
                            }
                        });
    }
    return r;
}

FairnessReport downgrade(FairnessReport trajectory, const FairnessReport& exhaustive) {
    if (exhaustive.method == FairnessMethod::exhaustive && !exhaustive.pass && trajectory.pass) {
        trajectory.pass = false;
        trajectory.note = "downgraded: exhaustive scan at L=" + std::to_string(exhaustive.L) + " found " +
                          exhaustive.counterexample.value_or("?");
    }
    return trajectory;
}

FairnessReport matching_criterion(const UpdateFamily& family, const Direction& y) {
    const auto& u = y.vec();
    auto side = [&](const LatticeVector& x) {
        const auto d = dot(x, u);
        return d < 0 ? -1 : (d > 0 ? 1 : 0);
    };
    FairnessReport rep;
    rep.direction = y;
    rep.method = FairnessMethod::matching;
    const auto& rules = family.rules();
    const std::size_t m = rules.size();

    // (a), and for (b) the source rules with their vertex on l_y (nullopt when
    // the rule lies inside H_y, which forces its image into H_{-y}).
    std::vector<std::size_t> sources;
    std::vector<std::optional<LatticeVector>> pivot;
    for (std::size_t i = 0; i < m; ++i) {
        int on_line = 0, upper = 0;
        std::optional<LatticeVector> x;
        for (const auto& v : rules[i]) {
            const int s = side(v);
            if (s == 0) {
                ++on_line;
                x = v;
            }
            if (s > 0) ++upper;
        }
        if (on_line > 1 && upper == 0) rep.condition_a_failures.push_back(i);
        if (upper == 0 && on_line <= 1) {
            sources.push_back(i);
            pivot.push_back(x);
        }
    }
    auto fits = [&](std::size_t target, const std::optional<LatticeVector>& x) {
        for (const auto& v : rules[target])
            if (side(v) <= 0 && !(x && v == -*x)) return false;
        return true;
    };
    // Kuhn's augmenting paths, sources in index order.
    std::vector<std::optional<std::size_t>> owner(m);
    std::vector<char> seen;
    std::function<bool(std::size_t)> augment = [&](std::size_t s) {
        for (std::size_t t = 0; t < m; ++t) {
            if (seen[t] || !fits(t, pivot[s])) continue;
            seen[t] = 1;
            if (!owner[t] || augment(*owner[t])) {
                owner[t] = s;
                return true;
            }
        }
        return false;
    };
    std::vector<char> matched(sources.size(), 0);
    for (std::size_t s = 0; s < sources.size(); ++s) {
        seen.assign(m, 0);
        matched[s] = augment(s) ? 1 : 0;
    }
    for (std::size_t t = 0; t < m; ++t)
        if (owner[t]) rep.matching.push_back({sources[*owner[t]], t});
    std::sort(rep.matching.begin(), rep.matching.end());
    for (std::size_t s = 0; s < sources.size(); ++s)
        if (!matched[s]) rep.unmatched.push_back(sources[s]);
    rep.pass = rep.condition_a_failures.empty() && rep.unmatched.empty();
    if (!rep.condition_a_failures.empty()) rep.note = "condition (a) fails";
    else if (!rep.unmatched.empty()) rep.note = "condition (b) fails: matching does not saturate the sources";
    return rep;
}

UpdateFamily induced_family(const UpdateFamily& u_prime, const std::vector<Rule1D>& V, const std::vector<Rule1D>& W,
                            std::int64_t i) {
    if (i < 1) throw ValidationError("induced_family: i must be a positive integer");
    for (const auto& X : u_prime.rules()) {
        bool upper = false;
        std::vector<Direction> dirs;
        for (const auto& x : X) {
            upper = upper || x.y > 0;
            dirs.emplace_back(x);
        }
        if (!upper || !origin_in_hull(dirs)) {
            std::ostringstream os;
            os << "condition (I) fails for rule " << X;
            throw ValidationError(os.str());
        }
    }
    auto count_in = [](const std::vector<Rule1D>& F, int sign) {
        std::int64_t n = 0;
        for (const auto& R : F) {
            if (R.empty()) throw ValidationError("induced_family: empty one-dimensional rule");
            n += std::all_of(R.begin(), R.end(), [&](std::int64_t r) { return sign > 0 ? r > 0 : r < 0; }) ? 1 : 0;
        }
        return n;
    };
    const auto nu_p = count_in(V, 1), nu_m = count_in(V, -1), w_p = count_in(W, 1), w_m = count_in(W, -1);
    if (V.empty()) {
        if (!(w_p * w_m > 0))
            throw ValidationError("condition (II') fails: w+ = " + std::to_string(w_p) + ", w- = " + std::to_string(w_m));
    } else if (!(0 < nu_m && nu_m <= w_p && w_m <= nu_p)) {
        throw ValidationError("condition (II) fails: nu- = " + std::to_string(nu_m) + ", w+ = " + std::to_string(w_p) +
                              ", w- = " + std::to_string(w_m) + ", nu+ = " + std::to_string(nu_p));
    }
    auto rules = u_prime.rules();
    auto add = [&](std::int64_t first, const Rule1D& R) {
        std::vector<LatticeVector> xs{{first, 0}};
        for (auto r : R) xs.push_back({0, r});
        Rule X(xs);
        if (std::find(rules.begin(), rules.end(), X) == rules.end()) rules.push_back(X);
    };
    for (const auto& R : V) add(i, R);
    for (const auto& R : W) add(-i, R);
    return UpdateFamily(std::move(rules), "induced");
}

}  // namespace ufix
