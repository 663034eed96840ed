#include "ufix/dynamics.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "ufix/stable_set.hpp"

namespace ufix {

std::string to_string(DynamicsKind k) { return k == DynamicsKind::voter ? "voter" : "ising"; }

DynamicsKind parse_kind(const std::string& s) {
    if (s == "voter") return DynamicsKind::voter;
    if (s == "ising") return DynamicsKind::ising;
    throw ValidationError("kind must be voter or ising, got '" + s + "'");
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::eroded: return "eroded";
        case Outcome::timed_out: return "timed_out";
        case Outcome::stuck: return "stuck";
    }
    return "?";
}

int SpinConfiguration::state(const LatticeVector& p) const {
    if (domain.is_torus() || domain.contains(p)) return spins[domain.index(p)];
    const auto e = domain.exterior_state(p);
    return e ? *e : 0;
}

SpinConfiguration SpinConfiguration::complemented() const {
    SpinConfiguration c = *this;
    for (auto& s : c.spins) s = static_cast<std::int8_t>(-s);
    if (c.domain.boundary == Domain::Boundary::frozen_plus)
        c.domain.boundary = Domain::Boundary::frozen_minus;
    else if (c.domain.boundary == Domain::Boundary::frozen_minus)
        c.domain.boundary = Domain::Boundary::frozen_plus;
    c.domain.inside_state = -c.domain.inside_state;
    c.domain.outside_state = -c.domain.outside_state;
    return c;
}

int disagreement_count(const SpinConfiguration& config, const UpdateFamily& family, const LatticeVector& v) {
    const int s = config.state(v);
    int n = 0;
    for (const auto& r : family.rules()) {
        bool all = true;
        for (const auto& x : r) all = all && config.state(v + x) == -s;
        n += all ? 1 : 0;
    }
    return n;
}

std::vector<LatticeVector> segment_sites(const Direction& y, std::int64_t L) {
    if (L < 1) throw ValidationError("segment length must be >= 1");
    std::vector<LatticeVector> out;
    const auto p = y.perp().vec();
    for (std::int64_t k = 0; k < L; ++k) out.push_back(p * k);
    return out;
}

SpinSystem segment_system(const Direction& y, std::int64_t L) {
    const auto sites = segment_sites(y, L);
    std::int64_t x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    for (const auto& s : sites) {
        x0 = std::min(x0, s.x);
        x1 = std::max(x1, s.x);
        y0 = std::min(y0, s.y);
        y1 = std::max(y1, s.y);
    }
    const auto dom = Domain::half_plane_box(x0, y0, x1 - x0 + 1, y1 - y0 + 1, y, -1, +1);
    SpinSystem sys{SpinConfiguration(dom, +1), std::vector<std::uint8_t>(dom.size(), 0)};
    for (std::size_t i = 0; i < dom.size(); ++i)
        sys.config.spins[i] = dot(dom.site(i), y.vec()) < 0 ? -1 : +1;
    for (const auto& s : sites) {
        sys.config.set(s, -1);
        sys.mobile[dom.index(s)] = 1;
    }
    return sys;
}

SpinSystem droplet_system(const Droplet& d) {
    const auto dom = Domain::box(d.max_x() - d.min_x() + 1, d.max_y() - d.min_y() + 1, Domain::Boundary::frozen_plus,
                                 d.min_x(), d.min_y());
    SpinSystem sys{SpinConfiguration(dom, +1), std::vector<std::uint8_t>(dom.size(), 0)};
    for (const auto& r : d.rows())
        for (auto x = r.xl; x <= r.xr; ++x) {
            sys.config.set({x, r.y}, -1);
            sys.mobile[dom.index({x, r.y})] = 1;
        }
    return sys;
}

SpinSystem torus_system(std::int64_t n, double p, Rng& rng) {
    if (n < 1) throw ValidationError("torus size must be >= 1");
    const auto dom = Domain::torus(n);
    SpinSystem sys{SpinConfiguration(dom, -1), std::vector<std::uint8_t>(dom.size(), 1)};
    for (auto& s : sys.config.spins) s = rng.uniform() < p ? 1 : -1;
    return sys;
}

Engine::Engine(const UpdateFamily& family, DynamicsKind kind, SpinSystem system, std::uint64_t seed)
    : family_(family), kind_(kind), sys_(std::move(system)), rng_(seed), m_(family.m()) {
    const auto& dom = sys_.config.domain;
    if (sys_.mobile.size() != dom.size() || sys_.config.spins.size() != dom.size())
        throw ValidationError("spin system arrays do not match the domain");
    for (const auto& r : family_.rules()) rule_size_.push_back(static_cast<std::uint16_t>(r.size()));
    id_of_.assign(dom.size(), -1);
    for (std::size_t i = 0; i < dom.size(); ++i)
        if (sys_.mobile[i]) {
            id_of_[i] = static_cast<std::int32_t>(mobile_.size());
            mobile_.push_back(i);
            if (sys_.config.spins[i] < 0) ++minus_;
        }
    const std::size_t M = mobile_.size();
    plus_.assign(M * m_, 0);
    absent_.assign(M * m_, 0);
    std::vector<std::vector<std::uint32_t>> rev(M);
    for (std::size_t id = 0; id < M; ++id) {
        const auto v = dom.site(mobile_[id]);
        for (std::size_t r = 0; r < m_; ++r) {
            const auto pair = static_cast<std::uint32_t>(id * m_ + r);
            for (const auto& x : family_.rule(r)) {
                const auto q = v + x;
                int s;
                if (dom.is_torus() || dom.contains(q)) {
                    const auto qi = dom.index(q);
                    s = sys_.config.spins[qi];
                    if (id_of_[qi] >= 0) rev[static_cast<std::size_t>(id_of_[qi])].push_back(pair);
                } else {
                    const auto e = dom.exterior_state(q);
                    s = e ? *e : 0;
                }
                if (s == 0) absent_[pair] = 1;
                if (s > 0) ++plus_[pair];
            }
        }
    }
    rev_start_.assign(M + 1, 0);
    for (std::size_t id = 0; id < M; ++id) rev_start_[id + 1] = rev_start_[id] + static_cast<std::uint32_t>(rev[id].size());
    rev_pairs_.reserve(rev_start_[M]);
    for (auto& l : rev) rev_pairs_.insert(rev_pairs_.end(), l.begin(), l.end());

    r_.assign(M, 0);
    active_.assign(M, 1);
    current_w_.assign(M, 0);
    tree_.assign(M + 1, 0);
    stamp_.assign(M, 0);
    for (std::uint32_t id = 0; id < M; ++id) recompute(id);
}

std::uint64_t Engine::weight(std::uint32_t id) const {
    if (!active_[id]) return 0;
    return kind_ == DynamicsKind::voter ? r_[id] : (r_[id] > 0 ? 1u : 0u);
}

void Engine::fenwick_add(std::uint32_t id, std::int64_t delta) {
    total_ += static_cast<std::uint64_t>(delta);
    for (std::size_t i = id + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += static_cast<std::uint64_t>(delta);
}

std::uint32_t Engine::fenwick_find(std::uint64_t target) const {
    std::size_t pos = 0;
    const std::size_t n = tree_.size() - 1;
    for (std::size_t step = std::bit_floor(n); step > 0; step >>= 1)
        if (pos + step <= n && tree_[pos + step] <= target) {
            pos += step;
            target -= tree_[pos];
        }
    return static_cast<std::uint32_t>(pos);
}

void Engine::recompute(std::uint32_t id) {
    const bool plus = sys_.config.spins[mobile_[id]] > 0;
    const std::size_t base = static_cast<std::size_t>(id) * m_;
    std::uint16_t r = 0;
    for (std::size_t k = 0; k < m_; ++k)
        if (!absent_[base + k] && plus_[base + k] == (plus ? 0 : rule_size_[k])) ++r;
    r_[id] = r;
    const auto w = weight(id);
    if (w != current_w_[id]) {
        fenwick_add(id, static_cast<std::int64_t>(w) - static_cast<std::int64_t>(current_w_[id]));
        current_w_[id] = w;
    }
}

std::uint64_t Engine::weight_total() const { return total_; }

double Engine::total_rate() const {
    const auto w = static_cast<double>(total_);
    return kind_ == DynamicsKind::voter ? w / static_cast<double>(m_) : w;
}

int Engine::rate_count(std::size_t site) const {
    const auto id = id_of_.at(site);
    if (id < 0) throw ValidationError("rate_count: site is not mobile");
    return r_[static_cast<std::size_t>(id)];
}

bool Engine::propose(Flip& out) {
    if (total_ == 0) return false;
    const double dt = rng_.exponential(total_rate());
    const auto id = fenwick_find(rng_.below(total_));
    out.site = mobile_[id];
    out.new_state = -sys_.config.spins[out.site];
    out.time = time_ + dt;
    return true;
}

void Engine::apply(const Flip& f) {
    const auto id = static_cast<std::uint32_t>(id_of_[f.site]);
    auto& s = sys_.config.spins[f.site];
    s = static_cast<std::int8_t>(-s);
    minus_ = s < 0 ? minus_ + 1 : minus_ - 1;
    time_ = f.time;
    ++flips_;
    const std::int16_t delta = s > 0 ? 1 : -1;
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    dirty_.clear();
    dirty_.push_back(id);
    stamp_[id] = epoch_;
    for (auto k = rev_start_[id]; k < rev_start_[id + 1]; ++k) {
        const auto pair = rev_pairs_[k];
        plus_[pair] = static_cast<std::uint16_t>(plus_[pair] + delta);
        const auto v = static_cast<std::uint32_t>(pair / m_);
        if (stamp_[v] != epoch_) {
            stamp_[v] = epoch_;
            dirty_.push_back(v);
        }
    }
    for (auto v : dirty_) recompute(v);
}

bool Engine::step(Flip* out) {
    Flip f;
    if (!propose(f)) return false;
    apply(f);
    if (out) *out = f;
    return true;
}

void Engine::set_active(std::size_t site, bool on) {
    const auto id = id_of_.at(site);
    if (id < 0) throw ValidationError("set_active: site is not mobile");
    active_[static_cast<std::size_t>(id)] = on ? 1 : 0;
    recompute(static_cast<std::uint32_t>(id));
}

void Engine::set_all_active(bool on) {
    for (std::uint32_t id = 0; id < mobile_.size(); ++id) {
        active_[id] = on ? 1 : 0;
        recompute(id);
    }
}

void Engine::check_consistency() const {
    std::uint64_t sum = 0;
    std::size_t minus = 0;
    for (std::size_t id = 0; id < mobile_.size(); ++id) {
        const auto v = sys_.config.domain.site(mobile_[id]);
        const int want = disagreement_count(sys_.config, family_, v);
        if (want != r_[id]) {
            std::ostringstream os;
            os << "rate drift at " << v << ": maintained " << r_[id] << ", recomputed " << want;
            throw InvariantError(os.str());
        }
        sum += weight(static_cast<std::uint32_t>(id));
        if (sys_.config.spins[mobile_[id]] < 0) ++minus;
    }
    if (sum != total_) throw InvariantError("total weight drift");
    if (minus != minus_) throw InvariantError("minus count drift");
}

ErosionRecord run_erosion(Engine& engine, double time_cap, const FlipObserver& observer) {
    ErosionRecord rec;
    Flip f;
    for (;;) {
        if (engine.mobile_minus() == 0) {
            rec.outcome = Outcome::eroded;
            break;
        }
        if (!engine.propose(f)) {
            rec.outcome = Outcome::stuck;
            break;
        }
        if (f.time > time_cap) {
            rec.outcome = Outcome::timed_out;
            break;
        }
        engine.apply(f);
        if (observer) observer(engine, f);
    }
    rec.time = rec.outcome == Outcome::timed_out ? time_cap : engine.time();
    rec.flips = engine.flips();
    return rec;
}

namespace {

void require_stable(const UpdateFamily& family, const Direction& u) {
    if (!is_stable(family, u)) {
        std::ostringstream os;
        os << "direction " << u << " is not stable for " << family.name();
        throw ValidationError(os.str());
    }
}

}  // namespace

ErosionRecord segment_erosion(const UpdateFamily& family, const Direction& y, std::int64_t L, DynamicsKind kind,
                              std::uint64_t seed, double time_cap, const FlipObserver& observer) {
    require_stable(family, y);
    Engine engine(family, kind, segment_system(y, L), seed);
    auto rec = run_erosion(engine, time_cap, observer);
    rec.L = L;
    rec.seed = seed;
    return rec;
}

ErosionRecord droplet_erosion(const UpdateFamily& family, const Droplet& droplet, DynamicsKind kind,
                              std::uint64_t seed, double time_cap) {
    for (const auto& u : droplet.directions()) require_stable(family, u);
    Engine engine(family, kind, droplet_system(droplet), seed);
    auto rec = run_erosion(engine, time_cap);
    rec.L = static_cast<std::int64_t>(std::llround(droplet.diameter()));
    rec.seed = seed;
    return rec;
}

ErosionRecord row_coupled_erosion(const UpdateFamily& family, const Droplet& droplet, const Direction& y,
                                  DynamicsKind kind, std::uint64_t seed, double time_cap) {
    for (const auto& u : droplet.directions()) require_stable(family, u);
    require_stable(family, y);
    auto sys = droplet_system(droplet);
    const auto dom = sys.config.domain;
    // Lines of the droplet by decreasing <x,y>.
    std::vector<std::pair<std::int64_t, std::size_t>> by_level;
    for (std::size_t i = 0; i < dom.size(); ++i)
        if (sys.mobile[i]) by_level.push_back({-dot(dom.site(i), y.vec()), i});
    std::sort(by_level.begin(), by_level.end());

    Engine engine(family, kind, std::move(sys), seed);
    ErosionRecord rec;
    rec.outcome = Outcome::eroded;
    for (std::size_t begin = 0; begin < by_level.size();) {
        std::size_t end = begin;
        while (end < by_level.size() && by_level[end].first == by_level[begin].first) ++end;
        engine.set_all_active(false);
        for (auto k = begin; k < end; ++k) engine.set_active(by_level[k].second, true);
        const double start = engine.time();
        std::size_t remaining = 0;
        for (auto k = begin; k < end; ++k) remaining += engine.config().spins[by_level[k].second] < 0 ? 1 : 0;
        Flip f;
        while (remaining > 0) {
            if (!engine.propose(f)) {
                rec.outcome = Outcome::stuck;
                break;
            }
            if (f.time > time_cap) {
                rec.outcome = Outcome::timed_out;
                break;
            }
            engine.apply(f);
            remaining = f.new_state < 0 ? remaining + 1 : remaining - 1;
        }
        rec.stage_times.push_back((rec.outcome == Outcome::timed_out ? time_cap : engine.time()) - start);
        if (rec.outcome != Outcome::eroded) break;
        begin = end;
    }
    rec.time = rec.outcome == Outcome::timed_out ? time_cap : engine.time();
    rec.flips = engine.flips();
    rec.L = static_cast<std::int64_t>(std::llround(droplet.diameter()));
    rec.seed = seed;
    return rec;
}

FixationResult fixation_experiment(const UpdateFamily& family, std::int64_t n, double p, DynamicsKind kind,
                                   double t_max, double sample_interval, std::uint64_t seed) {
    if (!(p >= 0 && p <= 1)) throw ValidationError("p must lie in [0,1]");
    if (!(sample_interval > 0)) throw ValidationError("sample interval must be positive");
    if (!(t_max >= 0)) throw ValidationError("t_max must be non-negative");
    Rng init(derive_seed(seed, 0));
    Engine engine(family, kind, torus_system(n, p, init), derive_seed(seed, 1));
    const auto N = static_cast<double>(engine.mobile_count());
    const auto origin = engine.config().domain.index({0, 0});
    FixationResult res;
    auto sample = [&](double t) {
        res.samples.push_back({t, static_cast<double>(engine.mobile_minus()) / N, engine.config().spins[origin]});
    };
    auto absorbed = [&] {
        if (engine.mobile_minus() == 0) return 1;
        if (engine.mobile_minus() == engine.mobile_count()) return -1;
        return 0;
    };
    double next_sample = 0;
    Flip f;
    for (;;) {
        if ((res.absorbed = absorbed()) != 0) {
            res.absorption_time = engine.time();
            sample(engine.time());
            break;
        }
        const bool moved = engine.propose(f);
        const double until = moved ? std::min(f.time, t_max) : t_max;
        for (; next_sample <= until; next_sample += sample_interval) sample(next_sample);
        if (!moved || f.time > t_max) break;
        engine.apply(f);
    }
    res.flips = engine.flips();
    return res;
}

}  // namespace ufix
