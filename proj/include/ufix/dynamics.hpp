#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ufix/droplet.hpp"
#include "ufix/family.hpp"
#include "ufix/rng.hpp"

namespace ufix {

enum class DynamicsKind { voter, ising };

std::string to_string(DynamicsKind k);
DynamicsKind parse_kind(const std::string& s);

/// One spin (+1 or -1) per site of a box or torus. Sites outside a box
/// resolve through the domain's boundary; a free boundary leaves them absent.
struct SpinConfiguration {
    Domain domain;
    std::vector<std::int8_t> spins;

    SpinConfiguration() = default;
    SpinConfiguration(const Domain& d, int fill) : domain(d), spins(d.size(), static_cast<std::int8_t>(fill)) {}

    // 0 for an absent site.
    int state(const LatticeVector& p) const;
    int at(const LatticeVector& p) const { return spins[domain.index(p)]; }
    void set(const LatticeVector& p, int s) { spins[domain.index(p)] = static_cast<std::int8_t>(s); }
    SpinConfiguration complemented() const;
};

/// Number of rules X with v+X entirely opposite to the spin at v.
int disagreement_count(const SpinConfiguration& config, const UpdateFamily& family, const LatticeVector& v);

/// A configuration plus the set of sites allowed to move. Other sites keep
/// their state for the whole run.
struct SpinSystem {
    SpinConfiguration config;
    std::vector<std::uint8_t> mobile;  // per domain site
};

// Segment Y = {k*perp(y) : 0 <= k < L} on the line <x,y> = 0, starting all
// minus; {<x,y> < 0} is frozen minus and everything else frozen plus.
SpinSystem segment_system(const Direction& y, std::int64_t L);
std::vector<LatticeVector> segment_sites(const Direction& y, std::int64_t L);
// Droplet all minus in a frozen-plus world.
SpinSystem droplet_system(const Droplet& d);
// Torus with every site independently + with probability p (uniform < p).
SpinSystem torus_system(std::int64_t n, double p, Rng& rng);

struct Flip {
    std::size_t site;  // domain index
    int new_state;
    double time;
};

/// Rejection-free continuous-time dynamics.
///
/// Each mobile site v carries r_v, kept up to date from per-(site, rule) plus
/// counts. Selection weights are integers in a Fenwick tree: r_v for voter
/// (total rate W/m) and [r_v >= 1] for Ising (total rate W). Sites can be
/// deactivated without losing their counts.
class Engine {
public:
    Engine(const UpdateFamily& family, DynamicsKind kind, SpinSystem system, std::uint64_t seed);

    double time() const { return time_; }
    std::uint64_t flips() const { return flips_; }
    std::uint64_t weight_total() const;
    double total_rate() const;
    const SpinConfiguration& config() const { return sys_.config; }
    std::size_t mobile_count() const { return mobile_.size(); }
    std::size_t mobile_minus() const { return minus_; }
    int rate_count(std::size_t site) const;
    Rng& rng() { return rng_; }

    // Draws the next event without applying it; false when the total rate is 0.
    bool propose(Flip& out);
    void apply(const Flip& f);
    // propose + apply.
    bool step(Flip* out = nullptr);

    void set_active(std::size_t site, bool on);
    void set_all_active(bool on);

    // Recomputes every r_v through disagreement_count; throws InvariantError
    // on mismatch.
    void check_consistency() const;

private:
    std::uint64_t weight(std::uint32_t id) const;
    void recompute(std::uint32_t id);
    void fenwick_add(std::uint32_t id, std::int64_t delta);
    std::uint32_t fenwick_find(std::uint64_t target) const;

    UpdateFamily family_;
    DynamicsKind kind_;
    SpinSystem sys_;
    Rng rng_;
    double time_ = 0;
    std::uint64_t flips_ = 0;
    std::size_t minus_ = 0;

    std::size_t m_;
    std::vector<std::uint16_t> rule_size_;
    std::vector<std::size_t> mobile_;        // id -> domain index
    std::vector<std::int32_t> id_of_;        // domain index -> id or -1
    std::vector<std::uint16_t> plus_;        // id*m + r
    std::vector<std::uint8_t> absent_;       // id*m + r
    std::vector<std::uint32_t> rev_start_;   // CSR over ids
    std::vector<std::uint32_t> rev_pairs_;
    std::vector<std::uint16_t> r_;
    std::vector<std::uint8_t> active_;
    std::vector<std::uint64_t> current_w_;
    std::vector<std::uint64_t> tree_;
    std::uint64_t total_ = 0;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    std::vector<std::uint32_t> dirty_;
};

enum class Outcome { eroded, timed_out, stuck };
std::string to_string(Outcome o);

struct ErosionRecord {
    std::int64_t L = 0;
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    double time = 0;
    std::uint64_t flips = 0;
    Outcome outcome = Outcome::stuck;
    // rows mode only: time spent on each line, top line first.
    std::vector<double> stage_times;
};

constexpr double kNoCap = std::numeric_limits<double>::infinity();

// Called after every applied flip.
using FlipObserver = std::function<void(const Engine&, const Flip&)>;

// Runs until no mobile site is minus, the rate vanishes, or the cap is hit.
ErosionRecord run_erosion(Engine& engine, double time_cap, const FlipObserver& observer = {});

ErosionRecord segment_erosion(const UpdateFamily& family, const Direction& y, std::int64_t L, DynamicsKind kind,
                              std::uint64_t seed, double time_cap = kNoCap, const FlipObserver& observer = {});
ErosionRecord droplet_erosion(const UpdateFamily& family, const Droplet& droplet, DynamicsKind kind,
                              std::uint64_t seed, double time_cap = kNoCap);
/// Line-by-line erosion: only the sites of the highest line <x,y> = c still
/// holding a minus may flip.
ErosionRecord row_coupled_erosion(const UpdateFamily& family, const Droplet& droplet, const Direction& y,
                                  DynamicsKind kind, std::uint64_t seed, double time_cap = kNoCap);

struct FixationSample {
    double t;
    double minus_density;
    int origin_state;
};

struct FixationResult {
    std::vector<FixationSample> samples;
    // +1 all plus, -1 all minus, 0 not absorbed by t_max.
    int absorbed = 0;
    double absorption_time = 0;
    std::uint64_t flips = 0;
};

FixationResult fixation_experiment(const UpdateFamily& family, std::int64_t n, double p, DynamicsKind kind,
                                   double t_max, double sample_interval, std::uint64_t seed);

}  // namespace ufix
