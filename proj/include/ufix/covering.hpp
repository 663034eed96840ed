#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ufix/droplet.hpp"

namespace ufix {

struct HistoryEntry {
    Droplet droplet;
    // Creation indices of the merged parents; unset for initial copies.
    std::optional<std::size_t> left;
    std::optional<std::size_t> right;
};

/// Outcome of the covering algorithm. `history[i]` is the droplet with creation
/// index i; `active` lists the creation indices of the final droplets.
struct DropletCollection {
    std::vector<Direction> directions;
    double kappa = 0;
    std::vector<LatticeVector> seeds;
    std::vector<HistoryEntry> history;
    std::vector<std::size_t> active;

    std::vector<Droplet> droplets() const;
    std::size_t merges() const { return history.size() - seeds.size(); }
};

/// Places a copy of the kappa-diameter droplet on every seed, then repeatedly
/// merges the lexicographically first pair (by creation index) at distance
/// <= kappa until all final droplets are more than kappa apart.
DropletCollection covering_algorithm(const std::vector<Direction>& directions, double kappa,
                                     const std::vector<LatticeVector>& seeds);

bool is_covered(const DropletCollection& c, const Droplet& d);

// Default kappa: 10 * radius * |T|.
double default_kappa(std::int64_t radius, std::size_t direction_count);

struct CoveringViolation {
    std::size_t entry;
    std::int64_t k = 0;  // 0 for extremal violations
    std::string what;
};

// For each history droplet D and integer k in [k_min, diam(D)], some history
// droplet D' within D has k <= diam(D') <= 3k.
std::vector<CoveringViolation> aizenman_lebowitz_violations(const DropletCollection& c, std::int64_t k_min);
// |D cap seeds| >= eps * diam(D) for every history droplet.
std::vector<CoveringViolation> extremal_violations(const DropletCollection& c, double eps);
// Sites of `closed` not inside any final droplet.
std::vector<LatticeVector> uncovered_sites(const DropletCollection& c, const SiteSet& closed);

}  // namespace ufix
