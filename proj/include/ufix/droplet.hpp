#pragma once

#include <cstdint>
#include <vector>

#include "ufix/lattice.hpp"

namespace ufix {

/// D = {x : <x,u> < b_u for all u in T} over Z^2.
///
/// Thresholds are kept tight: b_u = 1 + max over D of <x,u>. Two droplets on
/// the same direction set are then equal as sets iff their thresholds are
/// equal, and D' is a subset of D iff b'_u <= b_u for every u. Only finite
/// droplets (0 in the interior of Hull(T)) can be constructed.
class Droplet {
public:
    struct Row {
        std::int64_t y;
        std::int64_t xl;
        std::int64_t xr;  // inclusive
    };

    Droplet(std::vector<Direction> directions, std::vector<std::int64_t> thresholds);

    const std::vector<Direction>& directions() const { return dirs_; }
    const std::vector<std::int64_t>& thresholds() const { return b_; }
    const std::vector<Row>& rows() const { return rows_; }

    bool contains(const LatticeVector& p) const;
    bool subset_of(const Droplet& o) const;
    std::size_t size() const;
    double diameter() const { return diameter_; }
    Droplet translated(const LatticeVector& v) const;
    std::vector<LatticeVector> points() const;
    std::int64_t min_x() const { return min_x_; }
    std::int64_t max_x() const { return max_x_; }
    std::int64_t min_y() const { return rows_.front().y; }
    std::int64_t max_y() const { return rows_.back().y; }

    friend bool operator==(const Droplet& a, const Droplet& b) { return a.dirs_ == b.dirs_ && a.b_ == b.b_; }

private:
    std::vector<Direction> dirs_;
    std::vector<std::int64_t> b_;
    std::vector<Row> rows_;
    std::int64_t min_x_ = 0;
    std::int64_t max_x_ = 0;
    double diameter_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Droplet& d);

// Sorted, deduplicated copy; throws unless 0 lies in the interior of the hull.
std::vector<Direction> droplet_directions(std::vector<Direction> dirs);

Droplet smallest_droplet(const std::vector<Direction>& directions, const std::vector<LatticeVector>& points);
Droplet smallest_droplet(const std::vector<Direction>& directions, const SiteSet& points);
Droplet merge(const Droplet& a, const Droplet& b);
double diameter(const Droplet& d);
// Minimum Euclidean distance between the lattice point sets.
double distance(const Droplet& a, const Droplet& b);
std::size_t count_inside(const Droplet& d, const std::vector<LatticeVector>& points);

/// Smallest droplet of the form b_u = 1 + floor(s*|u|) with diameter >= kappa,
/// centred at the origin.
Droplet droplet_hat(const std::vector<Direction>& directions, double kappa);

}  // namespace ufix
