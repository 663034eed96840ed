#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ufix/family.hpp"

namespace ufix {

/// A counterclockwise arc of the circle from `start` to `end`.
struct Arc {
    enum class Kind { open, closed, point };

    Direction start;
    Direction end;
    Kind kind = Kind::closed;

    static Arc point(Direction d) { return {d, d, Kind::point}; }
    bool is_point() const { return kind == Kind::point; }
    bool contains(const Direction& d) const;

    friend bool operator==(const Arc&, const Arc&) = default;
};

std::ostream& operator<<(std::ostream& os, const Arc& a);
std::string to_string(Arc::Kind k);

/// The set of stable directions: disjoint maximal closed arcs in circular
/// order, or the whole circle.
class StableSet {
public:
    StableSet() = default;
    static StableSet whole_circle();
    explicit StableSet(std::vector<Arc> arcs);

    bool is_whole_circle() const { return whole_; }
    bool empty() const { return !whole_ && arcs_.empty(); }
    const std::vector<Arc>& arcs() const { return arcs_; }
    bool contains(const Direction& d) const;
    // True if S is a finite set of points.
    bool is_finite() const;
    // Every arc endpoint, in circular order.
    std::vector<Direction> endpoints() const;

    friend bool operator==(const StableSet&, const StableSet&) = default;

private:
    std::vector<Arc> arcs_;
    bool whole_ = false;
};

std::ostream& operator<<(std::ostream& os, const StableSet& s);

enum class Classification { supercritical, critical, subcritical };
std::string to_string(Classification c);

/// Open arc of directions u with <x,u> < 0 for every offset x of the rule, or
/// nullopt when the rule fits in no open half-plane.
std::optional<Arc> unstable_arc(const Rule& rule);

StableSet stable_set(const UpdateFamily& family);

// Direct combinatorial test: no rule lies inside H_u.
bool is_stable(const UpdateFamily& family, const Direction& u);

Classification classify(const UpdateFamily& family);
Classification classify(const StableSet& s);

/// 3 or 4 stable directions containing y whose hull has the origin in its
/// interior. Throws ValidationError if y is unstable or no such set exists.
std::vector<Direction> choose_s4(const UpdateFamily& family, const Direction& y);

// Origin strictly inside the convex hull of the given vectors.
bool origin_in_hull_interior(const std::vector<Direction>& dirs);
// Origin in the closed convex hull.
bool origin_in_hull(const std::vector<Direction>& dirs);

}  // namespace ufix
