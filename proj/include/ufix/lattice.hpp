#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ufix {

// Thrown when an input violates an operation's precondition. The CLI maps it
// to exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when a maintained invariant is found broken at runtime (exit code 3).
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct LatticeVector {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend constexpr bool operator==(const LatticeVector&, const LatticeVector&) = default;
    friend constexpr auto operator<=>(const LatticeVector&, const LatticeVector&) = default;

    constexpr LatticeVector operator+(const LatticeVector& o) const { return {x + o.x, y + o.y}; }
    constexpr LatticeVector operator-(const LatticeVector& o) const { return {x - o.x, y - o.y}; }
    constexpr LatticeVector operator-() const { return {-x, -y}; }
    constexpr LatticeVector operator*(std::int64_t k) const { return {k * x, k * y}; }
    constexpr bool is_zero() const { return x == 0 && y == 0; }
};

inline std::ostream& operator<<(std::ostream& os, const LatticeVector& v) {
    return os << '(' << v.x << ',' << v.y << ')';
}

constexpr std::int64_t dot(const LatticeVector& a, const LatticeVector& b) { return a.x * b.x + a.y * b.y; }
constexpr std::int64_t cross(const LatticeVector& a, const LatticeVector& b) { return a.x * b.y - a.y * b.x; }
constexpr std::int64_t max_norm(const LatticeVector& v) {
    return std::max(v.x < 0 ? -v.x : v.x, v.y < 0 ? -v.y : v.y);
}
// Counterclockwise quarter turn.
constexpr LatticeVector rot90(const LatticeVector& v) { return {-v.y, v.x}; }
constexpr LatticeVector rot270(const LatticeVector& v) { return {v.y, -v.x}; }

/// A rational point of the unit circle, stored as a primitive integer vector.
///
/// Ordering is the exact counterclockwise angle measured from (1,0): first the
/// half-plane index, then the sign of the cross product. No floating point.
class Direction {
public:
    Direction() : v_{1, 0} {}
    // Reduces to primitive form; rejects (0,0).
    explicit Direction(LatticeVector v);
    Direction(std::int64_t x, std::int64_t y) : Direction(LatticeVector{x, y}) {}

    const LatticeVector& vec() const { return v_; }
    std::int64_t x() const { return v_.x; }
    std::int64_t y() const { return v_.y; }

    Direction opposite() const { return Direction(-v_); }
    // The counterclockwise primitive perpendicular.
    Direction perp() const { return Direction(rot90(v_)); }

    // 0 for angles in [0, pi), 1 for [pi, 2pi).
    int half() const { return (v_.y > 0 || (v_.y == 0 && v_.x > 0)) ? 0 : 1; }

    friend bool operator==(const Direction& a, const Direction& b) { return a.v_ == b.v_; }
    friend bool operator<(const Direction& a, const Direction& b) {
        if (a.half() != b.half()) return a.half() < b.half();
        return cross(a.v_, b.v_) > 0;
    }

private:
    LatticeVector v_;
};

inline std::ostream& operator<<(std::ostream& os, const Direction& d) { return os << d.vec(); }

// Compares a and b by counterclockwise angle measured from `from`; `from`
// itself has angle zero.
bool ccw_less_from(const Direction& from, const Direction& a, const Direction& b);
// True iff d lies on the open counterclockwise arc from `start` to `end`.
// When start == end the open arc is the whole circle minus that point.
bool strictly_between(const Direction& start, const Direction& end, const Direction& d);
// Counterclockwise angle from a to b is >= pi (a == b counts as 2*pi).
bool gap_at_least_pi(const Direction& a, const Direction& b);

// Sites are addressed by absolute lattice coordinates. A box covers
// [x0, x0+width) x [y0, y0+height); a torus covers [0,n)^2 with wrap-around.
struct Domain {
    enum class Shape { box, torus };
    enum class Boundary { free, frozen_plus, frozen_minus, half_plane };

    Shape shape = Shape::box;
    std::int64_t x0 = 0;
    std::int64_t y0 = 0;
    std::int64_t width = 1;
    std::int64_t height = 1;
    Boundary boundary = Boundary::free;
    // half_plane boundary: sites x outside the box with <x, normal> < 0 take
    // `inside_state`, the rest take `outside_state` (+1 or -1).
    Direction normal{};
    int inside_state = -1;
    int outside_state = +1;

    static Domain box(std::int64_t width, std::int64_t height, Boundary b = Boundary::free,
                      std::int64_t x0 = 0, std::int64_t y0 = 0);
    static Domain torus(std::int64_t n);
    static Domain half_plane_box(std::int64_t x0, std::int64_t y0, std::int64_t width,
                                 std::int64_t height, Direction normal, int inside, int outside);

    std::size_t size() const { return static_cast<std::size_t>(width * height); }
    bool is_torus() const { return shape == Shape::torus; }
    bool contains(const LatticeVector& p) const;
    // Index of an interior site; on a torus any point is wrapped first.
    std::size_t index(const LatticeVector& p) const;
    std::optional<std::size_t> try_index(const LatticeVector& p) const;
    LatticeVector site(std::size_t idx) const;
    // Exterior spin per the boundary specification; nullopt for a free boundary.
    std::optional<int> exterior_state(const LatticeVector& p) const;
};

/// Dense subset of a domain's sites.
class SiteSet {
public:
    SiteSet() = default;
    explicit SiteSet(const Domain& d) : domain_(d), bits_(d.size(), 0) {}
    SiteSet(const Domain& d, const std::vector<LatticeVector>& pts);

    const Domain& domain() const { return domain_; }
    bool contains(const LatticeVector& p) const;
    bool test(std::size_t idx) const { return bits_[idx] != 0; }
    // Returns false if p is already a member. Throws if p is outside the domain.
    bool insert(const LatticeVector& p);
    void set(std::size_t idx) { bits_[idx] = 1; }
    std::size_t count() const;
    bool full() const { return count() == bits_.size(); }
    std::vector<LatticeVector> points() const;
    bool subset_of(const SiteSet& o) const;

    friend bool operator==(const SiteSet& a, const SiteSet& b) { return a.bits_ == b.bits_; }

private:
    Domain domain_{};
    std::vector<std::uint8_t> bits_;
};

}  // namespace ufix
