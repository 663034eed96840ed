#include "ufix/lattice.hpp"

#include <cstdlib>
#include <sstream>

namespace ufix {

Direction::Direction(LatticeVector v) {
    if (v.is_zero()) throw ValidationError("direction (0,0) is not a point of the circle");
    const std::int64_t g = std::gcd(std::llabs(v.x), std::llabs(v.y));
    v_ = {v.x / g, v.y / g};
}

namespace {
int relative_half(const Direction& from, const Direction& d) {
    const auto c = cross(from.vec(), d.vec());
    if (c > 0 || (c == 0 && dot(from.vec(), d.vec()) > 0)) return 0;
    return 1;
}
}  // namespace

bool ccw_less_from(const Direction& from, const Direction& a, const Direction& b) {
    if (a == b) return false;
    if (a == from) return true;
    if (b == from) return false;
    const int ha = relative_half(from, a);
    const int hb = relative_half(from, b);
    if (ha != hb) return ha < hb;
    return cross(a.vec(), b.vec()) > 0;
}

bool strictly_between(const Direction& start, const Direction& end, const Direction& d) {
    if (d == start || d == end) return false;
    if (start == end) return true;
    return ccw_less_from(start, d, end);
}

bool gap_at_least_pi(const Direction& a, const Direction& b) {
    if (a == b) return true;
    const auto c = cross(a.vec(), b.vec());
    return c < 0 || (c == 0 && dot(a.vec(), b.vec()) < 0);
}

Domain Domain::box(std::int64_t width, std::int64_t height, Boundary b, std::int64_t x0, std::int64_t y0) {
    if (width < 1 || height < 1) throw ValidationError("box dimensions must be >= 1");
    if (b == Boundary::half_plane) throw ValidationError("use half_plane_box for half-plane boundaries");
    Domain d;
    d.shape = Shape::box;
    d.width = width;
    d.height = height;
    d.x0 = x0;
    d.y0 = y0;
    d.boundary = b;
    return d;
}

Domain Domain::torus(std::int64_t n) {
    if (n < 1) throw ValidationError("torus side must be >= 1");
    Domain d;
    d.shape = Shape::torus;
    d.width = d.height = n;
    return d;
}

Domain Domain::half_plane_box(std::int64_t x0, std::int64_t y0, std::int64_t width, std::int64_t height,
                              Direction normal, int inside, int outside) {
    Domain d = box(width, height, Boundary::free, x0, y0);
    d.boundary = Boundary::half_plane;
    d.normal = normal;
    d.inside_state = inside;
    d.outside_state = outside;
    return d;
}

bool Domain::contains(const LatticeVector& p) const {
    if (is_torus()) return true;
    return p.x >= x0 && p.x < x0 + width && p.y >= y0 && p.y < y0 + height;
}

namespace {
std::int64_t wrap(std::int64_t v, std::int64_t n) {
    const auto r = v % n;
    return r < 0 ? r + n : r;
}
}  // namespace

std::size_t Domain::index(const LatticeVector& p) const {
    if (is_torus()) return static_cast<std::size_t>(wrap(p.y, height) * width + wrap(p.x, width));
    if (!contains(p)) {
        std::ostringstream os;
        os << "site " << p << " outside domain";
        throw ValidationError(os.str());
    }
    return static_cast<std::size_t>((p.y - y0) * width + (p.x - x0));
}

std::optional<std::size_t> Domain::try_index(const LatticeVector& p) const {
    if (!contains(p)) return std::nullopt;
    return index(p);
}

LatticeVector Domain::site(std::size_t idx) const {
    const auto i = static_cast<std::int64_t>(idx);
    return {x0 + i % width, y0 + i / width};
}

std::optional<int> Domain::exterior_state(const LatticeVector& p) const {
    switch (boundary) {
        case Boundary::free: return std::nullopt;
        case Boundary::frozen_plus: return +1;
        case Boundary::frozen_minus: return -1;
        case Boundary::half_plane: return dot(p, normal.vec()) < 0 ? inside_state : outside_state;
    }
    return std::nullopt;
}

SiteSet::SiteSet(const Domain& d, const std::vector<LatticeVector>& pts) : SiteSet(d) {
    for (const auto& p : pts) insert(p);
}

bool SiteSet::contains(const LatticeVector& p) const {
    const auto idx = domain_.try_index(p);
    return idx && bits_[*idx] != 0;
}

bool SiteSet::insert(const LatticeVector& p) {
    const auto idx = domain_.index(p);
    if (bits_[idx]) return false;
    bits_[idx] = 1;
    return true;
}

std::size_t SiteSet::count() const {
    std::size_t n = 0;
    for (auto b : bits_) n += b;
    return n;
}

std::vector<LatticeVector> SiteSet::points() const {
    std::vector<LatticeVector> out;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) out.push_back(domain_.site(i));
    return out;
}

bool SiteSet::subset_of(const SiteSet& o) const {
    if (o.bits_.size() != bits_.size()) return false;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] && !o.bits_[i]) return false;
    return true;
}

}  // namespace ufix
