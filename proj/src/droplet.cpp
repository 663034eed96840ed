#include "ufix/droplet.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "ufix/stable_set.hpp"

namespace ufix {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// Lattice rows of {x : <x,u> <= b_u - 1}. The y-range is bounded using the
// vertices of the relaxed polygon; each row is then cut exactly.
std::vector<Droplet::Row> lattice_rows(const std::vector<Direction>& dirs, const std::vector<std::int64_t>& b) {
    double ylo = std::numeric_limits<double>::infinity();
    double yhi = -ylo;
    const std::size_t n = dirs.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& u = dirs[i].vec();
            const auto& v = dirs[j].vec();
            const double det = static_cast<double>(cross(u, v));
            if (det == 0) continue;
            const double ci = static_cast<double>(b[i] - 1), cj = static_cast<double>(b[j] - 1);
            const double px = (ci * static_cast<double>(v.y) - cj * static_cast<double>(u.y)) / det;
            const double py = (static_cast<double>(u.x) * cj - static_cast<double>(v.x) * ci) / det;
            bool feasible = true;
            for (std::size_t k = 0; k < n && feasible; ++k) {
                const auto& w = dirs[k].vec();
                const double lhs = px * static_cast<double>(w.x) + py * static_cast<double>(w.y);
                feasible = lhs <= static_cast<double>(b[k] - 1) + 1e-6 * (1 + std::abs(lhs));
            }
            if (feasible) {
                ylo = std::min(ylo, py);
                yhi = std::max(yhi, py);
            }
        }
    std::vector<Droplet::Row> rows;
    if (!(ylo <= yhi)) return rows;
    const auto y0 = static_cast<std::int64_t>(std::floor(ylo)) - 1;
    const auto y1 = static_cast<std::int64_t>(std::ceil(yhi)) + 1;
    for (std::int64_t y = y0; y <= y1; ++y) {
        std::int64_t lo = std::numeric_limits<std::int64_t>::min();
        std::int64_t hi = std::numeric_limits<std::int64_t>::max();
        bool ok = true;
        for (std::size_t k = 0; k < n && ok; ++k) {
            const auto& u = dirs[k].vec();
            const std::int64_t c = b[k] - 1 - u.y * y;
            if (u.x > 0)
                hi = std::min(hi, floor_div(c, u.x));
            else if (u.x < 0)
                lo = std::max(lo, ceil_div(c, u.x));
            else
                ok = c >= 0;
        }
        if (ok && lo <= hi) rows.push_back({y, lo, hi});
    }
    return rows;
}

double hull_diameter(const std::vector<Droplet::Row>& rows) {
    std::vector<LatticeVector> pts;
    for (const auto& r : rows) {
        pts.push_back({r.xl, r.y});
        if (r.xr != r.xl) pts.push_back({r.xr, r.y});
    }
    // Monotone chain hull; rows are already sorted by y.
    std::sort(pts.begin(), pts.end());
    std::vector<LatticeVector> h;
    if (pts.size() > 2) {
        h.resize(2 * pts.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
            h[k++] = pts[i];
        }
        for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
            while (k >= t && cross(h[k - 1] - h[k - 2], pts[i - 1] - h[k - 2]) <= 0) --k;
            h[k++] = pts[i - 1];
        }
        h.resize(k - 1);
    } else {
        h = pts;
    }
    std::int64_t best = 0;
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = i + 1; j < h.size(); ++j) {
            const auto d = h[i] - h[j];
            best = std::max(best, dot(d, d));
        }
    return std::sqrt(static_cast<double>(best));
}

}  // namespace

std::vector<Direction> droplet_directions(std::vector<Direction> dirs) {
    std::sort(dirs.begin(), dirs.end());
    dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
    if (dirs.empty()) throw ValidationError("droplet direction set is empty");
    if (!origin_in_hull_interior(dirs))
        throw ValidationError("droplet would be infinite: origin is not interior to the direction hull");
    return dirs;
}

Droplet::Droplet(std::vector<Direction> directions, std::vector<std::int64_t> thresholds) {
    if (directions.size() != thresholds.size()) throw ValidationError("one threshold per direction required");
    std::vector<std::size_t> order(directions.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return directions[i] < directions[j]; });
    for (auto i : order) {
        if (!dirs_.empty() && dirs_.back() == directions[i]) {
            b_.back() = std::min(b_.back(), thresholds[i]);
        } else {
            dirs_.push_back(directions[i]);
            b_.push_back(thresholds[i]);
        }
    }
    dirs_ = droplet_directions(dirs_);
    rows_ = lattice_rows(dirs_, b_);
    if (rows_.empty()) throw ValidationError("droplet is empty");
    // Tighten.
    for (std::size_t k = 0; k < dirs_.size(); ++k) {
        std::int64_t m = std::numeric_limits<std::int64_t>::min();
        for (const auto& r : rows_)
            m = std::max({m, dot({r.xl, r.y}, dirs_[k].vec()), dot({r.xr, r.y}, dirs_[k].vec())});
        b_[k] = m + 1;
    }
    min_x_ = rows_.front().xl;
    max_x_ = rows_.front().xr;
    for (const auto& r : rows_) {
        min_x_ = std::min(min_x_, r.xl);
        max_x_ = std::max(max_x_, r.xr);
    }
    diameter_ = hull_diameter(rows_);
}

bool Droplet::contains(const LatticeVector& p) const {
    for (std::size_t k = 0; k < dirs_.size(); ++k)
        if (dot(p, dirs_[k].vec()) >= b_[k]) return false;
    return true;
}

bool Droplet::subset_of(const Droplet& o) const {
    if (dirs_ != o.dirs_) throw ValidationError("droplets have different direction sets");
    for (std::size_t k = 0; k < b_.size(); ++k)
        if (b_[k] > o.b_[k]) return false;
    return true;
}

std::size_t Droplet::size() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += static_cast<std::size_t>(r.xr - r.xl + 1);
    return n;
}

Droplet Droplet::translated(const LatticeVector& v) const {
    auto b = b_;
    for (std::size_t k = 0; k < b.size(); ++k) b[k] += dot(v, dirs_[k].vec());
    return Droplet(dirs_, std::move(b));
}

std::vector<LatticeVector> Droplet::points() const {
    std::vector<LatticeVector> out;
    for (const auto& r : rows_)
        for (auto x = r.xl; x <= r.xr; ++x) out.push_back({x, r.y});
    return out;
}

std::ostream& operator<<(std::ostream& os, const Droplet& d) {
    os << "droplet{";
    for (std::size_t k = 0; k < d.directions().size(); ++k)
        os << (k ? ", " : "") << d.directions()[k] << "<" << d.thresholds()[k];
    return os << '}';
}

Droplet smallest_droplet(const std::vector<Direction>& directions, const std::vector<LatticeVector>& points) {
    if (points.empty()) throw ValidationError("smallest_droplet needs at least one point");
    const auto dirs = droplet_directions(directions);
    std::vector<std::int64_t> b(dirs.size(), std::numeric_limits<std::int64_t>::min());
    for (const auto& p : points)
        for (std::size_t k = 0; k < dirs.size(); ++k) b[k] = std::max(b[k], dot(p, dirs[k].vec()) + 1);
    return Droplet(dirs, std::move(b));
}

Droplet smallest_droplet(const std::vector<Direction>& directions, const SiteSet& points) {
    return smallest_droplet(directions, points.points());
}

Droplet merge(const Droplet& a, const Droplet& b) {
    if (a.directions() != b.directions()) throw ValidationError("merge: direction sets differ");
    auto t = a.thresholds();
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = std::max(t[k], b.thresholds()[k]);
    return Droplet(a.directions(), std::move(t));
}

double diameter(const Droplet& d) { return d.diameter(); }

double distance(const Droplet& a, const Droplet& b) {
    auto gap = [](std::int64_t lo1, std::int64_t hi1, std::int64_t lo2, std::int64_t hi2) {
        return std::max<std::int64_t>({0, lo2 - hi1, lo1 - hi2});
    };
    const auto& ra = a.rows();
    const auto& rb = b.rows();
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (const auto& r : ra) {
        // Rows of b sorted by y; a row further than sqrt(best) in y cannot help.
        for (const auto& s : rb) {
            const auto dy = s.y - r.y;
            if (dy * dy >= best) {
                if (s.y > r.y) break;
                continue;
            }
            const auto dx = gap(r.xl, r.xr, s.xl, s.xr);
            best = std::min(best, dx * dx + dy * dy);
            if (best == 0) return 0.0;
        }
    }
    return std::sqrt(static_cast<double>(best));
}

std::size_t count_inside(const Droplet& d, const std::vector<LatticeVector>& points) {
    std::size_t n = 0;
    for (const auto& p : points) n += d.contains(p) ? 1 : 0;
    return n;
}

Droplet droplet_hat(const std::vector<Direction>& directions, double kappa) {
    const auto dirs = droplet_directions(directions);
    auto at = [&](double s) {
        std::vector<std::int64_t> b;
        for (const auto& u : dirs) {
            const double len = std::hypot(static_cast<double>(u.x()), static_cast<double>(u.y()));
            b.push_back(1 + static_cast<std::int64_t>(std::floor(s * len + 1e-12)));
        }
        return Droplet(dirs, std::move(b));
    };
    if (kappa <= 0) return at(0);
    // Breakpoints of floor(s|u|); the droplet is monotone in s.
    std::vector<double> cuts{0.0};
    for (const auto& u : dirs) {
        const double len = std::hypot(static_cast<double>(u.x()), static_cast<double>(u.y()));
        const auto jmax = static_cast<std::int64_t>(std::ceil(kappa * len)) + 2;
        for (std::int64_t j = 1; j <= jmax; ++j) cuts.push_back(static_cast<double>(j) / len);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::size_t lo = 0, hi = cuts.size() - 1;
    if (at(cuts[hi]).diameter() < kappa) throw InvariantError("droplet_hat: breakpoint range too small");
    while (lo < hi) {
        const auto mid = (lo + hi) / 2;
        if (at(cuts[mid]).diameter() >= kappa)
            hi = mid;
        else
            lo = mid + 1;
    }
    return at(cuts[lo]);
}

}  // namespace ufix
