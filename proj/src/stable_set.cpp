#include "ufix/stable_set.hpp"

#include <algorithm>
#include <ostream>

namespace ufix {

bool Arc::contains(const Direction& d) const {
    switch (kind) {
        case Kind::point: return d == start;
        case Kind::closed: return d == start || d == end || strictly_between(start, end, d);
        case Kind::open: return strictly_between(start, end, d);
    }
    return false;
}

std::string to_string(Arc::Kind k) {
    switch (k) {
        case Arc::Kind::open: return "open";
        case Arc::Kind::closed: return "closed";
        case Arc::Kind::point: return "point";
    }
    return "?";
}

std::ostream& operator<<(std::ostream& os, const Arc& a) {
    if (a.is_point()) return os << "point" << a.start;
    return os << to_string(a.kind) << a.start << "->" << a.end;
}

StableSet StableSet::whole_circle() {
    StableSet s;
    s.whole_ = true;
    return s;
}

StableSet::StableSet(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {
    std::sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) { return a.start < b.start; });
}

bool StableSet::contains(const Direction& d) const {
    if (whole_) return true;
    return std::any_of(arcs_.begin(), arcs_.end(), [&](const Arc& a) { return a.contains(d); });
}

bool StableSet::is_finite() const {
    if (whole_) return false;
    return std::all_of(arcs_.begin(), arcs_.end(), [](const Arc& a) { return a.is_point(); });
}

std::vector<Direction> StableSet::endpoints() const {
    std::vector<Direction> out;
    for (const auto& a : arcs_) {
        out.push_back(a.start);
        if (!a.is_point()) out.push_back(a.end);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::ostream& operator<<(std::ostream& os, const StableSet& s) {
    if (s.is_whole_circle()) return os << "S^1";
    os << '{';
    for (std::size_t i = 0; i < s.arcs().size(); ++i) os << (i ? ", " : "") << s.arcs()[i];
    return os << '}';
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::supercritical: return "supercritical";
        case Classification::critical: return "critical";
        case Classification::subcritical: return "subcritical";
    }
    return "?";
}

namespace {

std::vector<Direction> sorted_unique(std::vector<Direction> ds) {
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    return ds;
}

// Largest circular gap between consecutive sorted directions; index i means
// the gap from ds[i] to ds[i+1].
bool all_gaps_below_pi(const std::vector<Direction>& ds, bool allow_equal) {
    if (ds.size() < 2) return false;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& p = ds[i].vec();
        const auto& q = ds[(i + 1) % ds.size()].vec();
        const auto c = cross(p, q);
        if (c > 0) continue;
        if (allow_equal && c == 0 && dot(p, q) < 0) continue;
        return false;
    }
    return true;
}

}  // namespace

bool origin_in_hull_interior(const std::vector<Direction>& dirs) {
    return all_gaps_below_pi(sorted_unique(dirs), false);
}

bool origin_in_hull(const std::vector<Direction>& dirs) {
    return all_gaps_below_pi(sorted_unique(dirs), true);
}

std::optional<Arc> unstable_arc(const Rule& rule) {
    std::vector<Direction> ds;
    for (const auto& v : rule) ds.emplace_back(v);
    ds = sorted_unique(std::move(ds));
    if (ds.size() == 1) {
        const auto& a = ds.front().vec();
        return Arc{Direction(rot90(a)), Direction(rot270(a)), Arc::Kind::open};
    }
    // The offsets fit in an open half-plane iff one circular gap exceeds pi;
    // the sector then runs from the direction after the gap to the one before.
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& before = ds[i];
        const auto& after = ds[(i + 1) % ds.size()];
        if (cross(before.vec(), after.vec()) < 0)
            return Arc{Direction(rot90(before.vec())), Direction(rot270(after.vec())), Arc::Kind::open};
    }
    return std::nullopt;
}

StableSet stable_set(const UpdateFamily& family) {
    std::vector<Arc> unstable;
    for (const auto& r : family.rules())
        if (auto a = unstable_arc(r)) unstable.push_back(*a);
    if (unstable.empty()) return StableSet::whole_circle();

    std::vector<Direction> crit;
    for (const auto& a : unstable) {
        crit.push_back(a.start);
        crit.push_back(a.end);
    }
    crit = sorted_unique(std::move(crit));
    const std::size_t k = crit.size();

    // Element 2i is the point crit[i]; element 2i+1 is the open interval
    // (crit[i], crit[i+1]), which holds no endpoint and so lies entirely
    // inside or entirely outside each unstable arc.
    std::vector<bool> stable(2 * k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& d = crit[i];
        stable[2 * i] = std::none_of(unstable.begin(), unstable.end(),
                                     [&](const Arc& a) { return strictly_between(a.start, a.end, d); });
        stable[2 * i + 1] = std::none_of(unstable.begin(), unstable.end(), [&](const Arc& a) {
            return d == a.start || strictly_between(a.start, a.end, d);
        });
    }

    std::size_t first_unstable = 0;
    while (stable[first_unstable]) ++first_unstable;

    std::vector<Arc> arcs;
    std::optional<std::size_t> run_start;
    std::size_t last_point = 0;
    for (std::size_t step = 1; step <= 2 * k; ++step) {
        const std::size_t e = (first_unstable + step) % (2 * k);
        if (stable[e]) {
            if (e % 2 == 0) {
                if (!run_start) run_start = e / 2;
                last_point = e / 2;
            }
            continue;
        }
        if (run_start) {
            if (*run_start == last_point)
                arcs.push_back(Arc::point(crit[last_point]));
            else
                arcs.push_back(Arc{crit[*run_start], crit[last_point], Arc::Kind::closed});
            run_start.reset();
        }
    }
    return StableSet(std::move(arcs));
}

bool is_stable(const UpdateFamily& family, const Direction& u) {
    return std::none_of(family.rules().begin(), family.rules().end(), [&](const Rule& r) {
        return std::all_of(r.begin(), r.end(), [&](const LatticeVector& x) { return dot(x, u.vec()) < 0; });
    });
}

Classification classify(const StableSet& s) {
    if (s.is_whole_circle()) return Classification::subcritical;
    if (s.empty()) return Classification::supercritical;
    const auto& arcs = s.arcs();
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const auto& next = arcs[(i + 1) % arcs.size()];
        if (gap_at_least_pi(arcs[i].end, next.start)) return Classification::supercritical;
    }
    std::vector<Arc> fat;
    std::copy_if(arcs.begin(), arcs.end(), std::back_inserter(fat), [](const Arc& a) { return !a.is_point(); });
    if (fat.empty()) return Classification::critical;
    // A closed semicircle meets S in a finite set iff its interior avoids the
    // interior of every non-degenerate arc.
    for (std::size_t i = 0; i < fat.size(); ++i) {
        const auto& next = fat[(i + 1) % fat.size()];
        if (gap_at_least_pi(fat[i].end, next.start)) return Classification::critical;
    }
    return Classification::subcritical;
}

Classification classify(const UpdateFamily& family) { return classify(stable_set(family)); }

namespace {

std::vector<Direction> s4_candidates(const StableSet& s, const Direction& y) {
    std::vector<Direction> c{Direction(rot90(y.vec())), Direction(rot270(y.vec()))};
    for (const auto& d : s.endpoints()) c.push_back(d);
    std::vector<Direction> out;
    for (const auto& d : c)
        if (s.contains(d) && std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
    return out;
}

std::optional<Direction> first_between(const std::vector<Direction>& cands, const Direction& from,
                                       const Direction& to) {
    for (const auto& d : cands)
        if (strictly_between(from, to, d)) return d;
    return std::nullopt;
}

}  // namespace

std::vector<Direction> choose_s4(const UpdateFamily& family, const Direction& y) {
    const auto s = stable_set(family);
    if (!s.contains(y)) throw ValidationError("choose_s4: direction is not stable");
    const auto cands = s4_candidates(s, y);
    const auto neg_y = y.opposite();

    std::vector<Direction> out;
    if (s.contains(neg_y)) {
        const auto x = first_between(cands, y, neg_y);
        const auto z = first_between(cands, neg_y, y);
        if (x && z) out = {y, *x, neg_y, *z};
    } else {
        // Left side: the stable direction in (y, -y) closest to -y.
        std::optional<Direction> left;
        for (const auto& d : cands)
            if (strictly_between(y, neg_y, d) && (!left || ccw_less_from(y, *left, d))) left = d;
        if (left && dot(left->vec(), y.vec()) < 0) {
            if (auto z = first_between(cands, neg_y, left->opposite())) out = {y, *left, *z};
        } else {
            std::optional<Direction> right;
            for (const auto& d : cands)
                if (strictly_between(neg_y, y, d) && (!right || ccw_less_from(neg_y, d, *right))) right = d;
            if (right && dot(right->vec(), y.vec()) < 0)
                if (auto z = first_between(cands, right->opposite(), neg_y)) out = {y, *right, *z};
        }
    }
    if (out.empty() || !origin_in_hull_interior(out))
        throw ValidationError("choose_s4: no stable set around this direction has the origin inside its hull");
    return out;
}

}  // namespace ufix
