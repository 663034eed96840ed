#include "ufix/covering.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace ufix {

namespace {

bool boxes_within(const Droplet& a, const Droplet& b, double kappa) {
    const auto gx = std::max<std::int64_t>({0, b.min_x() - a.max_x(), a.min_x() - b.max_x()});
    const auto gy = std::max<std::int64_t>({0, b.min_y() - a.max_y(), a.min_y() - b.max_y()});
    return std::hypot(static_cast<double>(gx), static_cast<double>(gy)) <= kappa;
}

bool within(const Droplet& a, const Droplet& b, double kappa) {
    return boxes_within(a, b, kappa) && distance(a, b) <= kappa;
}

}  // namespace

std::vector<Droplet> DropletCollection::droplets() const {
    std::vector<Droplet> out;
    for (auto i : active) out.push_back(history[i].droplet);
    return out;
}

double default_kappa(std::int64_t radius, std::size_t direction_count) {
    return 10.0 * static_cast<double>(radius) * static_cast<double>(direction_count);
}

DropletCollection covering_algorithm(const std::vector<Direction>& directions, double kappa,
                                     const std::vector<LatticeVector>& seeds) {
    DropletCollection c;
    c.directions = droplet_directions(directions);
    c.kappa = kappa;
    c.seeds = seeds;
    std::sort(c.seeds.begin(), c.seeds.end());
    c.seeds.erase(std::unique(c.seeds.begin(), c.seeds.end()), c.seeds.end());
    if (c.seeds.empty()) return c;

    const auto hat = droplet_hat(c.directions, kappa);
    for (const auto& s : c.seeds) {
        c.history.push_back({hat.translated(s), std::nullopt, std::nullopt});
        c.active.push_back(c.history.size() - 1);
    }
    // Close pairs (i < j) among active droplets, ordered by creation index.
    std::set<std::pair<std::size_t, std::size_t>> close;
    for (std::size_t a = 0; a < c.active.size(); ++a)
        for (std::size_t b = a + 1; b < c.active.size(); ++b)
            if (within(c.history[c.active[a]].droplet, c.history[c.active[b]].droplet, kappa))
                close.insert({c.active[a], c.active[b]});

    while (!close.empty()) {
        const auto [i, j] = *close.begin();
        std::erase_if(close, [&](const auto& p) { return p.first == i || p.first == j || p.second == i || p.second == j; });
        std::erase_if(c.active, [&](std::size_t x) { return x == i || x == j; });
        c.history.push_back({merge(c.history[i].droplet, c.history[j].droplet), i, j});
        const auto n = c.history.size() - 1;
        for (auto a : c.active)
            if (within(c.history[a].droplet, c.history[n].droplet, kappa)) close.insert({a, n});
        c.active.push_back(n);
    }
    return c;
}

bool is_covered(const DropletCollection& c, const Droplet& d) {
    for (const auto& h : c.history)
        if (h.droplet == d) return true;
    return false;
}

std::vector<CoveringViolation> aizenman_lebowitz_violations(const DropletCollection& c, std::int64_t k_min) {
    std::vector<CoveringViolation> out;
    k_min = std::max<std::int64_t>(k_min, 1);
    for (std::size_t e = 0; e < c.history.size(); ++e) {
        const auto& d = c.history[e].droplet;
        const auto kmax = static_cast<std::int64_t>(std::floor(d.diameter() + 1e-9));
        std::vector<double> diams;
        for (const auto& h : c.history)
            if (h.droplet.subset_of(d)) diams.push_back(h.droplet.diameter());
        for (auto k = k_min; k <= kmax; ++k) {
            const auto kd = static_cast<double>(k);
            const bool found = std::any_of(diams.begin(), diams.end(),
                                           [&](double x) { return x >= kd - 1e-9 && x <= 3 * kd + 1e-9; });
            if (!found) {
                std::ostringstream os;
                os << "no covered sub-droplet with diameter in [" << k << ", " << 3 * k << "]";
                out.push_back({e, k, os.str()});
            }
        }
    }
    return out;
}

std::vector<CoveringViolation> extremal_violations(const DropletCollection& c, double eps) {
    std::vector<CoveringViolation> out;
    for (std::size_t e = 0; e < c.history.size(); ++e) {
        const auto& d = c.history[e].droplet;
        const auto inside = count_inside(d, c.seeds);
        if (static_cast<double>(inside) < eps * d.diameter() - 1e-9) {
            std::ostringstream os;
            os << inside << " seeds < " << eps << " * " << d.diameter();
            out.push_back({e, 0, os.str()});
        }
    }
    return out;
}

std::vector<LatticeVector> uncovered_sites(const DropletCollection& c, const SiteSet& closed) {
    std::vector<LatticeVector> out;
    const auto finals = c.droplets();
    for (const auto& p : closed.points())
        if (std::none_of(finals.begin(), finals.end(), [&](const Droplet& d) { return d.contains(p); }))
            out.push_back(p);
    return out;
}

}  // namespace ufix
