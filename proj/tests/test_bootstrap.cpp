#include <cmath>
#include <set>

#include "doctest.h"
#include "ufix/bootstrap.hpp"
#include "ufix/covering.hpp"
#include "ufix/rng.hpp"
#include "ufix/stable_set.hpp"

using namespace ufix;

namespace {

const std::vector<Direction> kSquare{Direction(1, 0), Direction(0, 1), Direction(-1, 0), Direction(0, -1)};
const std::vector<Direction> kTriangle{Direction(-1, 0), Direction(1, 1), Direction(1, -1)};

// Synchronous iteration A_{t+1} = A_t u {x : x+X in A_t} straight from the
// definition, on a free box.
std::set<LatticeVector> naive_closure(const UpdateFamily& f, std::set<LatticeVector> a, const Domain& d) {
    for (;;) {
        std::set<LatticeVector> next = a;
        for (std::size_t s = 0; s < d.size(); ++s) {
            const auto p = d.site(s);
            for (const auto& r : f.rules()) {
                bool all = true;
                for (const auto& x : r) {
                    const auto q = p + x;
                    if (d.is_torus()) {
                        all = all && a.count(d.site(d.index(q)));
                    } else {
                        all = all && d.contains(q) && a.count(q);
                    }
                }
                if (all) next.insert(p);
            }
        }
        if (next == a) return a;
        a = std::move(next);
    }
}

std::set<LatticeVector> as_set(const SiteSet& s) {
    const auto pts = s.points();
    return {pts.begin(), pts.end()};
}

SiteSet random_seeds(const Domain& d, double p, Rng& rng) {
    SiteSet s(d);
    for (std::size_t i = 0; i < d.size(); ++i)
        if (rng.uniform() < p) s.set(i);
    return s;
}

std::vector<LatticeVector> brute_points(const std::vector<Direction>& t, const std::vector<std::int64_t>& b, int box) {
    std::vector<LatticeVector> out;
    for (int y = -box; y <= box; ++y)
        for (int x = -box; x <= box; ++x) {
            bool in = true;
            for (std::size_t k = 0; k < t.size(); ++k) in = in && dot({x, y}, t[k].vec()) < b[k];
            if (in) out.push_back({x, y});
        }
    return out;
}

double brute_diameter(const std::vector<LatticeVector>& pts) {
    std::int64_t best = 0;
    for (const auto& p : pts)
        for (const auto& q : pts) best = std::max(best, dot(p - q, p - q));
    return std::sqrt(static_cast<double>(best));
}

double brute_distance(const Droplet& a, const Droplet& b) {
    std::int64_t best = INT64_MAX;
    for (const auto& p : a.points())
        for (const auto& q : b.points()) best = std::min(best, dot(p - q, p - q));
    return std::sqrt(static_cast<double>(best));
}

}  // namespace

TEST_CASE("closure examples") {
    const auto box4 = Domain::box(4, 4);
    CHECK(closure(catalog::neighbours(2), SiteSet(box4)).count() == 0);
    const auto c = closure(catalog::neighbours(2), SiteSet(box4, {{0, 0}, {1, 1}}));
    CHECK(as_set(c) == std::set<LatticeVector>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});

    const auto box3 = Domain::box(3, 3);
    const auto d = closure(catalog::duarte(), SiteSet(box3, {{0, 0}, {0, 2}}));
    CHECK(as_set(d) == std::set<LatticeVector>{{0, 0}, {0, 1}, {0, 2}});
}

TEST_CASE("closure agrees with synchronous iteration") {
    Rng rng(11);
    const std::vector<UpdateFamily> fams{catalog::neighbours(2), catalog::duarte(), catalog::triangle(),
                                         catalog::u38()};
    for (const auto& f : fams)
        for (int trial = 0; trial < 10; ++trial) {
            for (const auto& dom : {Domain::box(12, 9), Domain::torus(10)}) {
                const auto seeds = random_seeds(dom, 0.12, rng);
                CHECK_MESSAGE(as_set(closure(f, seeds)) == naive_closure(f, as_set(seeds), dom), f.name());
            }
        }
}

TEST_CASE("closure boundary semantics") {
    // Frozen minus exterior feeds infection in; frozen plus blocks it.
    const auto rows = UpdateFamily({Rule{{-1, 0}}});
    CHECK(closure(rows, SiteSet(Domain::box(5, 2, Domain::Boundary::frozen_minus))).full());
    CHECK(closure(rows, SiteSet(Domain::box(5, 2, Domain::Boundary::frozen_plus))).count() == 0);
    CHECK(closure(rows, SiteSet(Domain::box(5, 2))).count() == 0);
    CHECK(closure(rows, SiteSet(Domain::box(5, 1), {{2, 0}})).count() == 3);
}

TEST_CASE("closure is monotone and idempotent") {
    Rng rng(3);
    const auto dom = Domain::box(20, 20);
    for (const auto& f : {catalog::neighbours(2), catalog::duarte(), catalog::five_rule()})
        for (int t = 0; t < 20; ++t) {
            auto a = random_seeds(dom, 0.05, rng);
            auto b = a;
            for (std::size_t i = 0; i < dom.size(); ++i)
                if (rng.uniform() < 0.05) b.set(i);
            const auto ca = closure(f, a);
            CHECK(ca.subset_of(closure(f, b)));
            CHECK(closure(f, ca) == ca);
        }
}

TEST_CASE("close_with matches a full recomputation") {
    Rng rng(5);
    const auto dom = Domain::box(15, 15);
    auto a = closure(catalog::neighbours(2), random_seeds(dom, 0.08, rng));
    const LatticeVector extra{7, 7};
    auto full = a;
    full.insert(extra);
    close_with(catalog::neighbours(2), a, extra);
    CHECK(a == closure(catalog::neighbours(2), full));
}

TEST_CASE("a half-plane of infection is closed in every stable direction") {
    const std::vector<UpdateFamily> fams{catalog::neighbours(2), catalog::duarte(), catalog::triangle(),
                                         catalog::u38(), catalog::five_rule()};
    for (const auto& f : fams) {
        const auto s = stable_set(f);
        std::vector<Direction> us = s.endpoints();
        for (const auto& u : {Direction(1, 0), Direction(-2, 1), Direction(1, 3), Direction(0, -1)})
            if (s.contains(u)) us.push_back(u);
        for (const auto& u : us) {
            const auto dom = Domain::half_plane_box(-10, -10, 21, 21, u, -1, +1);
            SiteSet seeds(dom);
            for (std::size_t i = 0; i < dom.size(); ++i)
                if (dot(dom.site(i), u.vec()) < 0) seeds.set(i);
            CHECK_MESSAGE(closure(f, seeds) == seeds, f.name() << " along " << u);
        }
    }
}

TEST_CASE("smallest_droplet, merge and diameter") {
    const auto single = smallest_droplet(kSquare, std::vector<LatticeVector>{{0, 0}});
    for (auto b : single.thresholds()) CHECK(b == 1);
    CHECK(single.points() == std::vector<LatticeVector>{{0, 0}});
    CHECK(single.diameter() == 0.0);

    const auto seg = smallest_droplet(kSquare, std::vector<LatticeVector>{{0, 0}, {5, 0}});
    CHECK(seg.size() == 6);
    for (int k = 0; k <= 5; ++k) CHECK(seg.contains({k, 0}));
    CHECK(seg.diameter() == doctest::Approx(5.0));

    const auto s2 = smallest_droplet(kSquare, std::vector<LatticeVector>{{5, 0}});
    CHECK(merge(single, s2) == seg);
    CHECK(merge(seg, seg) == seg);

    const auto tri = smallest_droplet(kTriangle, std::vector<LatticeVector>{{0, 0}});
    CHECK(tri.contains({0, 0}));
    CHECK(tri.points() == brute_points(tri.directions(), tri.thresholds(), 10));

    for (int s = 1; s <= 12; ++s) {
        const auto sq = smallest_droplet(kSquare, std::vector<LatticeVector>{{0, 0}, {s, s}});
        CHECK(std::abs(sq.diameter() - s * std::sqrt(2.0)) < 1e-9);
    }

    CHECK_THROWS_AS(smallest_droplet({Direction(1, 0), Direction(-1, 0)}, std::vector<LatticeVector>{{0, 0}}),
                    ValidationError);
    CHECK_THROWS_AS(merge(seg, tri), ValidationError);
}

TEST_CASE("droplet geometry matches brute-force enumeration") {
    Rng rng(21);
    const std::vector<std::vector<Direction>> sets{
        kSquare, kTriangle, {Direction(2, 1), Direction(-1, 3), Direction(-1, -1), Direction(1, -4)}};
    for (const auto& t : sets)
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<LatticeVector> pts;
            const int k = 1 + static_cast<int>(rng.below(4));
            for (int i = 0; i < k; ++i)
                pts.push_back({static_cast<std::int64_t>(rng.below(9)) - 4, static_cast<std::int64_t>(rng.below(9)) - 4});
            const auto d = smallest_droplet(t, pts);
            const auto brute = brute_points(d.directions(), d.thresholds(), 60);
            auto mine = d.points();
            std::sort(mine.begin(), mine.end());
            auto sorted = brute;
            std::sort(sorted.begin(), sorted.end());
            REQUIRE(mine == sorted);
            for (const auto& p : pts) CHECK(d.contains(p));
            CHECK(std::abs(d.diameter() - brute_diameter(brute)) < 1e-9);
            // Thresholds are tight.
            for (std::size_t u = 0; u < t.size(); ++u) {
                std::int64_t m = INT64_MIN;
                for (const auto& p : brute) m = std::max(m, dot(p, d.directions()[u].vec()));
                CHECK(d.thresholds()[u] == m + 1);
            }
            const auto other = smallest_droplet(t, std::vector<LatticeVector>{
                                                      {static_cast<std::int64_t>(rng.below(21)) - 10,
                                                       static_cast<std::int64_t>(rng.below(21)) - 10}});
            CHECK(merge(d, other) == merge(other, d));
            CHECK(d.subset_of(merge(d, other)));
            CHECK(std::abs(distance(d, other) - brute_distance(d, other)) < 1e-9);
        }
}

TEST_CASE("droplet_hat is the smallest scaled droplet reaching kappa") {
    for (const auto& t : {kSquare, kTriangle}) {
        for (double kappa : {1.0, 5.0, 10.0, 40.0}) {
            const auto h = droplet_hat(t, kappa);
            CHECK(h.diameter() >= kappa);
            CHECK(h.contains({0, 0}));
        }
    }
    // Thresholds b give a square of side 2(b-1)+1 and diameter 2(b-1)*sqrt(2);
    // the first to reach 10 is b = 5.
    const auto h = droplet_hat(kSquare, 10.0);
    for (auto b : h.thresholds()) CHECK(b == 5);
}

TEST_CASE("covering algorithm examples") {
    CHECK(covering_algorithm(kSquare, 10, {}).active.empty());

    const auto one = covering_algorithm(kSquare, 10, {{0, 0}});
    REQUIRE(one.active.size() == 1);
    CHECK(one.droplets()[0] == droplet_hat(kSquare, 10));

    const auto c = covering_algorithm(kSquare, 10, {{0, 0}, {3, 0}, {100, 100}});
    const auto finals = c.droplets();
    REQUIRE(finals.size() == 2);
    int with_pair = 0, with_far = 0;
    for (const auto& d : finals) {
        if (d.contains({0, 0}) && d.contains({3, 0})) ++with_pair;
        if (d.contains({100, 100})) ++with_far;
        CHECK(is_covered(c, d));
    }
    CHECK(with_pair == 1);
    CHECK(with_far == 1);
    for (std::size_t i = 0; i < c.seeds.size(); ++i) CHECK(is_covered(c, c.history[i].droplet));
    CHECK_FALSE(is_covered(c, smallest_droplet(kSquare, std::vector<LatticeVector>{{-50, -50}, {200, 200}})));
}

TEST_CASE("covering invariants on random seed sets") {
    Rng rng(8);
    const auto f = catalog::neighbours(2);
    const double kappa = default_kappa(f.radius(), kSquare.size());
    const auto dom = Domain::box(100, 100);
    for (int run = 0; run < 5; ++run) {
        const auto seeds = random_seeds(dom, 0.004, rng);
        const auto c = covering_algorithm(kSquare, kappa, seeds.points());
        CHECK(c.merges() <= c.seeds.size());
        const auto finals = c.droplets();
        for (std::size_t i = 0; i < finals.size(); ++i)
            for (std::size_t j = i + 1; j < finals.size(); ++j) CHECK(distance(finals[i], finals[j]) > kappa);
        CHECK(uncovered_sites(c, closure(f, seeds)).empty());
        CHECK(extremal_violations(c, 1.0 / (2 * kappa)).empty());
        CHECK(aizenman_lebowitz_violations(c, static_cast<std::int64_t>(std::ceil(kappa))).empty());
    }
}

TEST_CASE("wilson interval") {
    const auto w = wilson_interval(50, 100);
    CHECK(w.low == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(w.high == doctest::Approx(0.5962).epsilon(1e-3));
    CHECK(wilson_interval(0, 10).low == 0.0);
    CHECK(wilson_interval(10, 10).high == doctest::Approx(1.0));
}

TEST_CASE("spanning probability and p_c estimation") {
    const auto n22 = catalog::neighbours(2);
    CHECK(spanning_probability(n22, 16, 1.0, 50, 1).fraction() == 1.0);
    CHECK(spanning_probability(n22, 16, 0.0, 50, 1).fraction() == 0.0);
    CHECK_THROWS_AS(estimate_pc_torus(n22, 4, 100, 0.01, 1), ValidationError);
    CHECK_THROWS_AS(estimate_pc_torus(n22, 16, 10, 0.01, 1), ValidationError);

    // Horizontal growth both ways: the torus spans iff every row holds a seed,
    // so P = (1-(1-p)^n)^n exactly.
    const auto rows = UpdateFamily({Rule{{1, 0}}, Rule{{-1, 0}}});
    const int n = 64;
    auto span = [&](double p) { return std::pow(1 - std::pow(1 - p, n), n); };
    double lo = 0, hi = 1;
    for (int i = 0; i < 100; ++i) (span(0.5 * (lo + hi)) >= 0.5 ? hi : lo) = 0.5 * (lo + hi);
    const double exact = 0.5 * (lo + hi);
    CHECK(exact == doctest::Approx(0.0683).epsilon(1e-2));

    const auto est = estimate_pc_torus(rows, n, 400, 0.002, 99);
    CHECK(est.high - est.low <= 0.002);
    CHECK(est.ci.low <= exact);
    CHECK(exact <= est.ci.high);
    CHECK(std::abs(est.estimate - exact) < 0.01);

    // Same seed, same answer; worker count does not matter.
    const auto a = spanning_probability(n22, 32, 0.08, 60, 7, 1);
    const auto b = spanning_probability(n22, 32, 0.08, 60, 7, 3);
    CHECK(a.spanning == b.spanning);
    // Common random numbers make spanning monotone in p.
    CHECK(spanning_probability(n22, 32, 0.06, 60, 7).spanning <= a.spanning);
}
