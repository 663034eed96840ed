#include <cmath>
#include <map>

#include "doctest.h"
#include "ufix/dynamics.hpp"

using namespace ufix;

namespace {

const std::vector<Direction> kSquare{Direction(1, 0), Direction(0, 1), Direction(-1, 0), Direction(0, -1)};

Droplet square(std::int64_t side) {
    return smallest_droplet(kSquare, std::vector<LatticeVector>{{0, 0}, {side - 1, side - 1}});
}

// Literal clock semantics: every site rings at rate 1; a ring picks a rule
// uniformly and flips the site if that rule disagrees with it (voter), or
// flips whenever some rule disagrees (Ising). Returns the first flipped site.
std::size_t first_flip_by_clocks(const SpinConfiguration& c, const UpdateFamily& f, DynamicsKind kind, Rng& rng) {
    const auto N = c.domain.size();
    for (;;) {
        const auto v = rng.below(N);
        const auto p = c.domain.site(v);
        if (kind == DynamicsKind::voter) {
            const auto& r = f.rule(rng.below(f.m()));
            bool all = true;
            for (const auto& x : r) all = all && c.state(p + x) == -c.state(p);
            if (all) return v;
        } else if (disagreement_count(c, f, p) > 0) {
            return v;
        }
    }
}

SpinConfiguration duarte_3x3() {
    SpinConfiguration c(Domain::torus(3), -1);
    c.set({0, 0}, 1);
    c.set({1, 0}, 1);
    c.set({2, 1}, 1);
    c.set({1, 2}, 1);
    return c;
}

}  // namespace

TEST_CASE("disagreement_count examples") {
    const auto du = catalog::duarte();
    SpinConfiguration plus(Domain::torus(5), 1);
    for (std::size_t i = 0; i < plus.domain.size(); ++i) CHECK(disagreement_count(plus, du, plus.domain.site(i)) == 0);

    SpinConfiguration minus(Domain::torus(5), -1);
    minus.set({2, 2}, 1);
    CHECK(disagreement_count(minus, du, {2, 2}) == 3);

    const auto seg = segment_system(Direction(0, 1), 6);
    const auto sites = segment_sites(Direction(0, 1), 6);
    CHECK(sites.back() == LatticeVector{-5, 0});
    CHECK(disagreement_count(seg.config, du, sites.back()) == 1);
    CHECK(disagreement_count(seg.config, du, sites.front()) == 0);
}

TEST_CASE("engine rates follow the kind") {
    const auto du = catalog::duarte();
    SpinSystem sys{SpinConfiguration(Domain::torus(6), -1), std::vector<std::uint8_t>(36, 1)};
    sys.config.set({0, 0}, 1);
    sys.config.set({3, 3}, 1);
    Engine voter(du, DynamicsKind::voter, sys, 1);
    CHECK(voter.total_rate() == doctest::Approx(2.0));
    Engine ising(du, DynamicsKind::ising, sys, 1);
    CHECK(ising.total_rate() == doctest::Approx(2.0));

    // Ising total rate counts sites with r >= 1, voter sums r/m.
    SpinConfiguration c(Domain::torus(6), 1);
    c.set({0, 0}, -1);
    c.set({0, 1}, -1);
    Engine v2(du, DynamicsKind::voter, {c, std::vector<std::uint8_t>(36, 1)}, 1);
    Engine i2(du, DynamicsKind::ising, {c, std::vector<std::uint8_t>(36, 1)}, 1);
    CHECK(i2.total_rate() == doctest::Approx(2.0));
    // Each site of the vertical pair has exactly one fully-plus rule.
    CHECK(v2.total_rate() == doctest::Approx(2.0 / 3.0));
    v2.check_consistency();
}

TEST_CASE("absorbing states have zero rate") {
    for (auto kind : {DynamicsKind::voter, DynamicsKind::ising})
        for (int s : {1, -1}) {
            Engine e(catalog::neighbours(2), kind, {SpinConfiguration(Domain::torus(8), s), std::vector<std::uint8_t>(64, 1)}, 3);
            CHECK(e.total_rate() == 0.0);
            CHECK_FALSE(e.step());
        }
}

TEST_CASE("holding times") {
    // Single mobile minus site with every rule disagreeing: rate 1.
    Engine full(catalog::duarte(), DynamicsKind::voter, droplet_system(square(1)), 5);
    CHECK(full.total_rate() == doctest::Approx(1.0));

    // Duarte single-site segment: r = 1 of m = 3, so tau ~ Exp(1/3).
    const int trials = 100000;
    double sum = 0;
    for (int t = 0; t < trials; ++t) {
        const auto rec = segment_erosion(catalog::duarte(), Direction(0, 1), 1, DynamicsKind::voter, derive_seed(17, t));
        REQUIRE(rec.outcome == Outcome::eroded);
        CHECK(rec.flips == 1);
        CHECK(rec.time > 0);
        sum += rec.time;
    }
    CHECK(std::abs(sum / trials - 3.0) < 0.05 * 3.0);
}

TEST_CASE("singleton droplet erodes at the rate of fully-plus rules") {
    // Every Duarte rule sees only exterior + around a lone minus: rate 3/3.
    const int trials = 20000;
    double sum = 0;
    for (int t = 0; t < trials; ++t)
        sum += droplet_erosion(catalog::duarte(), square(1), DynamicsKind::voter, derive_seed(2, t)).time;
    CHECK(std::abs(sum / trials - 1.0) < 0.03);
}

TEST_CASE("incremental rates stay consistent over a long run") {
    for (auto kind : {DynamicsKind::voter, DynamicsKind::ising}) {
        Rng init(4);
        Engine e(catalog::duarte(), kind, torus_system(24, 0.5, init), 9);
        int steps = 0;
        while (steps < 100000 && e.step()) {
            ++steps;
            if (steps % 20000 == 0) e.check_consistency();
        }
        e.check_consistency();
    }
    Engine seg(catalog::u38(), DynamicsKind::voter, segment_system(Direction(0, 1), 40), 2);
    for (int s = 0; s < 5000 && seg.step(); ++s) {}
    seg.check_consistency();
}

TEST_CASE("reruns are bit-identical") {
    auto trace = [](std::uint64_t seed) {
        std::vector<std::pair<std::size_t, double>> out;
        segment_erosion(catalog::u38(), Direction(0, 1), 24, DynamicsKind::voter, seed, kNoCap,
                        [&](const Engine&, const Flip& f) { out.push_back({f.site, f.time}); });
        return out;
    };
    const auto a = trace(42);
    CHECK(a == trace(42));
    CHECK(a != trace(43));
}

TEST_CASE("frozen exterior and non-mobile sites never change") {
    const auto sys = segment_system(Direction(1, 2), 12);
    const auto before = sys.config;
    segment_erosion(catalog::neighbours(2), Direction(1, 0), 12, DynamicsKind::voter, 1);  // warm-up on another shape
    Engine e(catalog::five_rule(), DynamicsKind::voter, sys, 6);
    while (e.mobile_minus() > 0 && e.flips() < 100000 && e.step()) {}
    for (std::size_t i = 0; i < before.spins.size(); ++i)
        if (!sys.mobile[i]) CHECK(e.config().spins[i] == before.spins[i]);
}

TEST_CASE("first flip matches the literal clock construction") {
    const auto du = catalog::duarte();
    const auto c = duarte_3x3();
    for (auto kind : {DynamicsKind::voter, DynamicsKind::ising}) {
        const int runs = 100000;
        std::map<std::size_t, int> engine_hist, clock_hist;
        Rng clock_rng(77);
        for (int t = 0; t < runs; ++t) {
            Engine e(du, kind, {c, std::vector<std::uint8_t>(9, 1)}, derive_seed(5, t));
            Flip f;
            REQUIRE(e.step(&f));
            ++engine_hist[f.site];
            ++clock_hist[first_flip_by_clocks(c, du, kind, clock_rng)];
        }
        double total = 0;
        std::vector<double> rate(9);
        for (std::size_t v = 0; v < 9; ++v) {
            const int r = disagreement_count(c, du, c.domain.site(v));
            rate[v] = kind == DynamicsKind::voter ? r : (r > 0);
            total += rate[v];
        }
        for (std::size_t v = 0; v < 9; ++v) {
            const double pv = rate[v] / total;
            const double sigma = std::sqrt(runs * pv * (1 - pv));
            CHECK(std::abs(engine_hist[v] - runs * pv) <= 3 * sigma + 1e-9);
            CHECK(std::abs(clock_hist[v] - runs * pv) <= 3 * sigma + 1e-9);
        }
    }
}

TEST_CASE("voter dynamics commute with spin complement") {
    const auto f = catalog::u38();
    auto sys = segment_system(Direction(0, 1), 20);
    SpinSystem comp{sys.config.complemented(), sys.mobile};
    Engine a(f, DynamicsKind::voter, sys, 12);
    Engine b(f, DynamicsKind::voter, comp, 12);
    for (int s = 0; s < 3000; ++s) {
        Flip fa, fb;
        const bool ma = a.step(&fa);
        REQUIRE(ma == b.step(&fb));
        if (!ma) break;
        CHECK(fa.site == fb.site);
        CHECK(fa.new_state == -fb.new_state);
        CHECK(fa.time == fb.time);
    }
}

TEST_CASE("segment and droplet erosion bookkeeping") {
    CHECK_THROWS_AS(segment_erosion(catalog::duarte(), Direction(1, 1), 4, DynamicsKind::voter, 1), ValidationError);
    const auto tri = smallest_droplet({Direction(1, 1), Direction(-1, 0), Direction(1, -1)},
                                      std::vector<LatticeVector>{{0, 0}});
    CHECK_THROWS_AS(droplet_erosion(catalog::duarte(), tri, DynamicsKind::voter, 1), ValidationError);

    const auto capped = segment_erosion(catalog::duarte(), Direction(0, 1), 64, DynamicsKind::voter, 3, 5.0);
    CHECK(capped.outcome == Outcome::timed_out);
    CHECK(capped.time == 5.0);

    // Ising on a droplet of N22: corners see two plus neighbours, so it erodes.
    const auto rec = droplet_erosion(catalog::neighbours(2), square(6), DynamicsKind::ising, 8);
    CHECK(rec.outcome == Outcome::eroded);

    // Every rule reads the frozen minus half-plane below, so nothing can flip.
    const auto down = UpdateFamily({Rule{{0, -1}, {0, 1}}});
    CHECK(segment_erosion(down, Direction(0, 1), 3, DynamicsKind::voter, 1).outcome == Outcome::stuck);
}

TEST_CASE("row-coupled erosion") {
    const auto du = catalog::duarte();
    const Direction up(0, 1);
    // A one-line droplet is a single stage, identical to plain droplet erosion.
    const auto line = smallest_droplet(kSquare, std::vector<LatticeVector>{{0, 0}, {9, 0}});
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto a = row_coupled_erosion(du, line, up, DynamicsKind::voter, s);
        const auto b = droplet_erosion(du, line, DynamicsKind::voter, s);
        CHECK(a.time == b.time);
        CHECK(a.flips == b.flips);
        CHECK(a.stage_times.size() == 1);
    }
    const auto sq = square(8);
    const auto rec = row_coupled_erosion(du, sq, up, DynamicsKind::voter, 4);
    REQUIRE(rec.outcome == Outcome::eroded);
    CHECK(rec.stage_times.size() == 8);
    double sum = 0;
    for (auto t : rec.stage_times) sum += t;
    CHECK(std::abs(sum - rec.time) < 1e-9 * rec.time);
}

TEST_CASE("row-coupled erosion dominates droplet erosion") {
    const auto du = catalog::duarte();
    const auto sq = square(16);
    const int trials = 200;
    std::vector<double> rows, plain;
    for (int t = 0; t < trials; ++t) {
        rows.push_back(row_coupled_erosion(du, sq, Direction(0, 1), DynamicsKind::voter, derive_seed(1, t)).time);
        plain.push_back(droplet_erosion(du, sq, DynamicsKind::voter, derive_seed(2, t)).time);
    }
    auto mean_se = [](const std::vector<double>& x) {
        double m = 0, v = 0;
        for (auto t : x) m += t;
        m /= x.size();
        for (auto t : x) v += (t - m) * (t - m);
        return std::pair{m, std::sqrt(v / (x.size() - 1) / x.size())};
    };
    const auto [mr, ser] = mean_se(rows);
    const auto [mp, sep] = mean_se(plain);
    CHECK(mr >= mp - 2 * std::hypot(ser, sep));
}

TEST_CASE("mean droplet erosion time grows with the square side") {
    double prev = 0;
    for (std::int64_t side : {8, 16, 32}) {
        double sum = 0;
        for (int t = 0; t < 200; ++t)
            sum += droplet_erosion(catalog::duarte(), square(side), DynamicsKind::voter, derive_seed(side, t)).time;
        CHECK(sum / 200 >= prev);
        prev = sum / 200;
    }
}

TEST_CASE("fixation experiment") {
    const auto du = catalog::duarte();
    const auto all_plus = fixation_experiment(du, 16, 1.0, DynamicsKind::voter, 10, 1, 1);
    CHECK(all_plus.absorbed == 1);
    CHECK(all_plus.absorption_time == 0.0);
    for (const auto& s : all_plus.samples) CHECK(s.minus_density == 0.0);

    const auto all_minus = fixation_experiment(du, 16, 0.0, DynamicsKind::voter, 10, 1, 1);
    CHECK(all_minus.absorbed == -1);
    for (const auto& s : all_minus.samples) CHECK(s.minus_density == 1.0);

    const auto mid = fixation_experiment(du, 32, 0.8, DynamicsKind::voter, 20, 2.5, 9);
    REQUIRE(!mid.samples.empty());
    CHECK(mid.samples.front().t == 0.0);
    for (std::size_t i = 1; i < mid.samples.size(); ++i) CHECK(mid.samples[i].t > mid.samples[i - 1].t);
    const auto again = fixation_experiment(du, 32, 0.8, DynamicsKind::voter, 20, 2.5, 9);
    CHECK(again.flips == mid.flips);
}
