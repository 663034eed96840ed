#include <cmath>

#include "big.hpp"
#include "doctest.h"
#include "ufix/scales.hpp"

using namespace ufix;
using namespace ufix::oracle;

namespace {

// (height, mantissa) in the level-index normal form.
struct Ref {
    int h;
    double v;
};

// Normal form of a value given as exp(x), x as a Big that fits.
Ref exp_of(const Big& x) {
    if (x.d() <= std::log(1.7976931348623157e308)) return {0, std::exp(x.d())};
    return {1, x.d()};
}

void check_close(const LevelIndex& got, Ref want, const char* what, int k) {
    INFO(what << " at k=" << k << ": got " << got << ", want h=" << want.h << " v=" << want.v);
    CHECK(got.height() == want.h);
    CHECK(std::abs(got.mantissa() - want.v) <= 1e-6 * std::abs(want.v));
}

}  // namespace

TEST_CASE("scale sequence examples") {
    const auto s = scale_sequences(0.1, 0.5, 3.5, 3);
    REQUIRE(s.levels.size() == 4);
    CHECK(std::exp(-s.levels[1].neg_log_q.to_double()) == doctest::Approx(6.7379e-3).epsilon(1e-4));
    CHECK(s.levels[1].log_l.to_double() == doctest::Approx(std::log(std::floor(std::pow(10.0, 10.5)))).epsilon(1e-14));
    CHECK(s.levels[1].log_l.to_double() / std::log(10.0) == doctest::Approx(10.5).epsilon(1e-9));
    CHECK(s.levels[1].l_exact);
    CHECK(s.levels[1].log_t.to_double() / std::log(10.0) == doctest::Approx(7.0));
    CHECK(s.gamma == doctest::Approx(1 / 14.0));

    CHECK_THROWS_AS(scale_sequences(1.0, 0.5, 3.5, 3), ValidationError);
    CHECK_THROWS_AS(scale_sequences(0.1, -1, 3.5, 3), ValidationError);
    CHECK_THROWS_AS(scale_sequences(0.1, 0.5, 1.0, 3), ValidationError);
    CHECK_THROWS_AS(scale_sequences(0.1, 0.5, 3.5, 9), ValidationError);
}

TEST_CASE("level-index arithmetic") {
    const LevelIndex x(800.0);
    const auto e = x.exp();
    CHECK(e.height() == 1);
    CHECK(e.mantissa() == 800.0);
    CHECK(e.log() == x);
    CHECK(LevelIndex(2.0).exp().to_double() == doctest::Approx(std::exp(2.0)));
    CHECK(e.scaled(std::exp(1.0)).mantissa() == doctest::Approx(801.0));
    CHECK((e + e).mantissa() == doctest::Approx(800 + std::log(2.0)));
    CHECK(e.exp().scaled(10) == e.exp());
    CHECK(LevelIndex(1e308).scaled(10).height() == 1);
    CHECK(LevelIndex(3.0) < e);
    CHECK(e < e.exp());
    CHECK(ratio(LevelIndex(1.0), LevelIndex(4.0)) == 0.25);
    CHECK(ratio(LevelIndex(1.0), e) == 0.0);
}

TEST_CASE("scale recursion matches an extended-precision oracle") {
    const double q0 = 1e-3, a = 0.1, c = 3.5;
    const auto s = scale_sequences(q0, a, c, 4);
    REQUIRE(s.levels.size() == 5);

    // ell_k = -log q_k by depth. ell_0..ell_2 fit in MPFR directly; beyond,
    // lam_3 = log ell_3 = log a + ell_2 and mu_4 = log log ell_4
    // = lam_3 + log1p(log a * e^{-lam_3}), which equals lam_3 at this size.
    const Big A(a), C(c);
    Big ell0 = log(div(Big(1), Big(q0)));
    Big ell1 = mul(A, exp(ell0));
    Big ell2 = mul(A, exp(ell1));
    Big lam3 = add(log(A), ell2);
    Big mu4 = lam3;
    const Big two_c = mul(Big(2), C), three_c = mul(Big(3), C);

    check_close(s.levels[0].neg_log_q, {0, ell0.d()}, "ell", 0);
    check_close(s.levels[1].neg_log_q, {0, ell1.d()}, "ell", 1);
    check_close(s.levels[2].neg_log_q, {0, ell2.d()}, "ell", 2);
    check_close(s.levels[3].neg_log_q, {1, lam3.d()}, "ell", 3);
    check_close(s.levels[4].neg_log_q, {2, mu4.d()}, "ell", 4);

    // log t_k = 2c ell_{k-1}; log l_k = 3c ell_{k-1} (too large to floor).
    const Big ells[] = {ell0, ell1, ell2};
    for (int k = 1; k <= 3; ++k) {
        check_close(s.levels[k].log_t, {0, mul(two_c, ells[k - 1]).d()}, "log t", k);
        check_close(s.levels[k].log_l, {0, mul(three_c, ells[k - 1]).d()}, "log l", k);
        CHECK_FALSE(s.levels[k].l_exact);
    }
    check_close(s.levels[4].log_t, {1, add(lam3, log(two_c)).d()}, "log t", 4);
    check_close(s.levels[4].log_l, {1, add(lam3, log(three_c)).d()}, "log l", 4);

    // log L_k = 3c (ell_0 + ... + ell_{k-1}); at k = 4 ell_3 swamps the rest.
    Big acc;
    for (int k = 1; k <= 3; ++k) {
        acc = add(acc, ells[k - 1]);
        check_close(s.levels[k].log_L, {0, mul(three_c, acc).d()}, "log L", k);
    }
    check_close(s.levels[4].log_L, {1, add(lam3, log(three_c)).d()}, "log L", 4);

    // log T_k = log sum exp(2c ell_{i-1}).
    Big logT = mul(two_c, ell0);
    check_close(s.levels[1].log_T, {0, logT.d()}, "log T", 1);
    for (int k = 2; k <= 3; ++k) {
        logT = logaddexp(logT, mul(two_c, ells[k - 1]));
        check_close(s.levels[k].log_T, {0, logT.d()}, "log T", k);
    }
    check_close(s.levels[4].log_T, {1, add(lam3, log(two_c)).d()}, "log T", 4);

    // L_k <= 1/q_k at every level, by the oracle's own comparison.
    CHECK(mpfr_cmp(mul(three_c, ell0).v, ell1.v) <= 0);
    CHECK(mpfr_cmp(mul(three_c, add(ell0, ell1)).v, ell2.v) <= 0);
    for (const auto& lv : s.levels) CHECK_MESSAGE(lv.delta_holds, "level " << lv.k);
    (void)exp_of;
}

TEST_CASE("scale sequence monotonicity and the T bound") {
    for (double q0 : {0.1, 1e-3, 0.3})
        for (double a : {0.5, 0.1, 2.0})
            for (double c : {1.5, 3.5}) {
                const auto s = scale_sequences(q0, a, c, 8);
                CHECK(s.levels.size() == 9);
                if (!s.q_decreasing) continue;  // tiny a can stall the recursion
                CHECK(s.l_increasing);
                CHECK(s.t_increasing);
                CHECK(s.c_prime < 1);
                for (std::size_t k = 1; k < s.levels.size(); ++k) CHECK(s.levels[k].T_bound_holds);
            }
    const auto text = render(scale_sequences(0.1, 0.5, 3.5, 3));
    CHECK(text.find("k,neg_log_q") != std::string::npos);
}
