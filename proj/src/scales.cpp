#include "ufix/scales.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "ufix/lattice.hpp"

namespace ufix {

ScaleSequences scale_sequences(double q0, double a, double c, int k_max) {
    if (!(q0 > 0 && q0 < 1)) throw ValidationError("q0 must lie in (0,1)");
    if (!(a > 0)) throw ValidationError("a must be positive");
    if (!(c > 1)) throw ValidationError("c must exceed 1");
    if (k_max < 0 || k_max > kMaxScaleLevel) throw ValidationError("kmax must lie in [0, 8]");
    ScaleSequences s;
    s.q0 = q0;
    s.a = a;
    s.c = c;
    s.gamma = 1 / (4 * c);

    ScaleLevel z;
    z.k = 0;
    z.neg_log_q = LevelIndex(-std::log(q0));
    z.log_l = LevelIndex(0.0);
    z.t_is_zero = true;
    z.log_L = LevelIndex(0.0);
    z.log_B = LevelIndex(0.0);
    z.delta_holds = z.log_L <= z.neg_log_q;
    s.levels.push_back(z);

    LevelIndex T_sum;  // T_k as a value
    for (int k = 1; k <= k_max; ++k) {
        const auto& prev = s.levels.back();
        ScaleLevel lv;
        lv.k = k;
        lv.neg_log_q = prev.neg_log_q.exp().scaled(a);
        lv.log_t = prev.neg_log_q.scaled(2 * c);
        const auto log_l = prev.neg_log_q.scaled(3 * c);
        if (log_l.is_double() && log_l.to_double() < 53 * std::log(2.0)) {
            const long double l = std::floor(std::exp(static_cast<long double>(log_l.to_double())));
            lv.log_l = LevelIndex(static_cast<double>(std::log(l)));
            lv.l_exact = true;
        } else {
            lv.log_l = log_l;
            lv.l_exact = false;
        }
        lv.log_L = prev.log_L + lv.log_l;
        lv.log_B = lv.log_L.scaled(2);
        const auto t = lv.log_t.exp();
        T_sum = k == 1 ? t : T_sum + t;
        lv.log_T = T_sum.log();
        lv.delta_holds = lv.log_L <= lv.neg_log_q;

        if (!(lv.neg_log_q > prev.neg_log_q)) s.q_decreasing = false;
        if (!(lv.log_l > prev.log_l)) s.l_increasing = false;
        if (k >= 2 && !(lv.log_t > prev.log_t)) s.t_increasing = false;
        if (k >= 2) s.c_prime = std::max(s.c_prime, ratio(prev.log_t.exp(), t));
        s.levels.push_back(lv);
    }
    if (s.c_prime < 1) {
        const double factor = 1 / (1 - s.c_prime);
        for (std::size_t k = 1; k < s.levels.size(); ++k) {
            auto& lv = s.levels[k];
            lv.T_bound_holds = lv.log_T <= lv.log_t.exp().scaled(factor).log();
        }
    } else {
        for (std::size_t k = 1; k < s.levels.size(); ++k) s.levels[k].T_bound_holds = false;
    }
    return s;
}

std::string render(const ScaleSequences& s) {
    std::ostringstream os;
    os << std::setprecision(10);
    os << "q0=" << s.q0 << " a=" << s.a << " c=" << s.c << " gamma=" << s.gamma << " c_prime=" << s.c_prime << "\n";
    os << "k,neg_log_q,log_l,l_exact,log_t,log_L,log_T,log_B,delta_holds,T_bound_holds\n";
    for (const auto& lv : s.levels) {
        os << lv.k << ',' << lv.neg_log_q << ',' << lv.log_l << ',' << (lv.l_exact ? "exact" : "approx") << ','
           << (lv.t_is_zero ? std::string("-inf") : lv.log_t.str()) << ',' << lv.log_L << ','
           << (lv.k == 0 ? std::string("-inf") : lv.log_T.str()) << ',' << lv.log_B << ','
           << (lv.delta_holds ? "yes" : "no") << ',' << (lv.k == 0 ? "-" : (lv.T_bound_holds ? "yes" : "no")) << "\n";
    }
    os << "monotone: q_decreasing=" << (s.q_decreasing ? "yes" : "no") << " l_increasing=" << (s.l_increasing ? "yes" : "no")
       << " t_increasing=" << (s.t_increasing ? "yes" : "no") << "\n";
    return os.str();
}

}  // namespace ufix
