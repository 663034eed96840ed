#pragma once

#include <string>
#include <vector>

#include "ufix/lattice.hpp"
#include "ufix/level_index.hpp"

namespace ufix {

/// One level of the recursion q_k = exp(-a/q_{k-1}),
/// l_k = floor(q_{k-1}^{-3c}), t_k = q_{k-1}^{-2c}, L_k = prod l_i, T_k = sum t_i.
/// Every quantity is held through its natural log.
struct ScaleLevel {
    int k = 0;
    LevelIndex neg_log_q;  // -log q_k = a / q_{k-1}
    LevelIndex log_l;
    LevelIndex log_t;      // level 0: t_0 = 0, flagged by t_is_zero
    bool t_is_zero = false;
    LevelIndex log_L;
    LevelIndex log_T;      // undefined at level 0
    LevelIndex log_B;      // B_k = L_k^2
    // l_k was floored exactly (it fits in 53 bits); otherwise the unfloored
    // power is used.
    bool l_exact = true;
    // log L_k <= -log q_k, i.e. L_k <= 1/q_k.
    bool delta_holds = false;
    // T_k <= t_k / (1 - c'), checked for k >= 1.
    bool T_bound_holds = true;
};

struct ScaleSequences {
    double q0 = 0;
    double a = 0;
    double c = 0;
    double gamma = 0;  // 1 / (4c)
    double c_prime = 0;  // max_{k>=1} t_{k-1} / t_k
    std::vector<ScaleLevel> levels;
    bool q_decreasing = true;
    bool l_increasing = true;
    bool t_increasing = true;
};

constexpr int kMaxScaleLevel = 8;

ScaleSequences scale_sequences(double q0, double a, double c, int k_max);

// Fixed-width text table, one row per level.
std::string render(const ScaleSequences& s);

}  // namespace ufix
