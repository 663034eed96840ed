#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ufix/family.hpp"

namespace ufix {

/// Rate sums for the one-dimensional segment dynamics along y.
///
/// A configuration is a bitmask: bit L-1-k set iff site k is '+'. Numeric order
/// then equals lexicographic order of the +/- string with '-' < '+'.
class SegmentRates {
public:
    SegmentRates(const UpdateFamily& family, const Direction& y, int L);

    int length() const { return L_; }
    // (sum over plus sites of r_v, sum over minus sites of r_u)
    std::pair<std::int64_t, std::int64_t> sums(std::uint64_t plus_mask) const;
    int rate(int site, std::uint64_t plus_mask) const;

    std::uint64_t parse(const std::string& eta) const;
    std::string format(std::uint64_t plus_mask) const;

private:
    struct Group {
        std::uint64_t mask;
        bool frozen_plus;
        bool frozen_minus;
        int count;
    };
    int L_;
    std::vector<std::vector<Group>> groups_;
};

enum class FairnessMethod { exhaustive, trajectory, matching };
std::string to_string(FairnessMethod m);

struct FairnessReport {
    Direction direction;
    FairnessMethod method = FairnessMethod::exhaustive;
    bool pass = false;
    int L = 0;
    std::uint64_t configurations_checked = 0;
    std::optional<std::string> counterexample;
    std::int64_t plus_sum = 0;
    std::int64_t minus_sum = 0;
    // matching: (source rule, target rule) index pairs
    std::vector<std::pair<std::size_t, std::size_t>> matching;
    std::vector<std::size_t> unmatched;
    std::vector<std::size_t> condition_a_failures;
    std::string note;
};

std::string render(const FairnessReport& r, const UpdateFamily& family);

constexpr int kMaxExhaustiveLength = 24;

/// Checks sum_{plus} r_v <= sum_{minus} r_u for every configuration of the
/// segment; reports the lexicographically first violation.
FairnessReport presym_exhaustive(const UpdateFamily& family, const Direction& y, int L, unsigned workers = 1,
                                 int max_length = kMaxExhaustiveLength);

/// Runs segment erosions and checks the inequality after every jump.
FairnessReport presym_trajectory(const UpdateFamily& family, const Direction& y, int L, std::uint64_t trials,
                                 std::uint64_t seed, double time_cap = 1e12);

// A trajectory pass cannot certify fairness once the exhaustive scan failed.
FairnessReport downgrade(FairnessReport trajectory, const FairnessReport& exhaustive);

/// Sufficient drawing criterion: (a) every rule has at most one vertex on
/// l_y or one in H_{-y}; (b) an injection from rules X within H_y + {x}
/// (x on l_y) to rules within H_{-y} + {-x}.
FairnessReport matching_criterion(const UpdateFamily& family, const Direction& y);

using Rule1D = std::vector<std::int64_t>;

/// U' together with X(i,R) = {i e1} + {r e2 : r in R} for R in V and
/// X(-i,R) for R in W. Throws ValidationError naming the failing condition.
UpdateFamily induced_family(const UpdateFamily& u_prime, const std::vector<Rule1D>& V, const std::vector<Rule1D>& W,
                            std::int64_t i);

}  // namespace ufix
