#pragma once

#include <compare>
#include <ostream>
#include <string>

namespace ufix {

/// Positive reals far beyond double range, stored as x = exp^h(v).
///
/// Normal form: h is the smallest height whose mantissa is a finite double,
/// so h >= 1 implies v > log(DBL_MAX) and x exceeds every double. Height 0 is
/// a plain double (which may be zero or negative there).
class LevelIndex {
public:
    LevelIndex() = default;
    explicit LevelIndex(double v) : v_(v) {}
    static LevelIndex tower(int height, double mantissa);

    int height() const { return h_; }
    double mantissa() const { return v_; }
    bool is_double() const { return h_ == 0; }
    double to_double() const;
    // log10 of the value; +inf when that is not a double either.
    double log10() const;

    LevelIndex exp() const;
    // Natural log; the value must be positive.
    LevelIndex log() const;
    // a * x for a > 0 and x > 0.
    LevelIndex scaled(double a) const;

    // Sum of two non-negative values.
    friend LevelIndex operator+(const LevelIndex& x, const LevelIndex& y);
    friend bool operator==(const LevelIndex&, const LevelIndex&) = default;
    friend std::partial_ordering operator<=>(const LevelIndex& x, const LevelIndex& y);

    std::string str() const;

private:
    LevelIndex(int h, double v) : h_(h), v_(v) { normalize(); }
    void normalize();

    int h_ = 0;
    double v_ = 0;
};

// x / y as a double for 0 < x <= y; 0 once it underflows.
double ratio(const LevelIndex& x, const LevelIndex& y);

std::ostream& operator<<(std::ostream& os, const LevelIndex& x);

}  // namespace ufix
