#include "ufix/level_index.hpp"

#include <cfloat>
#include <cmath>
#include <sstream>

#include "ufix/lattice.hpp"

namespace ufix {

namespace {
const double kMaxLog = std::log(DBL_MAX);
}

LevelIndex LevelIndex::tower(int height, double mantissa) {
    if (height < 0 || !std::isfinite(mantissa)) throw ValidationError("invalid level-index tower");
    return LevelIndex(height, mantissa);
}

void LevelIndex::normalize() {
    while (h_ > 0 && v_ <= kMaxLog) {
        v_ = std::exp(v_);
        --h_;
    }
}

double LevelIndex::to_double() const {
    if (h_ != 0) throw ValidationError("level-index value exceeds double range");
    return v_;
}

double LevelIndex::log10() const {
    if (h_ == 0) return std::log10(v_);
    if (h_ == 1) return v_ / std::log(10.0);
    return INFINITY;
}

LevelIndex LevelIndex::exp() const {
    if (h_ == 0 && v_ <= kMaxLog) return LevelIndex(std::exp(v_));
    return LevelIndex(h_ + 1, v_);
}

LevelIndex LevelIndex::log() const {
    if (h_ > 0) return LevelIndex(h_ - 1, v_);
    if (!(v_ > 0)) throw ValidationError("log of a non-positive value");
    return LevelIndex(std::log(v_));
}

LevelIndex LevelIndex::scaled(double a) const {
    if (!(a > 0)) throw ValidationError("scale factor must be positive");
    if (h_ == 0) {
        const double r = v_ * a;
        if (std::isfinite(r)) return LevelIndex(r);
        return LevelIndex(1, std::log(v_) + std::log(a));
    }
    // At height >= 2 the factor moves the mantissa by less than an ulp.
    if (h_ == 1) return LevelIndex(1, v_ + std::log(a));
    return *this;
}

LevelIndex operator+(const LevelIndex& x0, const LevelIndex& y0) {
    const auto& x = (x0 < y0) ? y0 : x0;  // larger
    const auto& y = (x0 < y0) ? x0 : y0;
    if (x.h_ == 0) {
        const double s = x.v_ + y.v_;
        if (std::isfinite(s)) return LevelIndex(s);
        return LevelIndex(1, std::log(x.v_) + std::log1p(y.v_ / x.v_));
    }
    if (x.h_ == 1) {
        const double ly = y.h_ == 1 ? y.v_ : (y.v_ > 0 ? std::log(y.v_) : -INFINITY);
        return LevelIndex(1, x.v_ + std::log1p(std::exp(ly - x.v_)));
    }
    return x;
}

std::partial_ordering operator<=>(const LevelIndex& x, const LevelIndex& y) {
    if (x.h_ != y.h_) return x.h_ <=> y.h_;
    return x.v_ <=> y.v_;
}

double ratio(const LevelIndex& x, const LevelIndex& y) {
    if (x.is_double() && y.is_double()) return x.mantissa() / y.mantissa();
    if (x == y) return 1.0;
    const auto lx = x.log(), ly = y.log();
    if (lx.is_double() && ly.is_double()) return std::exp(lx.to_double() - ly.to_double());
    return 0.0;
}

std::string LevelIndex::str() const {
    std::ostringstream os;
    os.precision(10);
    if (h_ == 0)
        os << v_;
    else
        os << "exp^" << h_ << "(" << v_ << ")";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const LevelIndex& x) { return os << x.str(); }

}  // namespace ufix
