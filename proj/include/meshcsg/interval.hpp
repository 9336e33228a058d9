#ifndef MESHCSG_INTERVAL_HPP
#define MESHCSG_INTERVAL_HPP

#include <cmath>
#include <limits>
#include <optional>

#include "meshcsg/base.hpp"

namespace meshcsg {

/// Closed interval [lo, hi] guaranteed to contain an exact value.
/// Arithmetic runs in round-to-nearest and widens each bound by one ulp,
/// which keeps every operation an enclosure without touching the FPU
/// rounding mode (results stay valid across threads and compilers).
class Interval {
public:
    Interval() : lo_(0.0), hi_(0.0) {}
    explicit Interval(double v) : lo_(v), hi_(v) {
        if (!std::isfinite(v)) { *this = whole_line(); }
    }
    Interval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (std::isnan(lo) || std::isnan(hi)) { *this = whole_line(); }
    }

    static Interval whole_line() {
        return Interval(-std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity());
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double midpoint() const {
        double m = 0.5 * (lo_ + hi_);
        if (std::isfinite(m)) return m;
        if (lo_ == -hi_) return 0.0;
        return std::isfinite(lo_) ? lo_ : hi_;
    }

    bool contains(double v) const { return lo_ <= v && v <= hi_; }

    std::optional<Sign> certain_sign() const {
        if (lo_ > 0.0) return POSITIVE;
        if (hi_ < 0.0) return NEGATIVE;
        if (lo_ == 0.0 && hi_ == 0.0) return ZERO;
        return std::nullopt;
    }

    friend Interval operator-(const Interval& a) {
        return Interval(-a.hi_, -a.lo_);
    }

    friend Interval operator+(const Interval& a, const Interval& b) {
        return Interval(down(a.lo_ + b.lo_), up(a.hi_ + b.hi_));
    }

    friend Interval operator-(const Interval& a, const Interval& b) {
        return a + (-b);
    }

    friend Interval operator*(const Interval& a, const Interval& b) {
        double p1 = a.lo_ * b.lo_;
        double p2 = a.lo_ * b.hi_;
        double p3 = a.hi_ * b.lo_;
        double p4 = a.hi_ * b.hi_;
        if (std::isnan(p1) || std::isnan(p2) || std::isnan(p3) || std::isnan(p4)) {
            return whole_line();
        }
        return Interval(down(std::fmin(std::fmin(p1, p2), std::fmin(p3, p4))),
                        up(std::fmax(std::fmax(p1, p2), std::fmax(p3, p4))));
    }

    Interval squared() const {
        double m1 = std::fabs(lo_);
        double m2 = std::fabs(hi_);
        double big = std::fmax(m1, m2);
        double small = std::fmin(m1, m2);
        double lo = contains(0.0) ? 0.0 : down(small * small);
        double hi = up(big * big);
        if (std::isnan(hi)) return whole_line();
        return Interval(lo, hi);
    }

private:
    static double down(double x) {
        return x == -std::numeric_limits<double>::infinity()
                   ? x
                   : std::nextafter(x, -std::numeric_limits<double>::infinity());
    }
    static double up(double x) {
        return x == std::numeric_limits<double>::infinity()
                   ? x
                   : std::nextafter(x, std::numeric_limits<double>::infinity());
    }

    double lo_;
    double hi_;
};

} // namespace meshcsg

#endif
