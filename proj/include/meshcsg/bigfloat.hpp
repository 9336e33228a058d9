#ifndef MESHCSG_BIGFLOAT_HPP
#define MESHCSG_BIGFLOAT_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include <gmpxx.h>

#include "meshcsg/base.hpp"
#include "meshcsg/interval.hpp"

namespace meshcsg {

/// Multiprecision float: value = mantissa * 2^exponent, with the mantissa a
/// GMP integer constrained to have no trailing zero bit (lsb is 1), so every
/// value has exactly one representation. Zero is mantissa 0, exponent 0.
class BigFloat {
public:
    BigFloat() : m_(0), e_(0) {}

    static BigFloat from_double(double v) {
        if (!std::isfinite(v)) {
            throw InvalidInputError("non-finite double in BigFloat conversion");
        }
        if (v == 0.0) return BigFloat();
        int ex;
        double f = std::frexp(v, &ex);          // v = f * 2^ex, |f| in [0.5, 1)
        double scaled = std::ldexp(f, 53);      // 53-bit integer
        BigFloat r;
        r.m_ = static_cast<long>(scaled);
        r.e_ = static_cast<std::int64_t>(ex) - 53;
        r.normalize();
        return r;
    }

    static BigFloat from_int(long v) {
        BigFloat r;
        r.m_ = v;
        r.e_ = 0;
        r.normalize();
        return r;
    }

    const mpz_class& mantissa() const { return m_; }
    std::int64_t exponent() const { return e_; }

    bool is_zero() const { return sgn(m_) == 0; }
    Sign sign() const { return sign_from_int(sgn(m_)); }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        std::int64_t e = std::min(a.e_, b.e_);
        BigFloat r;
        r.m_ = shifted(a, e) + shifted(b, e);
        r.e_ = e;
        r.normalize();
        return r;
    }

    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
        return a + (-b);
    }

    BigFloat operator-() const {
        BigFloat r = *this;
        r.m_ = -r.m_;
        return r;
    }

    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
        if (a.is_zero() || b.is_zero()) return BigFloat();
        BigFloat r;
        r.m_ = a.m_ * b.m_;
        r.e_ = a.e_ + b.e_;
        r.normalize(); // odd*odd is odd; this only range-checks the exponent
        return r;
    }

    friend bool operator==(const BigFloat& a, const BigFloat& b) {
        // Unique representation: sign, then exponent, then mantissa.
        int sa = sgn(a.m_), sb = sgn(b.m_);
        if (sa != sb) return false;
        if (sa == 0) return true;
        return a.e_ == b.e_ && a.m_ == b.m_;
    }

    /// Sign of a - b through the fast-path cascade: differing signs answer
    /// immediately, then the magnitude of the leading bit, then the
    /// exponent-aligned mantissas.
    static Sign compare(const BigFloat& a, const BigFloat& b) {
        return compare_scaled(a, 0, b, 0);
    }

    /// Sign of a*2^sa - b*2^sb. Used for normalized homogeneous points that
    /// carry their exponent shift separately.
    static Sign compare_scaled(const BigFloat& a, std::int64_t sa,
                               const BigFloat& b, std::int64_t sb) {
        int sga = sgn(a.m_), sgb = sgn(b.m_);
        if (sga != sgb) return sign_from_int(sga < sgb ? -1 : 1);
        if (sga == 0) return ZERO;
        std::int64_t ha = a.e_ + sa + static_cast<std::int64_t>(mpz_sizeinbase(a.m_.get_mpz_t(), 2));
        std::int64_t hb = b.e_ + sb + static_cast<std::int64_t>(mpz_sizeinbase(b.m_.get_mpz_t(), 2));
        if (ha != hb) {
            return sign_from_int((ha > hb) ? sga : -sga);
        }
        std::int64_t ea = a.e_ + sa, eb = b.e_ + sb;
        std::int64_t e = std::min(ea, eb);
        mpz_class ma = a.m_ << static_cast<unsigned long>(ea - e);
        mpz_class mb = b.m_ << static_cast<unsigned long>(eb - e);
        return sign_from_int(cmp(ma, mb) < 0 ? -1 : (cmp(ma, mb) > 0 ? 1 : 0));
    }

    /// Nearest-double approximation (round to nearest even on the 54th bit).
    double nearest_double() const {
        if (is_zero()) return 0.0;
        int s = sgn(m_);
        mpz_class am = abs(m_);
        std::size_t bl = mpz_sizeinbase(am.get_mpz_t(), 2);
        if (bl <= 53) {
            double d = mpz_get_d(am.get_mpz_t()); // exact, fits 53 bits
            return std::ldexp(s * d, clamped_exp(e_));
        }
        std::size_t shift = bl - 54;
        mpz_class q;
        mpz_tdiv_q_2exp(q.get_mpz_t(), am.get_mpz_t(), shift);
        bool sticky = mpz_scan1(am.get_mpz_t(), 0) < shift;
        unsigned long q54 = mpz_get_ui(q.get_mpz_t()); // fits: 54 bits
        unsigned long guard = q54 & 1ul;
        std::uint64_t q53 = q54 >> 1;
        if (guard && (sticky || (q53 & 1ul))) ++q53;
        double d = static_cast<double>(q53);
        return std::ldexp(s * d, clamped_exp(e_ + static_cast<std::int64_t>(shift) + 1));
    }

    /// Both bounds start at the nearest double; any bound whose side is
    /// inexact widens one ulp until the exact value is enclosed.
    Interval to_interval() const {
        double d = nearest_double();
        constexpr double inf = std::numeric_limits<double>::infinity();
        if (!std::isfinite(d)) {
            return d > 0 ? Interval(std::numeric_limits<double>::max(), inf)
                         : Interval(-inf, -std::numeric_limits<double>::max());
        }
        double lo = d, hi = d;
        while (std::isfinite(lo) && compare(*this, from_double(lo)) == NEGATIVE) {
            lo = std::nextafter(lo, -inf);
        }
        while (std::isfinite(hi) && compare(*this, from_double(hi)) == POSITIVE) {
            hi = std::nextafter(hi, inf);
        }
        return Interval(lo, hi);
    }

    /// Raw-parts constructor; normalizes.
    BigFloat(mpz_class m, std::int64_t e) : m_(std::move(m)), e_(e) { normalize(); }

private:
    static constexpr std::int64_t max_align_shift = std::int64_t(1) << 26;

    static mpz_class shifted(const BigFloat& x, std::int64_t e) {
        std::int64_t k = x.e_ - e;
        if (k > max_align_shift) {
            throw KernelRangeError("BigFloat exponent alignment too large");
        }
        return k == 0 ? x.m_ : mpz_class(x.m_ << static_cast<unsigned long>(k));
    }

    static int clamped_exp(std::int64_t e) {
        if (e > std::numeric_limits<int>::max()) return std::numeric_limits<int>::max();
        if (e < std::numeric_limits<int>::min()) return std::numeric_limits<int>::min();
        return static_cast<int>(e);
    }

    void normalize() {
        if (sgn(m_) == 0) {
            e_ = 0;
            return;
        }
        unsigned long tz = mpz_scan1(m_.get_mpz_t(), 0);
        if (tz > 0) {
            m_ >>= tz;
            e_ += static_cast<std::int64_t>(tz);
        }
        if (e_ < std::numeric_limits<std::int32_t>::min() ||
            e_ > std::numeric_limits<std::int32_t>::max()) {
            throw KernelRangeError("BigFloat exponent outside 32-bit range");
        }
    }

    mpz_class m_;
    std::int64_t e_;
};

} // namespace meshcsg

#endif
