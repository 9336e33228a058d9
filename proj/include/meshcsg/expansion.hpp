#ifndef MESHCSG_EXPANSION_HPP
#define MESHCSG_EXPANSION_HPP

#include <cmath>
#include <cstddef>
#include <limits>

#include <boost/container/small_vector.hpp>

#include "meshcsg/base.hpp"
#include "meshcsg/interval.hpp"

namespace meshcsg {

struct TwoFloat {
    double hi;
    double lo;
};

/// Rounded sum and exact round-off error (Knuth's branch-free version,
/// valid for any magnitude ordering).
inline TwoFloat two_sum(double a, double b) {
    double s  = a + b;
    double bv = s - a;
    double av = s - bv;
    double br = b - bv;
    double ar = a - av;
    return {s, ar + br};
}

/// Dekker's variant, requires |a| >= |b|.
inline TwoFloat fast_two_sum(double a, double b) {
    double s  = a + b;
    double bv = s - a;
    return {s, b - bv};
}

/// Rounded product and exact round-off error. With fma this is two
/// instructions; the 13-instruction splitting fallback is never needed on
/// targets with a correctly rounded std::fma.
inline TwoFloat two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

namespace detail {
// Below this magnitude the round-off error of a product may fall outside
// the representable range, so two_prod would be silently inexact.
inline constexpr double two_prod_underflow_guard = 0x1p-967;

inline void check_product_range(double hi, double a, double b) {
    if (!std::isfinite(hi)) {
        throw KernelRangeError("expansion product overflow; retry with the mpfloat kernel");
    }
    if (hi == 0.0 ? (a != 0.0 && b != 0.0)
                  : std::fabs(hi) < two_prod_underflow_guard) {
        throw KernelRangeError("expansion product underflow; retry with the mpfloat kernel");
    }
}
} // namespace detail

/// A number stored as a sum of non-overlapping doubles, kept in decreasing
/// magnitude order so the sign is the sign of the first component.
/// Zero is canonically a single 0.0 component.
class Expansion {
public:
    using Storage = boost::container::small_vector<double, 8>;

    Expansion() : c_(1, 0.0) {}

    static Expansion from_double(double v) {
        Expansion e;
        if (v != 0.0) e.c_[0] = v;
        return e;
    }

    /// Exact a + b as an expansion.
    static Expansion sum(double a, double b) {
        TwoFloat s = two_sum(a, b);
        return from_parts(s);
    }

    /// Exact a - b as an expansion.
    static Expansion diff(double a, double b) { return sum(a, -b); }

    /// Exact a * b as an expansion.
    static Expansion prod(double a, double b) {
        TwoFloat p = two_prod(a, b);
        detail::check_product_range(p.hi, a, b);
        return from_parts(p);
    }

    std::size_t size() const { return c_.size(); }
    double component(std::size_t i) const { return c_[i]; }
    const Storage& components() const { return c_; }

    Sign sign() const { return sign_of(c_[0]); }
    bool is_zero() const { return c_[0] == 0.0; }

    /// Round-to-nearest-ish estimate, summing small components first.
    double estimate() const {
        double s = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) s += c_[i];
        return s;
    }

    friend Expansion operator+(const Expansion& a, const Expansion& b) {
        return fast_expansion_sum(a, b);
    }

    friend Expansion operator-(const Expansion& a, const Expansion& b) {
        return fast_expansion_sum(a, -b);
    }

    Expansion operator-() const {
        Expansion r = *this;
        if (!r.is_zero()) {
            for (double& v : r.c_) v = -v;
        }
        return r;
    }

    friend Expansion operator*(const Expansion& a, const Expansion& b) {
        if (a.is_zero() || b.is_zero()) return Expansion();
        const Expansion& small = (a.size() <= b.size()) ? a : b;
        const Expansion& big   = (a.size() <= b.size()) ? b : a;
        return mul_rec(big, small, 0, small.size());
    }

    /// Two-pass sweep that merges components whose rounded sum is exact,
    /// preserving the value. Output components are non-adjacent, so the
    /// tail after the leading component is below one ulp of it. The sweep
    /// is iterated to its fixed point so that compressing a compressed
    /// expansion is the identity.
    Expansion compressed() const {
        Expansion cur = two_pass_compress();
        for (int pass = 0; pass < 8; ++pass) {
            Expansion next = cur.two_pass_compress();
            if (next.c_ == cur.c_) return cur;
            cur = std::move(next);
        }
        return cur;
    }

private:
    Expansion two_pass_compress() const {
        const std::size_t n = c_.size();
        if (n == 1) return *this;
        Storage g(n, 0.0);
        std::size_t gpos = 0;
        double q_big = c_[0];
        for (std::size_t j = 1; j < n; ++j) {
            TwoFloat s = fast_two_sum(q_big, c_[j]);
            q_big = s.hi;
            if (s.lo != 0.0) {
                g[gpos++] = s.hi;
                q_big = s.lo;
            }
        }
        g[gpos] = q_big;
        // second sweep, smallest to largest
        Storage h;
        h.reserve(gpos + 1);
        double q = g[gpos];
        for (std::size_t j = gpos; j-- > 0;) {
            TwoFloat s = fast_two_sum(g[j], q);
            q = s.hi;
            if (s.lo != 0.0) h.push_back(s.lo);
        }
        return from_ascending(q, h);
    }

public:
    Interval to_interval() const {
        Expansion c = compressed();
        double lead = c.c_[0];
        if (!std::isfinite(lead)) return Interval::whole_line();
        if (c.size() == 1) return Interval(lead);
        // Remaining components sum to less than one ulp of the leading one.
        constexpr double inf = std::numeric_limits<double>::infinity();
        return Interval(std::nextafter(lead, -inf), std::nextafter(lead, inf));
    }

    /// Invariant audit used by tests and debug assertions: finite
    /// components, decreasing magnitude, bit ranges pairwise disjoint.
    bool valid() const {
        if (c_.empty()) return false;
        if (c_.size() > 1 && c_[0] == 0.0) return false;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (!std::isfinite(c_[i])) return false;
            if (i > 0) {
                if (c_[i] == 0.0) return false;
                if (std::fabs(c_[i]) >= std::fabs(c_[i - 1])) return false;
                if (msb_exp(c_[i]) >= lsb_exp(c_[i - 1])) return false;
            }
        }
        return true;
    }

private:
    static Expansion from_parts(TwoFloat p) {
        if (!std::isfinite(p.hi)) {
            throw KernelRangeError("expansion component overflow");
        }
        Expansion e;
        if (p.hi == 0.0) return e;
        e.c_[0] = p.hi;
        if (p.lo != 0.0) e.c_.push_back(p.lo);
        return e;
    }

    void check_range() const {
        if (!std::isfinite(c_[0])) {
            throw KernelRangeError("expansion overflow; retry with the mpfloat kernel");
        }
    }

    static int msb_exp(double v) {
        int e;
        std::frexp(v, &e);
        return e - 1; // frexp mantissa in [0.5,1)
    }

    static int lsb_exp(double v) {
        int e = msb_exp(v);
        std::uint64_t m = static_cast<std::uint64_t>(
            std::fabs(std::ldexp(v, 52 - e)));
        int tz = 0;
        while ((m & 1u) == 0u && tz < 52) {
            m >>= 1;
            ++tz;
        }
        return e - 52 + tz;
    }

    // Shewchuk's fast expansion sum with zero elimination; inputs and
    // output are in decreasing magnitude order, so the merge walks both
    // inputs from the back.
    static Expansion fast_expansion_sum(const Expansion& ea, const Expansion& eb) {
        if (ea.is_zero()) return eb;
        if (eb.is_zero()) return ea;
        const Storage& e = ea.c_;
        const Storage& f = eb.c_;
        std::size_t ei = e.size(); // walks e from smallest (back) to largest
        std::size_t fi = f.size();
        Storage asc; // result, ascending magnitude while built
        asc.reserve(e.size() + f.size());

        auto next_smallest = [&]() -> double {
            if (ei == 0) return f[--fi];
            if (fi == 0) return e[--ei];
            if (std::fabs(e[ei - 1]) <= std::fabs(f[fi - 1])) return e[--ei];
            return f[--fi];
        };

        double q = next_smallest();
        if (ei + fi > 0) {
            TwoFloat s = fast_two_sum(next_smallest(), q);
            q = s.hi;
            if (s.lo != 0.0) asc.push_back(s.lo);
            while (ei + fi > 0) {
                s = two_sum(q, next_smallest());
                q = s.hi;
                if (s.lo != 0.0) asc.push_back(s.lo);
            }
        }
        return from_ascending(q, asc);
    }

    // Shewchuk's scale-expansion with zero elimination (e * scalar b).
    static Expansion scale(const Expansion& e, double b) {
        if (e.is_zero() || b == 0.0) return Expansion();
        const Storage& c = e.c_;
        Storage asc;
        asc.reserve(2 * c.size());
        std::size_t i = c.size() - 1; // smallest first
        TwoFloat p = two_prod(c[i], b);
        detail::check_product_range(p.hi, c[i], b);
        double q = p.hi;
        if (p.lo != 0.0) asc.push_back(p.lo);
        while (i-- > 0) {
            TwoFloat t = two_prod(c[i], b);
            detail::check_product_range(t.hi, c[i], b);
            TwoFloat s1 = two_sum(q, t.lo);
            if (s1.lo != 0.0) asc.push_back(s1.lo);
            TwoFloat s2 = fast_two_sum(t.hi, s1.hi);
            q = s2.hi;
            if (s2.lo != 0.0) asc.push_back(s2.lo);
        }
        return from_ascending(q, asc);
    }

    // Assembles the decreasing-order result from the final running sum q
    // and the low-order parts collected in ascending magnitude order.
    // A zero q is dropped unless the whole value is zero.
    static Expansion from_ascending(double q, const Storage& asc) {
        Expansion r; // starts as {0.0}
        std::size_t n = asc.size() + (q != 0.0 ? 1 : 0);
        if (n == 0) return r;
        r.c_.resize(n);
        std::size_t pos = 0;
        if (q != 0.0) r.c_[pos++] = q;
        for (std::size_t j = asc.size(); j-- > 0;) r.c_[pos++] = asc[j];
        r.check_range();
        return r;
    }

    // Distillation product: scale by each component of the shorter operand,
    // summing partial products as a balanced tree.
    static Expansion mul_rec(const Expansion& big, const Expansion& small,
                             std::size_t b, std::size_t e) {
        if (e - b == 1) return scale(big, small.c_[b]);
        std::size_t m = b + (e - b) / 2;
        return mul_rec(big, small, b, m) + mul_rec(big, small, m, e);
    }

    Storage c_;
};

} // namespace meshcsg

#endif
