#ifndef MESHCSG_HPOINT_HPP
#define MESHCSG_HPOINT_HPP

#include <array>
#include <atomic>
#include <cstdint>
#include <utility>

#include "meshcsg/base.hpp"
#include "meshcsg/kernel.hpp"

namespace meshcsg {

namespace detail {

/// Canonicalizes BigFloat homogeneous coordinates: mantissas divided by
/// their common (odd) gcd, last coordinate positive, and the exponent of
/// the last coordinate carried out as a separate shift so comparisons only
/// shift by differences. Expansion coordinates are left untouched.
template <std::size_t N>
inline std::int64_t normalize_homogeneous(std::array<BigFloat, N>& c) {
    mpz_class g = 0;
    for (const BigFloat& v : c) {
        if (!v.is_zero()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.mantissa().get_mpz_t());
    }
    bool flip = c[N - 1].sign() == NEGATIVE;
    if (flip) g = -g;
    if (g != 1) {
        for (BigFloat& v : c) {
            if (v.is_zero()) continue;
            mpz_class m;
            mpz_divexact(m.get_mpz_t(), v.mantissa().get_mpz_t(), g.get_mpz_t());
            v = BigFloat(std::move(m), v.exponent());
        }
    }
    return c[N - 1].exponent();
}

template <std::size_t N>
inline std::int64_t normalize_homogeneous(std::array<Expansion, N>&) {
    return 0;
}

} // namespace detail

/// 3D point in homogeneous exact coordinates: cartesian value is
/// (x/w, y/w, z/w), w != 0. Immutable after construction; per-coordinate
/// intervals are cached on first use (duplicate concurrent computation is
/// harmless, publication is release/acquire).
template <Kernel K>
class HPoint3 {
public:
    using X = typename K::Exact;

    HPoint3() : HPoint3(X::from_double(0), X::from_double(0), X::from_double(0), X::from_double(1)) {}

    HPoint3(X x, X y, X z, X w)
        : c_{K::compress(std::move(x)), K::compress(std::move(y)),
             K::compress(std::move(z)), K::compress(std::move(w))} {
        if (c_[3].is_zero()) {
            throw DegenerateConstructionError("homogeneous point with w = 0");
        }
        shift_ = detail::normalize_homogeneous(c_);
    }

    static HPoint3 from_double(const Vec3d& p) {
        if (!p.finite()) throw InvalidInputError("non-finite point coordinate");
        return HPoint3(X::from_double(p.x), X::from_double(p.y),
                       X::from_double(p.z), X::from_double(1.0));
    }

    const X& x() const { return c_[0]; }
    const X& y() const { return c_[1]; }
    const X& z() const { return c_[2]; }
    const X& w() const { return c_[3]; }
    const X& coord(int i) const { return c_[std::size_t(i)]; }
    std::int64_t shift() const { return shift_; }

    const std::array<Interval, 4>& intervals() const {
        if (!has_iv_.load(std::memory_order_acquire)) {
            std::array<Interval, 4> iv{c_[0].to_interval(), c_[1].to_interval(),
                                       c_[2].to_interval(), c_[3].to_interval()};
            iv_ = iv;
            has_iv_.store(true, std::memory_order_release);
        }
        return iv_;
    }

    /// Double approximation of the cartesian value (midpoints of the
    /// coordinate intervals). Not snap rounding: no topology guarantee.
    Vec3d approx() const {
        const auto& iv = intervals();
        double w = iv[3].midpoint();
        return {iv[0].midpoint() / w, iv[1].midpoint() / w, iv[2].midpoint() / w};
    }

    bool approx_exact() const {
        const auto& iv = intervals();
        for (int i = 0; i < 4; ++i) {
            if (iv[std::size_t(i)].lo() != iv[std::size_t(i)].hi()) return false;
        }
        return true;
    }

    HPoint3(const HPoint3& o) : c_(o.c_), shift_(o.shift_) {
        if (o.has_iv_.load(std::memory_order_acquire)) {
            iv_ = o.iv_;
            has_iv_.store(true, std::memory_order_relaxed);
        }
    }
    HPoint3& operator=(const HPoint3& o) {
        if (this != &o) {
            c_ = o.c_;
            shift_ = o.shift_;
            if (o.has_iv_.load(std::memory_order_acquire)) {
                iv_ = o.iv_;
                has_iv_.store(true, std::memory_order_relaxed);
            } else {
                has_iv_.store(false, std::memory_order_relaxed);
            }
        }
        return *this;
    }
    HPoint3(HPoint3&& o) noexcept : HPoint3(static_cast<const HPoint3&>(o)) {}
    HPoint3& operator=(HPoint3&& o) noexcept { return *this = static_cast<const HPoint3&>(o); }

private:
    std::array<X, 4> c_;
    std::int64_t shift_ = 0;
    mutable std::array<Interval, 4> iv_{};
    mutable std::atomic<bool> has_iv_{false};
};

/// 2D point in homogeneous exact coordinates, produced by dropping the
/// dominant axis of a facet.
template <Kernel K>
class HPoint2 {
public:
    using X = typename K::Exact;

    HPoint2(X x, X y, X w)
        : c_{K::compress(std::move(x)), K::compress(std::move(y)), K::compress(std::move(w))} {
        if (c_[2].is_zero()) {
            throw DegenerateConstructionError("homogeneous 2D point with w = 0");
        }
        shift_ = detail::normalize_homogeneous(c_);
    }

    static HPoint2 from_double(double x, double y) {
        return HPoint2(X::from_double(x), X::from_double(y), X::from_double(1.0));
    }

    const X& x() const { return c_[0]; }
    const X& y() const { return c_[1]; }
    const X& w() const { return c_[2]; }
    std::int64_t shift() const { return shift_; }

    const std::array<Interval, 3>& intervals() const {
        if (!has_iv_.load(std::memory_order_acquire)) {
            std::array<Interval, 3> iv{c_[0].to_interval(), c_[1].to_interval(),
                                       c_[2].to_interval()};
            iv_ = iv;
            has_iv_.store(true, std::memory_order_release);
        }
        return iv_;
    }

    HPoint2(const HPoint2& o) : c_(o.c_), shift_(o.shift_) {
        if (o.has_iv_.load(std::memory_order_acquire)) {
            iv_ = o.iv_;
            has_iv_.store(true, std::memory_order_relaxed);
        }
    }
    HPoint2& operator=(const HPoint2& o) {
        if (this != &o) {
            c_ = o.c_;
            shift_ = o.shift_;
            if (o.has_iv_.load(std::memory_order_acquire)) {
                iv_ = o.iv_;
                has_iv_.store(true, std::memory_order_relaxed);
            } else {
                has_iv_.store(false, std::memory_order_relaxed);
            }
        }
        return *this;
    }
    HPoint2(HPoint2&& o) noexcept : HPoint2(static_cast<const HPoint2&>(o)) {}
    HPoint2& operator=(HPoint2&& o) noexcept { return *this = static_cast<const HPoint2&>(o); }

private:
    std::array<X, 3> c_;
    std::int64_t shift_ = 0;
    mutable std::array<Interval, 3> iv_{};
    mutable std::atomic<bool> has_iv_{false};
};

template <Kernel K>
struct Rational {
    typename K::Exact num;
    typename K::Exact den; // != 0
};

/// Projects a 3D homogeneous point to 2D by keeping the two axes cyclically
/// following the dropped one.
template <Kernel K>
HPoint2<K> project_point(const HPoint3<K>& p, int dropped_axis) {
    int a = (dropped_axis + 1) % 3;
    int b = (dropped_axis + 2) % 3;
    return HPoint2<K>(p.coord(a), p.coord(b), p.w());
}

} // namespace meshcsg

#endif
