#ifndef MESHCSG_PREDICATES_HPP
#define MESHCSG_PREDICATES_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <unordered_map>

#include "meshcsg/base.hpp"
#include "meshcsg/hpoint.hpp"
#include "meshcsg/interval.hpp"
#include "meshcsg/kernel.hpp"

namespace meshcsg {

namespace predicates_detail {

/// Test hook: when set, every filtered predicate also runs the exact path
/// and cross-checks any certain filter answer against it.
inline std::atomic<bool> g_force_exact{false};

inline std::optional<Sign> maybe_sign(const Interval& v) { return v.certain_sign(); }

template <ExactNumber X>
std::optional<Sign> maybe_sign(const X& v) { return v.sign(); }

inline std::optional<Sign> opt_mul(std::optional<Sign> a, std::optional<Sign> b) {
    if (!a || !b) return std::nullopt;
    return *a * *b;
}

template <class T> struct D2 { T x, y, w; };
template <class T> struct D3 { T x, y, z, w; };

// Homogeneous difference b - a with the equal-w fast path. The flag comes
// from an exact test so the interval and exact evaluations take the same
// branch. cp is the per-kernel compress hook (identity on intervals).
template <class P, class C>
auto hdiff2(const P& a, const P& b, bool eqw, C&& cp) {
    using T = std::decay_t<decltype(cp(b.x() - a.x()))>;
    if (eqw) {
        return D2<T>{cp(b.x() - a.x()), cp(b.y() - a.y()), cp(T(b.w()))};
    }
    return D2<T>{cp(a.w() * b.x() - b.w() * a.x()),
                 cp(a.w() * b.y() - b.w() * a.y()),
                 cp(a.w() * b.w())};
}

template <class P, class C>
auto hdiff3(const P& a, const P& b, bool eqw, C&& cp) {
    using T = std::decay_t<decltype(cp(b.x() - a.x()))>;
    if (eqw) {
        return D3<T>{cp(b.x() - a.x()), cp(b.y() - a.y()), cp(b.z() - a.z()),
                     cp(T(b.w()))};
    }
    return D3<T>{cp(a.w() * b.x() - b.w() * a.x()),
                 cp(a.w() * b.y() - b.w() * a.y()),
                 cp(a.w() * b.z() - b.w() * a.z()),
                 cp(a.w() * b.w())};
}

template <class P, class C>
std::optional<Sign> orient2d_eval(const P& p0, const P& p1, const P& p2,
                                  bool eq1, bool eq2, C&& cp) {
    auto U = hdiff2(p0, p1, eq1, cp);
    auto V = hdiff2(p0, p2, eq2, cp);
    auto det = cp(U.x * V.y - U.y * V.x);
    return opt_mul(opt_mul(maybe_sign(det), maybe_sign(U.w)), maybe_sign(V.w));
}

template <class P, class C>
std::optional<Sign> orient3d_eval(const P& p0, const P& p1, const P& p2, const P& p3,
                                  bool eq1, bool eq2, bool eq3, C&& cp) {
    auto U = hdiff3(p0, p1, eq1, cp);
    auto V = hdiff3(p0, p2, eq2, cp);
    auto W = hdiff3(p0, p3, eq3, cp);
    auto det = cp(U.x * (V.y * W.z - V.z * W.y)
                - U.y * (V.x * W.z - V.z * W.x)
                + U.z * (V.x * W.y - V.y * W.x));
    return opt_mul(opt_mul(opt_mul(maybe_sign(det), maybe_sign(U.w)),
                           maybe_sign(V.w)),
                   maybe_sign(W.w));
}

// Views adapting cached coordinate intervals to the point interface.
struct IvP2 {
    const std::array<Interval, 3>* a;
    const Interval& x() const { return (*a)[0]; }
    const Interval& y() const { return (*a)[1]; }
    const Interval& w() const { return (*a)[2]; }
};
struct IvP3 {
    const std::array<Interval, 4>* a;
    const Interval& x() const { return (*a)[0]; }
    const Interval& y() const { return (*a)[1]; }
    const Interval& z() const { return (*a)[2]; }
    const Interval& w() const { return (*a)[3]; }
};
struct DblP3 {
    Vec3d p;
    Interval x() const { return Interval(p.x); }
    Interval y() const { return Interval(p.y); }
    Interval z() const { return Interval(p.z); }
    Interval w() const { return Interval(1.0); }
};

template <Kernel K>
struct ExactP3view {
    typename K::Exact ex, ey, ez, ew;
    const typename K::Exact& x() const { return ex; }
    const typename K::Exact& y() const { return ey; }
    const typename K::Exact& z() const { return ez; }
    const typename K::Exact& w() const { return ew; }
    static ExactP3view from(const Vec3d& p) {
        using X = typename K::Exact;
        return {X::from_double(p.x), X::from_double(p.y), X::from_double(p.z),
                X::from_double(1.0)};
    }
};

struct IdentityC {
    template <class T> T operator()(T v) const { return v; }
};
template <Kernel K>
struct CompressC {
    typename K::Exact operator()(typename K::Exact v) const { return K::compress(std::move(v)); }
};

inline void crosscheck(std::optional<Sign> filtered, Sign exact) {
    if (filtered && *filtered != exact) {
        throw std::logic_error("interval filter contradicts exact predicate");
    }
}

} // namespace predicates_detail

inline void set_force_exact_predicate_checks(bool on) {
    predicates_detail::g_force_exact.store(on);
}
inline bool force_exact_predicate_checks() {
    return predicates_detail::g_force_exact.load();
}

/// Sign of the 2D orientation of the cartesian triangle (POSITIVE = CCW).
template <Kernel K>
Sign orient2d(const HPoint2<K>& p0, const HPoint2<K>& p1, const HPoint2<K>& p2) {
    namespace pd = predicates_detail;
    bool eq1 = K::trivially_equal(p1.w(), p0.w());
    bool eq2 = K::trivially_equal(p2.w(), p0.w());
    pd::IvP2 i0{&p0.intervals()}, i1{&p1.intervals()}, i2{&p2.intervals()};
    auto filtered = pd::orient2d_eval(i0, i1, i2, eq1, eq2, pd::IdentityC{});
    if (filtered && !force_exact_predicate_checks()) return *filtered;
    Sign exact = *pd::orient2d_eval(p0, p1, p2, eq1, eq2, pd::CompressC<K>{});
    pd::crosscheck(filtered, exact);
    return exact;
}

/// Sign of the signed volume of the cartesian tetrahedron (POSITIVE =
/// right-handed).
template <Kernel K>
Sign orient3d(const HPoint3<K>& p0, const HPoint3<K>& p1, const HPoint3<K>& p2,
              const HPoint3<K>& p3) {
    namespace pd = predicates_detail;
    bool eq1 = K::trivially_equal(p1.w(), p0.w());
    bool eq2 = K::trivially_equal(p2.w(), p0.w());
    bool eq3 = K::trivially_equal(p3.w(), p0.w());
    pd::IvP3 i0{&p0.intervals()}, i1{&p1.intervals()}, i2{&p2.intervals()},
        i3{&p3.intervals()};
    auto filtered = pd::orient3d_eval(i0, i1, i2, i3, eq1, eq2, eq3, pd::IdentityC{});
    if (filtered && !force_exact_predicate_checks()) return *filtered;
    Sign exact = *pd::orient3d_eval(p0, p1, p2, p3, eq1, eq2, eq3, pd::CompressC<K>{});
    pd::crosscheck(filtered, exact);
    return exact;
}

/// orient3d on input-mesh points with double coordinates (w = 1).
template <Kernel K>
Sign orient3d(const Vec3d& p0, const Vec3d& p1, const Vec3d& p2, const Vec3d& p3) {
    namespace pd = predicates_detail;
    pd::DblP3 i0{p0}, i1{p1}, i2{p2}, i3{p3};
    auto filtered = pd::orient3d_eval(i0, i1, i2, i3, true, true, true, pd::IdentityC{});
    if (filtered && !force_exact_predicate_checks()) return *filtered;
    auto e0 = pd::ExactP3view<K>::from(p0);
    auto e1 = pd::ExactP3view<K>::from(p1);
    auto e2 = pd::ExactP3view<K>::from(p2);
    auto e3 = pd::ExactP3view<K>::from(p3);
    Sign exact = *pd::orient3d_eval(e0, e1, e2, e3, true, true, true, pd::CompressC<K>{});
    pd::crosscheck(filtered, exact);
    return exact;
}

/// orient2d on projected double coordinates (w = 1).
template <Kernel K>
Sign orient2d(double x0, double y0, double x1, double y1, double x2, double y2) {
    namespace pd = predicates_detail;
    // a + (b - c) pattern: exact double differences via the kernel
    Interval d1x = Interval(x1) - Interval(x0), d1y = Interval(y1) - Interval(y0);
    Interval d2x = Interval(x2) - Interval(x0), d2y = Interval(y2) - Interval(y0);
    auto filtered = (d1x * d2y - d1y * d2x).certain_sign();
    if (filtered && !force_exact_predicate_checks()) return *filtered;
    using X = typename K::Exact;
    X det = K::diff(x1, x0) * K::diff(y2, y0) - K::diff(y1, y0) * K::diff(x2, x0);
    Sign exact = det.sign();
    predicates_detail::crosscheck(filtered, exact);
    return exact;
}

/// sign(x1/w1 - x2/w2) without division, with the three documented fast
/// paths (both numerators zero, differing value signs, equal denominators).
template <Kernel K>
Sign ratio_compare(const typename K::Exact& x1, const typename K::Exact& w1,
                   const typename K::Exact& x2, const typename K::Exact& w2,
                   const Interval* ix1 = nullptr, const Interval* iw1 = nullptr,
                   const Interval* ix2 = nullptr, const Interval* iw2 = nullptr) {
    if (x1.is_zero() && x2.is_zero()) return ZERO;
    Sign v1 = x1.sign() * w1.sign();
    Sign v2 = x2.sign() * w2.sign();
    if (v1 != v2) return (sign_int(v1) < sign_int(v2)) ? NEGATIVE : POSITIVE;
    if (K::trivially_equal(w1, w2)) {
        return (x1 - x2).sign() * w1.sign();
    }
    Sign sw = w1.sign() * w2.sign();
    if (ix1 && iw1 && ix2 && iw2) {
        auto f = ((*iw2) * (*ix1) - (*iw1) * (*ix2)).certain_sign();
        if (f && !force_exact_predicate_checks()) return sw * *f;
        Sign exact = K::compress(w2 * x1 - w1 * x2).sign();
        predicates_detail::crosscheck(f, exact);
        return sw * exact;
    }
    return sw * K::compress(w2 * x1 - w1 * x2).sign();
}

/// Total order used by the global vertex table and the symbolic
/// perturbation: cartesian lexicographic under the expansion kernel,
/// normalized-representation lexicographic (shift aware) under mpfloat.
template <Kernel K>
Sign point_lexico_compare(const HPoint3<K>& p, const HPoint3<K>& q) {
    if constexpr (K::normalized_points) {
        for (int i = 0; i < 4; ++i) {
            Sign s = BigFloat::compare_scaled(p.coord(i), -p.shift(),
                                              q.coord(i), -q.shift());
            if (s != ZERO) return s;
        }
        return ZERO;
    } else {
        const auto& ip = p.intervals();
        const auto& iq = q.intervals();
        for (int i = 0; i < 3; ++i) {
            Sign s = ratio_compare<K>(p.coord(i), p.w(), q.coord(i), q.w(),
                                      &ip[std::size_t(i)], &ip[3], &iq[std::size_t(i)], &iq[3]);
            if (s != ZERO) return s;
        }
        return ZERO;
    }
}

template <Kernel K>
Sign point_lexico_compare(const HPoint2<K>& p, const HPoint2<K>& q) {
    if constexpr (K::normalized_points) {
        Sign s = BigFloat::compare_scaled(p.x(), -p.shift(), q.x(), -q.shift());
        if (s != ZERO) return s;
        s = BigFloat::compare_scaled(p.y(), -p.shift(), q.y(), -q.shift());
        if (s != ZERO) return s;
        return BigFloat::compare_scaled(p.w(), -p.shift(), q.w(), -q.shift());
    } else {
        const auto& ip = p.intervals();
        const auto& iq = q.intervals();
        Sign s = ratio_compare<K>(p.x(), p.w(), q.x(), q.w(), &ip[0], &ip[2], &iq[0], &iq[2]);
        if (s != ZERO) return s;
        return ratio_compare<K>(p.y(), p.w(), q.y(), q.w(), &ip[1], &ip[2], &iq[1], &iq[2]);
    }
}

template <Kernel K>
bool points_equal(const HPoint3<K>& p, const HPoint3<K>& q) {
    return point_lexico_compare<K>(p, q) == ZERO;
}

namespace predicates_detail {

// Signed cofactor scan for the symbolic perturbation: the perturbed
// lifting l_k + eps^{rank(p_k)} contributes (-1)^k eps^{rank} times the
// orientation determinant of the other three arguments.
template <Kernel K>
Sign incircle_sos(const std::array<const HPoint2<K>*, 4>& p) {
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return point_lexico_compare<K>(*p[std::size_t(a)], *p[std::size_t(b)]) == NEGATIVE;
    });
    for (int j : order) {
        Sign m;
        switch (j) {
        case 0: m = orient2d<K>(*p[1], *p[2], *p[3]); break;
        case 1: m = orient2d<K>(*p[0], *p[2], *p[3]); break;
        case 2: m = orient2d<K>(*p[0], *p[1], *p[3]); break;
        default: m = orient2d<K>(*p[0], *p[1], *p[2]); break;
        }
        Sign term = (j % 2 == 0) ? m : -m;
        if (term != ZERO) return term;
    }
    throw DegenerateInputError("in_circle on four collinear points");
}

template <class P, class LT, class C>
std::optional<Sign> incircle_rounded_eval(const P& p0, const P& p1, const P& p2, const P& p3,
                                          const LT& L0, const LT& L1, const LT& L2,
                                          const std::array<bool, 3>& eq, C&& cp) {
    auto D0 = hdiff2(p3, p0, eq[0], cp);
    auto D1 = hdiff2(p3, p1, eq[1], cp);
    auto D2 = hdiff2(p3, p2, eq[2], cp);
    auto d12 = cp(D1.x * D2.y - D2.x * D1.y);
    auto d02 = cp(D0.x * D2.y - D2.x * D0.y);
    auto d01 = cp(D0.x * D1.y - D1.x * D0.y);
    auto S = cp(L0 * D0.w * d12 - L1 * D1.w * d02 + L2 * D2.w * d01);
    return opt_mul(opt_mul(opt_mul(maybe_sign(S), maybe_sign(D0.w)),
                           maybe_sign(D1.w)),
                   maybe_sign(D2.w));
}

template <class P, class C>
std::optional<Sign> incircle_exact_eval(const P& p0, const P& p1, const P& p2, const P& p3,
                                        const std::array<bool, 3>& eq, C&& cp) {
    auto D0 = hdiff2(p3, p0, eq[0], cp);
    auto D1 = hdiff2(p3, p1, eq[1], cp);
    auto D2 = hdiff2(p3, p2, eq[2], cp);
    auto L0 = cp(D0.x * D0.x + D0.y * D0.y);
    auto L1 = cp(D1.x * D1.x + D1.y * D1.y);
    auto L2 = cp(D2.x * D2.x + D2.y * D2.y);
    auto d12 = cp(D1.x * D2.y - D2.x * D1.y);
    auto d02 = cp(D0.x * D2.y - D2.x * D0.y);
    auto d01 = cp(D0.x * D1.y - D1.x * D0.y);
    auto S = cp(L0 * (D1.w * D2.w) * d12 - L1 * (D0.w * D2.w) * d02 +
                L2 * (D0.w * D1.w) * d01);
    return maybe_sign(S);
}

} // namespace predicates_detail

/// Symbolically perturbed in-circle, never ZERO. POSITIVE = p3 strictly
/// inside the (perturbed) circumcircle of the CCW triangle (p0,p1,p2).
/// Under the expansion kernel the l_i are per-point rounded liftings
/// (regular-triangulation semantics); under mpfloat the exact lifting is
/// computed from the coordinates and the l_i arguments are ignored.
template <Kernel K>
Sign in_circle_l(const HPoint2<K>& p0, const HPoint2<K>& p1, const HPoint2<K>& p2,
                 const HPoint2<K>& p3, double l0, double l1, double l2, double l3) {
    namespace pd = predicates_detail;
    std::array<bool, 3> eq{K::trivially_equal(p0.w(), p3.w()),
                           K::trivially_equal(p1.w(), p3.w()),
                           K::trivially_equal(p2.w(), p3.w())};
    pd::IvP2 i0{&p0.intervals()}, i1{&p1.intervals()}, i2{&p2.intervals()},
        i3{&p3.intervals()};
    std::optional<Sign> filtered, exact_opt;
    if constexpr (K::exact_incircle_lift) {
        filtered = pd::incircle_exact_eval(i0, i1, i2, i3, eq, pd::IdentityC{});
        if (!filtered || *filtered == ZERO || force_exact_predicate_checks()) {
            exact_opt = pd::incircle_exact_eval(p0, p1, p2, p3, eq, pd::CompressC<K>{});
        }
    } else {
        Interval L0 = Interval(l0) - Interval(l3);
        Interval L1 = Interval(l1) - Interval(l3);
        Interval L2 = Interval(l2) - Interval(l3);
        filtered = pd::incircle_rounded_eval(i0, i1, i2, i3, L0, L1, L2, eq, pd::IdentityC{});
        if (!filtered || *filtered == ZERO || force_exact_predicate_checks()) {
            using X = typename K::Exact;
            X E0 = K::diff(l0, l3), E1 = K::diff(l1, l3), E2 = K::diff(l2, l3);
            exact_opt = pd::incircle_rounded_eval(p0, p1, p2, p3, E0, E1, E2, eq,
                                                  pd::CompressC<K>{});
        }
    }
    Sign s;
    if (exact_opt) {
        if (filtered && *filtered != ZERO) pd::crosscheck(filtered, *exact_opt);
        s = *exact_opt;
    } else {
        s = *filtered;
    }
    if (s != ZERO) return s;
    return pd::incircle_sos<K>({&p0, &p1, &p2, &p3});
}

// ---------------------------------------------------------------------
// Radial-sort predicates
// ---------------------------------------------------------------------

/// Exact facet normal, up to positive scaling: cross product of the
/// homogeneous differences with the sign of the product of their weights
/// factored out. Cached per bundle during radial sort.
template <Kernel K>
struct ExactNormal {
    std::array<typename K::Exact, 3> v;
    Sign wsign; // true direction is v * wsign
    std::array<Interval, 3> iv;
};

template <Kernel K>
ExactNormal<K> facet_normal(const HPoint3<K>& p1, const HPoint3<K>& p2,
                            const HPoint3<K>& p3) {
    namespace pd = predicates_detail;
    pd::CompressC<K> cp;
    bool eq2 = K::trivially_equal(p2.w(), p1.w());
    bool eq3 = K::trivially_equal(p3.w(), p1.w());
    auto U = pd::hdiff3(p1, p2, eq2, cp);
    auto V = pd::hdiff3(p1, p3, eq3, cp);
    ExactNormal<K> n{{cp(U.y * V.z - U.z * V.y), cp(U.z * V.x - U.x * V.z),
                      cp(U.x * V.y - U.y * V.x)},
                     U.w.sign() * V.w.sign(),
                     {}};
    for (int i = 0; i < 3; ++i) n.iv[std::size_t(i)] = n.v[std::size_t(i)].to_interval();
    return n;
}

/// sign(n1 . n2) of the true normals.
template <Kernel K>
Sign radial_Norient(const ExactNormal<K>& n1, const ExactNormal<K>& n2) {
    Sign ws = n1.wsign * n2.wsign;
    auto f = (n1.iv[0] * n2.iv[0] + n1.iv[1] * n2.iv[1] + n1.iv[2] * n2.iv[2]).certain_sign();
    if (f && !force_exact_predicate_checks()) return *f * ws;
    Sign exact =
        K::compress(n1.v[0] * n2.v[0] + n1.v[1] * n2.v[1] + n1.v[2] * n2.v[2]).sign();
    predicates_detail::crosscheck(f, exact);
    return exact * ws;
}

/// true iff the exact cross product of the normals is zero and the dot
/// product is positive (same orientation).
template <Kernel K>
bool normals_colinear(const ExactNormal<K>& n1, const ExactNormal<K>& n2) {
    if (radial_Norient<K>(n1, n2) != POSITIVE) return false;
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        auto f = (n1.iv[std::size_t(j)] * n2.iv[std::size_t(k)] -
                  n1.iv[std::size_t(k)] * n2.iv[std::size_t(j)]).certain_sign();
        Sign s;
        if (f && !force_exact_predicate_checks()) {
            s = *f;
        } else {
            s = (n1.v[std::size_t(j)] * n2.v[std::size_t(k)] -
                 n1.v[std::size_t(k)] * n2.v[std::size_t(j)]).sign();
            predicates_detail::crosscheck(f, s);
        }
        if (s != ZERO) return false;
    }
    return true;
}

// ---------------------------------------------------------------------
// Dominant axis
// ---------------------------------------------------------------------

/// Axis of the exactly-largest |normal component| of a double triangle;
/// dropping it guarantees a non-degenerate projection. Ties keep the lower
/// axis index.
inline int dominant_axis(const Vec3d& a, const Vec3d& b, const Vec3d& c) {
    std::array<Expansion, 3> n;
    {
        Expansion ux = Expansion::diff(b.x, a.x), uy = Expansion::diff(b.y, a.y),
                  uz = Expansion::diff(b.z, a.z);
        Expansion vx = Expansion::diff(c.x, a.x), vy = Expansion::diff(c.y, a.y),
                  vz = Expansion::diff(c.z, a.z);
        n[0] = (uy * vz - uz * vy).compressed();
        n[1] = (uz * vx - ux * vz).compressed();
        n[2] = (ux * vy - uy * vx).compressed();
    }
    std::array<Expansion, 3> mag;
    for (int i = 0; i < 3; ++i) {
        mag[std::size_t(i)] = n[std::size_t(i)].sign() == NEGATIVE ? -n[std::size_t(i)]
                                                                   : n[std::size_t(i)];
    }
    int best = 0;
    for (int i = 1; i < 3; ++i) {
        if ((mag[std::size_t(i)] - mag[std::size_t(best)]).sign() == POSITIVE) best = i;
    }
    if (mag[std::size_t(best)].sign() == ZERO) {
        throw DegenerateInputError("exactly degenerate triangle has no dominant axis");
    }
    return best;
}

/// Dominant axis for triangles with homogeneous exact vertices. The normal
/// from facet_normal is the true one up to positive scaling, which leaves
/// magnitude comparisons intact.
template <Kernel K>
int dominant_axis(const HPoint3<K>& p1, const HPoint3<K>& p2, const HPoint3<K>& p3) {
    using X = typename K::Exact;
    ExactNormal<K> n = facet_normal<K>(p1, p2, p3);
    std::array<X, 3> mag;
    for (int i = 0; i < 3; ++i) {
        mag[std::size_t(i)] = n.v[std::size_t(i)].sign() == NEGATIVE ? -n.v[std::size_t(i)]
                                                                     : n.v[std::size_t(i)];
    }
    int best = 0;
    for (int i = 1; i < 3; ++i) {
        if ((mag[std::size_t(i)] - mag[std::size_t(best)]).sign() == POSITIVE) best = i;
    }
    if (mag[std::size_t(best)].sign() == ZERO) {
        throw DegenerateInputError("exactly degenerate triangle has no dominant axis");
    }
    return best;
}

// ---------------------------------------------------------------------
// Predicate cache
// ---------------------------------------------------------------------

/// Memoizes determinant predicates keyed by the sorted argument indices,
/// correcting the sign by the permutation parity. Scoped per CDT instance
/// or per triangle-pair intersection, never shared across workers.
class PredicateCache {
public:
    void clear() { map_.clear(); }
    std::size_t size() const { return map_.size(); }

    template <class F>
    Sign get(std::uint8_t tag, std::array<index_t, 4> ids, F&& compute) {
        std::array<index_t, 4> sorted = ids;
        int parity = sort_parity(sorted);
        if (parity < 0) return compute(); // repeated ids: do not cache
        Key key{tag, sorted};
        auto it = map_.find(key);
        Sign flip = (parity % 2 == 0) ? POSITIVE : NEGATIVE;
        if (it != map_.end()) return it->second * flip;
        Sign s = compute();
        map_.emplace(key, s * flip); // canonical (sorted-order) sign
        return s;
    }

private:
    struct Key {
        std::uint8_t tag;
        std::array<index_t, 4> ids;
        bool operator==(const Key& o) const { return tag == o.tag && ids == o.ids; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::uint64_t h = k.tag;
            for (index_t id : k.ids) {
                h ^= id + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            }
            return std::size_t(h);
        }
    };

    // insertion sort counting swaps; -1 on duplicate ids
    static int sort_parity(std::array<index_t, 4>& a) {
        int swaps = 0;
        for (int i = 1; i < 4; ++i) {
            for (int j = i; j > 0 && a[std::size_t(j)] < a[std::size_t(j - 1)]; --j) {
                std::swap(a[std::size_t(j)], a[std::size_t(j - 1)]);
                ++swaps;
            }
        }
        for (int i = 1; i < 4; ++i) {
            if (a[std::size_t(i)] == a[std::size_t(i - 1)] && a[std::size_t(i)] != NO_INDEX) {
                return -1;
            }
        }
        return swaps;
    }

    std::unordered_map<Key, Sign, KeyHash> map_;
};

} // namespace meshcsg

#endif
