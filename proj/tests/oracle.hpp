// Big-rational reference implementations used to check the exact kernels,
// predicates and constructions. Everything here is deliberately written as
// straight-line mpq_class arithmetic, independent of the code under test.
#ifndef MESHCSG_TESTS_ORACLE_HPP
#define MESHCSG_TESTS_ORACLE_HPP

#include <array>
#include <cstdint>
#include <random>

#include <gmpxx.h>

#include "meshcsg/base.hpp"
#include "meshcsg/bigfloat.hpp"
#include "meshcsg/expansion.hpp"

namespace oracle {

using Rat = mpq_class;
using RVec2 = std::array<Rat, 2>;
using RVec3 = std::array<Rat, 3>;

inline Rat rat_of(double d) { return Rat(d); } // exact: doubles are dyadic

inline Rat rat_of(const meshcsg::Expansion& e) {
    Rat r = 0;
    for (std::size_t i = 0; i < e.size(); ++i) r += Rat(e.component(i));
    return r;
}

inline Rat rat_of(const meshcsg::BigFloat& b) {
    Rat r(b.mantissa());
    std::int64_t e = b.exponent();
    if (e > 0) {
        mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
    } else if (e < 0) {
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
    }
    return r;
}

inline meshcsg::Sign sign_of(const Rat& r) {
    return meshcsg::sign_from_int(sgn(r));
}

inline Rat det2(const Rat& a, const Rat& b, const Rat& c, const Rat& d) {
    return a * d - b * c;
}

inline Rat orient2d(const RVec2& p0, const RVec2& p1, const RVec2& p2) {
    return det2(p1[0] - p0[0], p1[1] - p0[1], p2[0] - p0[0], p2[1] - p0[1]);
}

inline Rat det3(const RVec3& a, const RVec3& b, const RVec3& c) {
    return a[0] * det2(b[1], b[2], c[1], c[2])
         - a[1] * det2(b[0], b[2], c[0], c[2])
         + a[2] * det2(b[0], b[1], c[0], c[1]);
}

inline RVec3 sub(const RVec3& a, const RVec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline RVec2 sub(const RVec2& a, const RVec2& b) {
    return {a[0] - b[0], a[1] - b[1]};
}

inline Rat dot(const RVec3& a, const RVec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline RVec3 cross(const RVec3& a, const RVec3& b) {
    return {a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

inline Rat orient3d(const RVec3& p0, const RVec3& p1, const RVec3& p2, const RVec3& p3) {
    return det3(sub(p1, p0), sub(p2, p0), sub(p3, p0));
}

/// 4x4 in-circle determinant on cartesian rationals with explicit lifting
/// weights l_i (use l_i = x_i^2 + y_i^2 for the true in-circle predicate).
inline Rat incircle_l(const RVec2& p0, const RVec2& p1, const RVec2& p2, const RVec2& p3,
                      const Rat& l0, const Rat& l1, const Rat& l2, const Rat& l3) {
    RVec3 r0{p0[0] - p3[0], p0[1] - p3[1], l0 - l3};
    RVec3 r1{p1[0] - p3[0], p1[1] - p3[1], l1 - l3};
    RVec3 r2{p2[0] - p3[0], p2[1] - p3[1], l2 - l3};
    return det3(r0, r1, r2);
}

inline Rat incircle(const RVec2& p0, const RVec2& p1, const RVec2& p2, const RVec2& p3) {
    auto lift = [](const RVec2& p) -> Rat { return p[0] * p[0] + p[1] * p[1]; };
    return incircle_l(p0, p1, p2, p3, lift(p0), lift(p1), lift(p2), lift(p3));
}

// --- homogeneous point helpers ------------------------------------------

template <class HP3>
RVec3 cartesian3(const HP3& p) {
    Rat w = rat_of(p.w());
    return {rat_of(p.x()) / w, rat_of(p.y()) / w, rat_of(p.z()) / w};
}

template <class HP2>
RVec2 cartesian2(const HP2& p) {
    Rat w = rat_of(p.w());
    return {rat_of(p.x()) / w, rat_of(p.y()) / w};
}

inline RVec3 rvec(const meshcsg::Vec3d& v) {
    return {Rat(v.x), Rat(v.y), Rat(v.z)};
}

/// Exact incidence: p on the supporting plane of (a,b,c)?
inline bool on_plane(const RVec3& p, const RVec3& a, const RVec3& b, const RVec3& c) {
    return orient3d(a, b, c, p) == 0;
}

/// Exact incidence: p on the supporting line of (a,b)?
inline bool on_line(const RVec3& p, const RVec3& a, const RVec3& b) {
    RVec3 u = sub(b, a), v = sub(p, a);
    RVec3 c = cross(u, v);
    return c[0] == 0 && c[1] == 0 && c[2] == 0;
}

// --- rational triangle-triangle intersection ----------------------------

namespace tritri_oracle {

inline int rat_dominant_axis(const RVec3& n) {
    Rat ax = abs(n[0]), ay = abs(n[1]), az = abs(n[2]);
    int best = 0;
    Rat bm = ax;
    if (ay > bm) { best = 1; bm = ay; }
    if (az > bm) { best = 2; }
    return best;
}

inline RVec2 project(const RVec3& p, int drop) {
    return {p[std::size_t((drop + 1) % 3)], p[std::size_t((drop + 2) % 3)]};
}

/// p inside or on the closed projected triangle?
inline bool in_closed_tri_2d(const RVec2& p, const RVec2& a, const RVec2& b, const RVec2& c) {
    Rat o = orient2d(a, b, c);
    int s = sgn(o);
    if (s == 0) return false; // degenerate projection; caller picked bad axis
    auto side = [&](const RVec2& u, const RVec2& v) { return sgn(orient2d(u, v, p)); };
    return side(a, b) * s >= 0 && side(b, c) * s >= 0 && side(c, a) * s >= 0;
}

/// Sutherland-Hodgman clip of polygon `poly` by the closed half plane on
/// the `keep_sign` side of line (a,b).
inline std::vector<RVec2> clip_half_plane(const std::vector<RVec2>& poly, const RVec2& a,
                                          const RVec2& b, int keep_sign) {
    std::vector<RVec2> out;
    std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const RVec2& p = poly[i];
        const RVec2& q = poly[(i + 1) % n];
        int sp = sgn(orient2d(a, b, p)) * keep_sign;
        int sq = sgn(orient2d(a, b, q)) * keep_sign;
        if (sp >= 0) out.push_back(p);
        if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
            // edge crosses the line: rational intersection
            Rat dp = orient2d(a, b, p);
            Rat dq = orient2d(a, b, q);
            Rat t = dp / (dp - dq);
            out.push_back(RVec2{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
        }
    }
    return out;
}

inline void push_unique(std::vector<RVec3>& pts, const RVec3& p) {
    for (const auto& q : pts) {
        if (q == p) return;
    }
    pts.push_back(p);
}

/// All intersection points (vertices of the intersection set) of two
/// triangles, by brute-force rational clipping.
inline std::vector<RVec3> intersection_points(const std::array<RVec3, 3>& A,
                                              const std::array<RVec3, 3>& B) {
    std::vector<RVec3> pts;
    RVec3 nB = cross(sub(B[1], B[0]), sub(B[2], B[0]));
    RVec3 nA = cross(sub(A[1], A[0]), sub(A[2], A[0]));
    std::array<Rat, 3> sA, sB;
    bool coplanar = true;
    for (int i = 0; i < 3; ++i) {
        sA[std::size_t(i)] = dot(sub(A[std::size_t(i)], B[0]), nB);
        if (sA[std::size_t(i)] != 0) coplanar = false;
    }
    for (int i = 0; i < 3; ++i) sB[std::size_t(i)] = dot(sub(B[std::size_t(i)], A[0]), nA);

    if (coplanar) {
        int drop = rat_dominant_axis(nB);
        std::vector<RVec2> poly{project(A[0], drop), project(A[1], drop),
                                project(A[2], drop)};
        std::array<RVec2, 3> b2{project(B[0], drop), project(B[1], drop),
                                project(B[2], drop)};
        int s = sgn(orient2d(b2[0], b2[1], b2[2]));
        for (int e = 0; e < 3 && !poly.empty(); ++e) {
            poly = clip_half_plane(poly, b2[std::size_t(e)], b2[std::size_t((e + 1) % 3)], s);
        }
        // lift back: drop axis coordinate reconstructed from B's plane
        // equation nB.(p - B0) = 0
        for (const RVec2& p2 : poly) {
            RVec3 p;
            int u = (drop + 1) % 3, v = (drop + 2) % 3;
            p[std::size_t(u)] = p2[0];
            p[std::size_t(v)] = p2[1];
            // nB[drop] != 0 by dominance
            Rat rhs = dot(nB, B[0]) - nB[std::size_t(u)] * p2[0] - nB[std::size_t(v)] * p2[1];
            p[std::size_t(drop)] = rhs / nB[std::size_t(drop)];
            push_unique(pts, p);
        }
        return pts;
    }

    auto closed_member = [&](const RVec3& p, const std::array<RVec3, 3>& T,
                             const RVec3& nT) {
        int drop = rat_dominant_axis(nT);
        return in_closed_tri_2d(project(p, drop), project(T[0], drop),
                                project(T[1], drop), project(T[2], drop));
    };

    auto edge_vs_plane = [&](const std::array<RVec3, 3>& T, const std::array<Rat, 3>& s,
                             const std::array<RVec3, 3>& other, const RVec3& nOther) {
        for (int i = 0; i < 3; ++i) {
            const RVec3& a = T[std::size_t(i)];
            const RVec3& b = T[std::size_t((i + 1) % 3)];
            const Rat& da = s[std::size_t(i)];
            const Rat& db = s[std::size_t((i + 1) % 3)];
            if (da == 0 && db == 0) {
                // edge inside the other plane: clip the segment against the
                // other triangle in 2D
                int drop = rat_dominant_axis(nOther);
                std::vector<RVec2> seg{project(a, drop), project(b, drop)};
                std::array<RVec2, 3> o2{project(other[0], drop), project(other[1], drop),
                                        project(other[2], drop)};
                int ss = sgn(orient2d(o2[0], o2[1], o2[2]));
                // clip the degenerate "polygon" a-b-a
                std::vector<RVec2> poly{seg[0], seg[1]};
                for (int e = 0; e < 3 && !poly.empty(); ++e) {
                    poly = clip_half_plane(poly, o2[std::size_t(e)],
                                           o2[std::size_t((e + 1) % 3)], ss);
                }
                for (const RVec2& p2 : poly) {
                    // lift along the edge: find parameter from the projected point
                    RVec2 pa = project(a, drop), pb = project(b, drop);
                    Rat t;
                    if (pa[0] != pb[0]) {
                        t = (p2[0] - pa[0]) / (pb[0] - pa[0]);
                    } else {
                        t = (p2[1] - pa[1]) / (pb[1] - pa[1]);
                    }
                    RVec3 p{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]),
                            a[2] + t * (b[2] - a[2])};
                    push_unique(pts, p);
                }
                continue;
            }
            if (sgn(da) * sgn(db) > 0) continue;
            RVec3 x;
            if (da == 0) {
                x = a;
            } else if (db == 0) {
                x = b;
            } else {
                Rat t = da / (da - db);
                x = RVec3{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]),
                          a[2] + t * (b[2] - a[2])};
            }
            if (closed_member(x, other, nOther)) push_unique(pts, x);
        }
    };
    edge_vs_plane(A, sA, B, nB);
    edge_vs_plane(B, sB, A, nA);
    return pts;
}

} // namespace tritri_oracle

// --- random input generation -------------------------------------------

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double uniform(double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(gen);
    }
    int uniform_int(int a, int b) {
        return std::uniform_int_distribution<int>(a, b)(gen);
    }
    /// Doubles spanning many binades, including exact small integers.
    double spread_double(int max_exp = 40) {
        switch (uniform_int(0, 9)) {
        case 0: return double(uniform_int(-8, 8));
        case 1: return 0.0;
        default:
            return std::ldexp(uniform(-1.0, 1.0), uniform_int(-max_exp, max_exp));
        }
    }
    double nonzero_spread(int max_exp = 40) {
        double d = 0.0;
        while (d == 0.0) d = spread_double(max_exp);
        return d;
    }
};

} // namespace oracle

#endif
