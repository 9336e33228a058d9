#ifndef MESHCSG_CONSTRUCTIONS_HPP
#define MESHCSG_CONSTRUCTIONS_HPP

#include <array>
#include <map>
#include <optional>

#include "meshcsg/base.hpp"
#include "meshcsg/hpoint.hpp"
#include "meshcsg/predicates.hpp"

namespace meshcsg {

namespace constructions_detail {

template <Kernel K>
struct XV3 {
    typename K::Exact x, y, z;
};

template <Kernel K>
XV3<K> exact_diff(const Vec3d& a, const Vec3d& b) {
    return {K::diff(a.x, b.x), K::diff(a.y, b.y), K::diff(a.z, b.z)};
}

template <Kernel K>
typename K::Exact dot(const XV3<K>& a, const XV3<K>& b) {
    return K::compress(a.x * b.x + a.y * b.y + a.z * b.z);
}

template <Kernel K>
XV3<K> cross(const XV3<K>& a, const XV3<K>& b) {
    return {K::compress(a.y * b.z - a.z * b.y),
            K::compress(a.z * b.x - a.x * b.z),
            K::compress(a.x * b.y - a.y * b.x)};
}

} // namespace constructions_detail

/// mix(t, q1, q2) = q1 + t (q2 - q1) for input-mesh vertices (w = 1) and an
/// exact rational t = a/b, expressed homogeneously as [a q2 + (b-a) q1 ; b].
template <Kernel K>
HPoint3<K> mix(const Rational<K>& t, const Vec3d& q1, const Vec3d& q2) {
    using X = typename K::Exact;
    if (t.den.is_zero()) {
        throw DegenerateConstructionError("mix with zero denominator");
    }
    const X& a = t.num;
    X bma = t.den - t.num;
    auto coord = [&](double c1, double c2) {
        return K::compress(a * X::from_double(c2) + bma * X::from_double(c1));
    };
    return HPoint3<K>(coord(q1.x, q2.x), coord(q1.y, q2.y), coord(q1.z, q2.z), t.den);
}

/// Line-plane intersection: the edge (q1,q2) against the supporting plane of
/// (p1,p2,p3). Existence was established upstream by the intersection tests;
/// a zero denominator here means a coplanar case leaked past them.
template <Kernel K>
HPoint3<K> intersect_edge_triangle_3d(const Vec3d& q1, const Vec3d& q2, const Vec3d& p1,
                                      const Vec3d& p2, const Vec3d& p3) {
    namespace cd = constructions_detail;
    auto n = cd::cross<K>(cd::exact_diff<K>(p2, p1), cd::exact_diff<K>(p3, p1));
    Rational<K> t{cd::dot<K>(cd::exact_diff<K>(p1, q1), n),
                  cd::dot<K>(cd::exact_diff<K>(q2, q1), n)};
    if (t.den.is_zero()) {
        throw DegenerateConstructionError(
            "edge parallel to triangle plane in 3D intersection");
    }
    return mix<K>(t, q1, q2);
}

/// Coplanar segment intersection via the 2x2 Cramer formula on the
/// projected coordinates, lifted back to 3D by mixing the segment (p1,p2).
template <Kernel K>
HPoint3<K> intersect_edge_edge_2d(const Vec3d& p1, const Vec3d& p2, const Vec3d& q1,
                                  const Vec3d& q2, int dropped_axis) {
    using X = typename K::Exact;
    int u = (dropped_axis + 1) % 3;
    int v = (dropped_axis + 2) % 3;
    auto det = [&](const Vec3d& a0, const Vec3d& a1, const Vec3d& b0, const Vec3d& b1) {
        X ax = K::diff(a1[u], a0[u]), ay = K::diff(a1[v], a0[v]);
        X bx = K::diff(b1[u], b0[u]), by = K::diff(b1[v], b0[v]);
        return K::compress(ax * by - ay * bx);
    };
    Rational<K> t{det(p1, q1, q1, q2), det(p1, p2, q1, q2)};
    if (t.den.is_zero()) {
        throw DegenerateConstructionError("parallel projected segments");
    }
    return mix<K>(t, p1, p2);
}

/// Intersection of the supporting planes of three triangles (3x3 Cramer):
/// w is the determinant of the three normals, x,y,z the column-substituted
/// determinants with B = (N1.p1, N2.q1, N3.r1).
template <Kernel K>
HPoint3<K> intersect_three_planes(const std::array<Vec3d, 3>& t1,
                                  const std::array<Vec3d, 3>& t2,
                                  const std::array<Vec3d, 3>& t3) {
    namespace cd = constructions_detail;
    using X = typename K::Exact;
    auto n1 = cd::cross<K>(cd::exact_diff<K>(t1[1], t1[0]), cd::exact_diff<K>(t1[2], t1[0]));
    auto n2 = cd::cross<K>(cd::exact_diff<K>(t2[1], t2[0]), cd::exact_diff<K>(t2[2], t2[0]));
    auto n3 = cd::cross<K>(cd::exact_diff<K>(t3[1], t3[0]), cd::exact_diff<K>(t3[2], t3[0]));
    auto from = [](const Vec3d& p) {
        return cd::XV3<K>{X::from_double(p.x), X::from_double(p.y), X::from_double(p.z)};
    };
    X b1 = cd::dot<K>(n1, from(t1[0]));
    X b2 = cd::dot<K>(n2, from(t2[0]));
    X b3 = cd::dot<K>(n3, from(t3[0]));
    auto det3 = [&](const X& a11, const X& a12, const X& a13, const X& a21, const X& a22,
                    const X& a23, const X& a31, const X& a32, const X& a33) {
        return K::compress(a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
                           a13 * (a21 * a32 - a22 * a31));
    };
    X w = det3(n1.x, n1.y, n1.z, n2.x, n2.y, n2.z, n3.x, n3.y, n3.z);
    if (w.is_zero()) {
        throw DegenerateConstructionError("three planes do not meet in one point");
    }
    X x = det3(b1, n1.y, n1.z, b2, n2.y, n2.z, b3, n3.y, n3.z);
    X y = det3(n1.x, b1, n1.z, n2.x, b2, n2.z, n3.x, b3, n3.z);
    X z = det3(n1.x, n1.y, b1, n2.x, n2.y, b2, n3.x, n3.y, b3);
    return HPoint3<K>(std::move(x), std::move(y), std::move(z), std::move(w));
}

/// Map from geometric point identity to vertex index. Two keys never
/// compare geometrically equal; equal points hit the same index whatever
/// their homogeneous representation.
template <Kernel K>
class GlobalVertexTable {
public:
    /// Returns the index of a geometrically equal existing point, or
    /// inserts the point with index `index_if_new` and returns that.
    index_t find_or_insert(const HPoint3<K>& p, index_t index_if_new) {
        auto [it, inserted] = map_.try_emplace(p, index_if_new);
        return it->second;
    }

    std::optional<index_t> find(const HPoint3<K>& p) const {
        auto it = map_.find(p);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return map_.size(); }
    void clear() { map_.clear(); }

    template <class F>
    void for_each(F&& f) const {
        for (const auto& [p, idx] : map_) f(p, idx);
    }

private:
    struct Less {
        bool operator()(const HPoint3<K>& a, const HPoint3<K>& b) const {
            return point_lexico_compare<K>(a, b) == NEGATIVE;
        }
    };
    std::map<HPoint3<K>, index_t, Less> map_;
};

} // namespace meshcsg

#endif
