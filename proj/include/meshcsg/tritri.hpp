#ifndef MESHCSG_TRITRI_HPP
#define MESHCSG_TRITRI_HPP

#include <algorithm>
#include <array>
#include <cassert>

#include <boost/container/small_vector.hpp>

#include "meshcsg/base.hpp"
#include "meshcsg/predicates.hpp"
#include "meshcsg/trimesh.hpp"

namespace meshcsg {

/// Open cells of a triangle seen as a simplicial set: three vertices, three
/// open edges (Ek is opposite vertex k, i.e. (V_{k+1}, V_{k+2})) and the
/// open interior T. Every point of the closed triangle lies in exactly one.
enum class TriSimplex : std::uint8_t { V0, V1, V2, E0, E1, E2, T };

inline bool simplex_is_vertex(TriSimplex s) { return std::uint8_t(s) < 3; }
inline bool simplex_is_edge(TriSimplex s) {
    return std::uint8_t(s) >= 3 && std::uint8_t(s) < 6;
}
inline int simplex_index(TriSimplex s) { return int(std::uint8_t(s)) % 3; }
inline TriSimplex vertex_simplex(int i) { return TriSimplex(std::uint8_t(i % 3)); }
inline TriSimplex edge_simplex(int i) { return TriSimplex(std::uint8_t(3 + i % 3)); }

/// Both simplices lie in the closure of a common triangle edge. Two
/// distinct vertices always do (the edge joining them); an edge and one of
/// its endpoints do; an edge only matches itself.
inline bool same_edge(TriSimplex a, TriSimplex b) {
    if (a == TriSimplex::T || b == TriSimplex::T) return false;
    if (simplex_is_edge(a) && simplex_is_edge(b)) return a == b;
    if (simplex_is_vertex(a) && simplex_is_vertex(b)) return true;
    TriSimplex e = simplex_is_edge(a) ? a : b;
    TriSimplex v = simplex_is_edge(a) ? b : a;
    int k = simplex_index(e);
    return simplex_index(v) == (k + 1) % 3 || simplex_index(v) == (k + 2) % 3;
}

/// One intersection point, identified by the unique pair of open simplices
/// of the two triangles whose embeddings contain it.
struct SymbolicIntersection {
    TriSimplex on_a;
    TriSimplex on_b;
    friend bool operator==(const SymbolicIntersection&, const SymbolicIntersection&) = default;
    friend bool operator<(const SymbolicIntersection& x, const SymbolicIntersection& y) {
        return x.on_a != y.on_a ? x.on_a < y.on_a : x.on_b < y.on_b;
    }
};

struct TriTriResult {
    boost::container::small_vector<SymbolicIntersection, 8> points;
    boost::container::small_vector<std::pair<std::uint8_t, std::uint8_t>, 8> edges;
    bool empty() const { return points.empty(); }
};

namespace tritri_detail {

template <Kernel K>
class TriTri {
public:
    TriTri(const TriMesh<K>& mesh, index_t fa, index_t fb, PredicateCache& cache)
        : cache_(cache) {
        va_ = mesh.facets[fa].v;
        vb_ = mesh.facets[fb].v;
        for (int i = 0; i < 3; ++i) {
            pa_[std::size_t(i)] = mesh.point(va_[std::size_t(i)]);
            pb_[std::size_t(i)] = mesh.point(vb_[std::size_t(i)]);
        }
    }

    TriTriResult run() {
        TriTriResult out;
        // early exit: A strictly on one side of B's support plane
        Sign s0 = o3(vb_[0], vb_[1], vb_[2], va_[0]);
        Sign s1 = o3(vb_[0], vb_[1], vb_[2], va_[1]);
        Sign s2 = o3(vb_[0], vb_[1], vb_[2], va_[2]);
        if ((s0 == POSITIVE && s1 == POSITIVE && s2 == POSITIVE) ||
            (s0 == NEGATIVE && s1 == NEGATIVE && s2 == NEGATIVE)) {
            return out;
        }
        for (int k = 0; k < 3; ++k) {
            edge_triangle(k, va_, vb_, false, out);
            edge_triangle(k, vb_, va_, true, out);
        }
        std::sort(out.points.begin(), out.points.end());
        out.points.erase(std::unique(out.points.begin(), out.points.end()),
                         out.points.end());
        build_edges(out);
        return out;
    }

private:
    const HPoint3<K>& pt(index_t id) const {
        for (int i = 0; i < 3; ++i) {
            if (va_[std::size_t(i)] == id) return pa_[std::size_t(i)];
        }
        for (int i = 0; i < 3; ++i) {
            if (vb_[std::size_t(i)] == id) return pb_[std::size_t(i)];
        }
        assert(false);
        return pa_[0];
    }

    Sign o3(index_t a, index_t b, index_t c, index_t d) {
        return cache_.get(0, {a, b, c, d}, [&] {
            return orient3d<K>(pt(a), pt(b), pt(c), pt(d));
        });
    }

    Sign o2(int axis, index_t a, index_t b, index_t c) {
        return cache_.get(std::uint8_t(1 + axis), {a, b, c, NO_INDEX}, [&] {
            return orient2d<K>(project_point(pt(a), axis), project_point(pt(b), axis),
                               project_point(pt(c), axis));
        });
    }

    // sign of coordinate(axis) of a minus coordinate(axis) of b, cartesian
    Sign coord_compare(index_t a, index_t b, int axis) {
        const HPoint3<K>& p = pt(a);
        const HPoint3<K>& q = pt(b);
        const auto& ip = p.intervals();
        const auto& iq = q.intervals();
        return ratio_compare<K>(p.coord(axis), p.w(), q.coord(axis), q.w(),
                                &ip[std::size_t(axis)], &ip[3], &iq[std::size_t(axis)],
                                &iq[3]);
    }

    static void emit(TriTriResult& out, TriSimplex se, TriSimplex st, bool mirror) {
        out.points.push_back(mirror ? SymbolicIntersection{st, se}
                                    : SymbolicIntersection{se, st});
    }

    // edge k of the triangle ev against the triangle tv; mirror=true when
    // the edge belongs to triangle B so pairs are emitted as (on_a, on_b)
    void edge_triangle(int k, const std::array<index_t, 3>& ev,
                       const std::array<index_t, 3>& tv, bool mirror, TriTriResult& out) {
        index_t q1 = ev[std::size_t((k + 1) % 3)];
        index_t q2 = ev[std::size_t((k + 2) % 3)];
        Sign s1 = o3(tv[0], tv[1], tv[2], q1);
        Sign s2 = o3(tv[0], tv[1], tv[2], q2);
        if (sign_int(s1) * sign_int(s2) > 0) return;
        if (s1 == ZERO && s2 == ZERO) {
            edge_triangle_2d(k, ev, tv, mirror, out);
            return;
        }
        std::array<Sign, 3> o;
        for (int j = 0; j < 3; ++j) {
            o[std::size_t(j)] =
                o3(q1, q2, tv[std::size_t((j + 1) % 3)], tv[std::size_t((j + 2) % 3)]);
        }
        if (sign_int(o[0]) * sign_int(o[1]) < 0 || sign_int(o[1]) * sign_int(o[2]) < 0 ||
            sign_int(o[2]) * sign_int(o[0]) < 0) {
            return;
        }
        TriSimplex se = (s1 == ZERO)   ? vertex_simplex(k + 1)
                        : (s2 == ZERO) ? vertex_simplex(k + 2)
                                       : edge_simplex(k);
        emit(out, se, region_in_triangle(o), mirror);
    }

    static TriSimplex region_in_triangle(const std::array<Sign, 3>& o) {
        int zeros = 0, zj = -1, zk = -1;
        for (int j = 0; j < 3; ++j) {
            if (o[std::size_t(j)] == ZERO) {
                ++zeros;
                if (zj < 0) {
                    zj = j;
                } else {
                    zk = j;
                }
            }
        }
        assert(zeros < 3);
        if (zeros == 0) return TriSimplex::T;
        if (zeros == 1) return edge_simplex(zj);
        return vertex_simplex(3 - zj - zk);
    }

    void edge_triangle_2d(int k, const std::array<index_t, 3>& ev,
                          const std::array<index_t, 3>& tv, bool mirror,
                          TriTriResult& out) {
        int axis = dominant_axis<K>(pt(tv[0]), pt(tv[1]), pt(tv[2]));
        Sign ob = o2(axis, tv[0], tv[1], tv[2]);
        assert(ob != ZERO);
        index_t q[2] = {ev[std::size_t((k + 1) % 3)], ev[std::size_t((k + 2) % 3)]};

        // endpoints of the edge against the triangle
        for (int i = 0; i < 2; ++i) {
            std::array<Sign, 3> e;
            bool outside = false;
            for (int j = 0; j < 3; ++j) {
                e[std::size_t(j)] = o2(axis, tv[std::size_t((j + 1) % 3)],
                                       tv[std::size_t((j + 2) % 3)], q[i]);
                if (e[std::size_t(j)] == -ob) outside = true;
            }
            if (outside) continue;
            emit(out, vertex_simplex(k + 1 + i), region_in_triangle(e), mirror);
        }

        // the edge against the three triangle edges
        for (int m = 0; m < 3; ++m) {
            index_t pm1 = tv[std::size_t((m + 1) % 3)];
            index_t pm2 = tv[std::size_t((m + 2) % 3)];
            Sign c1 = o2(axis, q[0], q[1], pm1);
            Sign c2 = o2(axis, q[0], q[1], pm2);
            if (c1 == ZERO && c2 == ZERO) {
                collinear_overlap_1d(k, q, m, pm1, pm2, axis, mirror, out);
                continue;
            }
            Sign d1 = o2(axis, pm1, pm2, q[0]);
            Sign d2 = o2(axis, pm1, pm2, q[1]);
            if (sign_int(c1) * sign_int(c2) <= 0 && sign_int(d1) * sign_int(d2) <= 0) {
                TriSimplex se = (d1 == ZERO)   ? vertex_simplex(k + 1)
                                : (d2 == ZERO) ? vertex_simplex(k + 2)
                                               : edge_simplex(k);
                TriSimplex st = (c1 == ZERO)   ? vertex_simplex(m + 1)
                                : (c2 == ZERO) ? vertex_simplex(m + 2)
                                               : edge_simplex(m);
                emit(out, se, st, mirror);
            }
        }
    }

    // four exactly collinear points: compare intervals along a separating
    // coordinate axis of the common support line
    void collinear_overlap_1d(int k, const index_t q[2], int m, index_t pm1, index_t pm2,
                              int dropped, bool mirror, TriTriResult& out) {
        int u = (dropped + 1) % 3;
        int v = (dropped + 2) % 3;
        int axis = (coord_compare(q[0], q[1], u) != ZERO) ? u : v;

        index_t qlo = q[0], qhi = q[1];
        if (coord_compare(qlo, qhi, axis) == POSITIVE) std::swap(qlo, qhi);
        index_t plo = pm1, phi = pm2;
        if (coord_compare(plo, phi, axis) == POSITIVE) std::swap(plo, phi);

        index_t lo = (coord_compare(qlo, plo, axis) == NEGATIVE) ? plo : qlo;
        index_t hi = (coord_compare(qhi, phi, axis) == POSITIVE) ? phi : qhi;
        Sign span = coord_compare(lo, hi, axis);
        if (span == POSITIVE) return; // disjoint intervals

        auto sigma_edge = [&](index_t x) {
            if (coord_compare(x, q[0], axis) == ZERO) return vertex_simplex(k + 1);
            if (coord_compare(x, q[1], axis) == ZERO) return vertex_simplex(k + 2);
            return edge_simplex(k);
        };
        auto sigma_tri = [&](index_t x) {
            if (coord_compare(x, pm1, axis) == ZERO) return vertex_simplex(m + 1);
            if (coord_compare(x, pm2, axis) == ZERO) return vertex_simplex(m + 2);
            return edge_simplex(m);
        };
        emit(out, sigma_edge(lo), sigma_tri(lo), mirror);
        if (span != ZERO) emit(out, sigma_edge(hi), sigma_tri(hi), mirror);
    }

    void build_edges(TriTriResult& out) {
        std::size_t n = out.points.size();
        if (n == 2) {
            out.edges.push_back({0, 1});
            return;
        }
        if (n < 3) return;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (same_edge(out.points[i].on_a, out.points[j].on_a) ||
                    same_edge(out.points[i].on_b, out.points[j].on_b)) {
                    out.edges.push_back({std::uint8_t(i), std::uint8_t(j)});
                }
            }
        }
    }

    std::array<index_t, 3> va_{}, vb_{};
    std::array<HPoint3<K>, 3> pa_, pb_;
    PredicateCache& cache_;
};

} // namespace tritri_detail

/// Combinatorial triangle-triangle intersection: every intersection point
/// as the unique pair of open simplices containing it, plus the boundary
/// segments of the intersection (indices into the point list).
template <Kernel K>
TriTriResult triangle_triangle(const TriMesh<K>& mesh, index_t fa, index_t fb,
                               PredicateCache& cache) {
    return tritri_detail::TriTri<K>(mesh, fa, fb, cache).run();
}

} // namespace meshcsg

#endif
