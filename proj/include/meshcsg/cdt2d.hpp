#ifndef MESHCSG_CDT2D_HPP
#define MESHCSG_CDT2D_HPP

#include <cassert>
#include <functional>
#include <string>
#include <vector>

#include "meshcsg/base.hpp"
#include "meshcsg/hpoint.hpp"
#include "meshcsg/predicates.hpp"

// 2D exact constrained Delaunay triangulation with intersecting
// constraints, after Sloan's incremental scheme. Edges are always
// designated as edge 0 of a triangle by rotating the triangle in place.
// All storage is growable flat arrays, reusable across runs. The constraint
// enforcement queue uses the four-configuration test (one orient2d per
// step); crossing constraints insert their intersection point through a
// caller-supplied factory.

namespace meshcsg {

template <Kernel K>
class CDT2 {
public:
    using Point = HPoint2<K>;

    /// Factory invoked when the constraint being inserted crosses an
    /// already-constrained edge: receives both constraint ids and must
    /// return the exact intersection point.
    using IntersectionFactory = std::function<Point(index_t cnstr_a, index_t cnstr_b)>;

    void reset() {
        points_.clear();
        l_.clear();
        v2T_.clear();
        T_.clear();
        Tadj_.clear();
        Tec_.clear();
        Tflags_.clear();
        Tnext_.clear();
        Tprev_.clear();
        chains_.clear();
        constraints_.clear();
        cache_.clear();
        flipped_ = false;
        locate_hint_ = 0;
    }

    /// Starts from the (real) facet triangle. A clockwise input is
    /// normalized by swapping two corners; emitted triangles must then be
    /// flipped back by the caller, see was_flipped().
    void init(Point p0, Point p1, Point p2) {
        reset();
        add_point(std::move(p0));
        add_point(std::move(p1));
        add_point(std::move(p2));
        Sign o = orient2d<K>(points_[0], points_[1], points_[2]);
        if (o == ZERO) throw DegenerateInputError("degenerate enclosing triangle");
        if (o == NEGATIVE) {
            std::swap(points_[1], points_[2]);
            std::swap(l_[1], l_[2]);
            flipped_ = true;
        }
        index_t t = Tnew();
        Tset(t, 0, 1, 2, NO_INDEX, NO_INDEX, NO_INDEX, NO_INDEX, NO_INDEX, NO_INDEX);
        v2T_[0] = v2T_[1] = v2T_[2] = t;
    }

    bool was_flipped() const { return flipped_; }
    index_t vertex_count() const { return index_t(points_.size()); }
    index_t triangle_count() const { return index_t(T_.size() / 3); }
    const Point& point(index_t v) const { return points_[v]; }
    index_t Tv(index_t t, int le) const { return T_[3 * t + index_t(le)]; }
    index_t Tadj(index_t t, int le) const { return Tadj_[3 * t + index_t(le)]; }

    bool edge_is_constrained(index_t t, int le) const {
        return Tec_[3 * t + index_t(le)] != NO_INDEX;
    }

    /// Constraint ids recorded on the edge's chained list.
    std::vector<index_t> edge_constraints(index_t t, int le) const {
        std::vector<index_t> ids;
        for (index_t c = Tec_[3 * t + index_t(le)]; c != NO_INDEX; c = chains_[c].next) {
            ids.push_back(chains_[c].id);
        }
        return ids;
    }

    IntersectionFactory intersection_factory;

    /// Inserts a point; returns the existing index for duplicates.
    index_t insert_vertex(Point p) {
        index_t v = add_point(std::move(p));
        index_t r;
        try {
            r = insert_existing(v);
        } catch (...) {
            points_.pop_back();
            l_.pop_back();
            v2T_.pop_back();
            throw;
        }
        if (r != v) {
            points_.pop_back();
            l_.pop_back();
            v2T_.pop_back();
        }
        return r;
    }

    /// Inserts the constraint (i, j) carrying the caller id. Crossing
    /// constraints get their intersection point from the factory; vertices
    /// exactly on the constraint split it into covered sub-segments.
    void insert_constraint(index_t i, index_t j, index_t id) {
        if (i == j) throw InvalidInputError("constraint with identical endpoints");
        constraints_.push_back({i, j, id});
        index_t first_isect_v = vertex_count();
        DList Q(*this), N(*this);
        while (i != j) {
            index_t k = find_intersected_edges(i, j, id, Q);
            constrain_edges(i, k, id, Q, N);
            delaunayize_new_edges(N);
            i = k;
        }
        // restore Delaunay around vertices created by constraint crossings
        DList S(*this);
        for (index_t v = first_isect_v; v < vertex_count(); ++v) {
            index_t t0 = v2T_[v];
            index_t t = t0;
            do {
                int lv = Tv_find(t, v);
                Trot(t, lv);
                S.push_back(t);
                t = Tadj(t, 1);
                assert(t != NO_INDEX); // crossing vertices are interior
            } while (t != t0);
            delaunayize_vertex_neighbors(v, S);
        }
    }

    /// Structural audit: mutual adjacency, CCW orientation, constraint
    /// coverage, convexity-guarded in-circle condition. Returns the first
    /// violation (empty string = pass).
    std::string check() const {
        for (index_t t = 0; t < triangle_count(); ++t) {
            for (int le = 0; le < 3; ++le) {
                index_t t2 = Tadj(t, le);
                if (t2 == NO_INDEX) continue;
                if (t2 >= triangle_count()) return "adjacency out of range";
                if (Tadj_find(t2, t) < 0) return "adjacency not mutual";
            }
            if (orient2d<K>(points_[Tv(t, 0)], points_[Tv(t, 1)], points_[Tv(t, 2)]) !=
                POSITIVE) {
                return "triangle not counterclockwise";
            }
        }
        for (index_t t = 0; t < triangle_count(); ++t) {
            for (int le = 0; le < 3; ++le) {
                index_t t2 = Tadj(t, le);
                if (t2 != NO_INDEX && t2 < t) continue; // visit each edge once
                if (!edge_is_Delaunay(t, le)) return "in-circle condition violated";
                if (t2 != NO_INDEX) {
                    auto a = edge_constraints(t, le);
                    auto b = edge_constraints(t2, Tadj_find(t2, t));
                    std::sort(a.begin(), a.end());
                    std::sort(b.begin(), b.end());
                    if (a != b) return "constraint chains differ across an edge";
                }
            }
        }
        for (const auto& c : constraints_) {
            if (!constraint_covered(c.id)) return "constraint not covered";
        }
        return {};
    }

    const std::vector<Point>& points() const { return points_; }

private:
    struct ChainNode {
        index_t id;
        index_t next;
    };
    struct Constraint {
        index_t i, j, id;
    };

    // doubly linked list over triangles backed by the shared next/prev
    // arrays; a triangle belongs to at most one list at a time
    struct DList {
        CDT2& c;
        index_t front = NO_INDEX, back = NO_INDEX;
        explicit DList(CDT2& cdt) : c(cdt) {}
        bool empty() const { return front == NO_INDEX; }
        bool contains(index_t t) const { return (c.Tflags_[t] & IN_LIST) != 0; }
        void push_back(index_t t) {
            assert(!contains(t));
            c.Tflags_[t] |= IN_LIST;
            c.Tnext_[t] = NO_INDEX;
            c.Tprev_[t] = back;
            if (back != NO_INDEX) c.Tnext_[back] = t;
            back = t;
            if (front == NO_INDEX) front = t;
        }
        void push_front(index_t t) {
            assert(!contains(t));
            c.Tflags_[t] |= IN_LIST;
            c.Tprev_[t] = NO_INDEX;
            c.Tnext_[t] = front;
            if (front != NO_INDEX) c.Tprev_[front] = t;
            front = t;
            if (back == NO_INDEX) back = t;
        }
        index_t pop_back() {
            index_t t = back;
            remove(t);
            return t;
        }
        void remove(index_t t) {
            assert(contains(t));
            c.Tflags_[t] &= ~IN_LIST;
            index_t p = c.Tprev_[t], n = c.Tnext_[t];
            if (p != NO_INDEX) c.Tnext_[p] = n; else front = n;
            if (n != NO_INDEX) c.Tprev_[n] = p; else back = p;
        }
        void clear() {
            while (!empty()) pop_back();
        }
        ~DList() { clear(); }
    };
    friend struct DList;

    static constexpr std::uint8_t IN_LIST = 1;
    static constexpr std::uint8_t MARKED = 2; // "has an intersection", in Q

    bool Tis_marked(index_t t) const { return (Tflags_[t] & MARKED) != 0; }
    void Tmark(index_t t) { Tflags_[t] |= MARKED; }
    void Tunmark(index_t t) { Tflags_[t] &= ~MARKED; }

    index_t add_point(Point p) {
        l_.push_back(lift_weight(p));
        points_.push_back(std::move(p));
        v2T_.push_back(NO_INDEX);
        return index_t(points_.size() - 1);
    }

    // per-point rounded lifting weight for the expansion kernel's regular
    // triangulation; computed once per point and reused
    static double lift_weight(const Point& p) {
        if constexpr (K::exact_incircle_lift) {
            return 0.0; // unused: the exact lifting is computed in-predicate
        } else {
            const auto& iv = p.intervals();
            double sq = (iv[0] * iv[0] + iv[1] * iv[1]).midpoint();
            double w2 = (iv[2] * iv[2]).midpoint();
            return sq / w2;
        }
    }

    index_t Tnew() {
        index_t t = triangle_count();
        T_.resize(T_.size() + 3, NO_INDEX);
        Tadj_.resize(Tadj_.size() + 3, NO_INDEX);
        Tec_.resize(Tec_.size() + 3, NO_INDEX);
        Tflags_.push_back(0);
        Tnext_.push_back(NO_INDEX);
        Tprev_.push_back(NO_INDEX);
        return t;
    }

    void Tset(index_t t, index_t v0, index_t v1, index_t v2, index_t a0, index_t a1,
              index_t a2, index_t e0, index_t e1, index_t e2) {
        T_[3 * t] = v0;
        T_[3 * t + 1] = v1;
        T_[3 * t + 2] = v2;
        Tadj_[3 * t] = a0;
        Tadj_[3 * t + 1] = a1;
        Tadj_[3 * t + 2] = a2;
        Tec_[3 * t] = e0;
        Tec_[3 * t + 1] = e1;
        Tec_[3 * t + 2] = e2;
        v2T_[v0] = t;
        v2T_[v1] = t;
        v2T_[v2] = t;
    }

    // rotates triangle t in place so local index le becomes 0
    void Trot(index_t t, int le) {
        if (le == 0) return;
        index_t i = 3 * t;
        if (le == 1) {
            std::swap(T_[i], T_[i + 1]);
            std::swap(T_[i], T_[i + 2]);
            std::swap(Tadj_[i], Tadj_[i + 1]);
            std::swap(Tadj_[i], Tadj_[i + 2]);
            std::swap(Tec_[i], Tec_[i + 1]);
            std::swap(Tec_[i], Tec_[i + 2]);
        } else {
            std::swap(T_[i], T_[i + 2]);
            std::swap(T_[i], T_[i + 1]);
            std::swap(Tadj_[i], Tadj_[i + 2]);
            std::swap(Tadj_[i], Tadj_[i + 1]);
            std::swap(Tec_[i], Tec_[i + 2]);
            std::swap(Tec_[i], Tec_[i + 1]);
        }
    }

    int Tv_find(index_t t, index_t v) const {
        for (int le = 0; le < 3; ++le) {
            if (Tv(t, le) == v) return le;
        }
        assert(false);
        return -1;
    }

    int Tadj_find(index_t t, index_t t2) const {
        for (int le = 0; le < 3; ++le) {
            if (Tadj(t, le) == t2) return le;
        }
        return -1;
    }

    index_t chain_push(index_t head, index_t id) {
        for (index_t c = head; c != NO_INDEX; c = chains_[c].next) {
            if (chains_[c].id == id) return head;
        }
        chains_.push_back({id, head});
        return index_t(chains_.size() - 1);
    }

    void set_edge_cnstr_with_neighbor(index_t t, int le, index_t id) {
        Tec_[3 * t + index_t(le)] = chain_push(Tec_[3 * t + index_t(le)], id);
        index_t t2 = Tadj(t, le);
        if (t2 != NO_INDEX) {
            int le2 = Tadj_find(t2, t);
            Tec_[3 * t2 + index_t(le2)] = chain_push(Tec_[3 * t2 + index_t(le2)], id);
        }
    }

    // --- predicates over vertex indices, cached ---------------------------

    Sign orient(index_t a, index_t b, index_t c) {
        return cache_.get(0, {a, b, c, NO_INDEX}, [&] {
            return orient2d<K>(points_[a], points_[b], points_[c]);
        });
    }

    Sign incircle(index_t a, index_t b, index_t c, index_t d) {
        return cache_.get(1, {a, b, c, d}, [&] {
            return in_circle_l<K>(points_[a], points_[b], points_[c], points_[d], l_[a],
                                  l_[b], l_[c], l_[d]);
        });
    }

    Sign orient_nc(index_t a, index_t b, index_t c) const {
        return orient2d<K>(points_[a], points_[b], points_[c]);
    }

    // --- vertex insertion --------------------------------------------------

    index_t insert_existing(index_t v) {
        Sign o1, o2, o3;
        index_t t = locate(v, o1, o2, o3);
        int nz = (o1 == ZERO) + (o2 == ZERO) + (o3 == ZERO);
        assert(nz != 3);
        if (nz == 2) { // duplicate of an existing vertex
            return (o1 != ZERO) ? Tv(t, 0) : (o2 != ZERO) ? Tv(t, 1) : Tv(t, 2);
        }
        DList S(*this);
        if (nz == 1) {
            int le = (o1 == ZERO) ? 0 : (o2 == ZERO) ? 1 : 2;
            insert_vertex_in_edge(v, t, le, &S);
        } else {
            insert_vertex_in_triangle(v, t, &S);
        }
        delaunayize_vertex_neighbors(v, S);
        locate_hint_ = v2T_[v];
        return v;
    }

    // walk to the triangle containing vertex v; o_le is the orientation of
    // v against edge le
    index_t locate(index_t v, Sign& o1, Sign& o2, Sign& o3) {
        index_t t = locate_hint_ < triangle_count() ? locate_hint_ : 0;
        std::size_t steps = 0, budget = 3 * std::size_t(triangle_count()) + 16;
        index_t prev = NO_INDEX;
        // uncached predicates here: v may be popped again if it turns out
        // to be a duplicate, and its index would be reused by a different
        // point while cache entries keyed on it survive
        while (steps++ < budget) {
            index_t a = Tv(t, 0), b = Tv(t, 1), c = Tv(t, 2);
            o1 = orient_nc(v, b, c);
            o2 = orient_nc(v, c, a);
            o3 = orient_nc(v, a, b);
            int neg = -1;
            // deterministic choice: first strictly-negative edge not
            // leading back to the previous triangle
            for (int le = 0; le < 3; ++le) {
                Sign o = (le == 0) ? o1 : (le == 1) ? o2 : o3;
                if (o == NEGATIVE && Tadj(t, le) != prev) {
                    neg = le;
                    break;
                }
                if (o == NEGATIVE && neg < 0) neg = le;
            }
            if (neg < 0) return t;
            index_t next = Tadj(t, neg);
            if (next == NO_INDEX) {
                throw OutOfDomainError("point outside the enclosing triangle");
            }
            prev = t;
            t = next;
        }
        // exhaustive fallback (should not trigger on regular triangulations)
        for (t = 0; t < triangle_count(); ++t) {
            index_t a = Tv(t, 0), b = Tv(t, 1), c = Tv(t, 2);
            o1 = orient_nc(v, b, c);
            o2 = orient_nc(v, c, a);
            o3 = orient_nc(v, a, b);
            if (o1 != NEGATIVE && o2 != NEGATIVE && o3 != NEGATIVE) return t;
        }
        throw OutOfDomainError("point not located in any triangle");
    }

    void insert_vertex_in_triangle(index_t v, index_t t, DList* S) {
        index_t t1 = t;
        index_t v1 = Tv(t1, 0), v2 = Tv(t1, 1), v3 = Tv(t1, 2);
        index_t a1 = Tadj(t1, 0), a2 = Tadj(t1, 1), a3 = Tadj(t1, 2);
        index_t e1 = Tec_[3 * t1], e2 = Tec_[3 * t1 + 1], e3 = Tec_[3 * t1 + 2];
        index_t t2 = Tnew();
        index_t t3 = Tnew();
        Tset(t1, v, v2, v3, a1, t2, t3, e1, NO_INDEX, NO_INDEX);
        Tset(t2, v, v3, v1, a2, t3, t1, e2, NO_INDEX, NO_INDEX);
        Tset(t3, v, v1, v2, a3, t1, t2, e3, NO_INDEX, NO_INDEX);
        Tadj_back_connect(t1, 0, t1);
        Tadj_back_connect(t2, 0, t1);
        Tadj_back_connect(t3, 0, t1);
        if (S) {
            S->push_back(t1);
            S->push_back(t2);
            S->push_back(t3);
        }
    }

    void insert_vertex_in_edge(index_t v, index_t t, int le1, DList* S) {
        index_t cnstr = Tec_[3 * t + index_t(le1)];
        index_t t1 = t;
        index_t t2 = Tadj(t1, le1);
        index_t v1 = Tv(t1, le1);
        index_t v2 = Tv(t1, (le1 + 1) % 3);
        index_t v3 = Tv(t1, (le1 + 2) % 3);
        index_t t1_adj2 = Tadj(t1, (le1 + 1) % 3);
        index_t t1_adj3 = Tadj(t1, (le1 + 2) % 3);
        index_t t1_ec2 = Tec_[3 * t1 + index_t((le1 + 1) % 3)];
        index_t t1_ec3 = Tec_[3 * t1 + index_t((le1 + 2) % 3)];
        if (t2 != NO_INDEX) {
            int le2 = Tadj_find(t2, t1);
            assert(Tv(t2, (le2 + 1) % 3) == v3);
            assert(Tv(t2, (le2 + 2) % 3) == v2);
            index_t v4 = Tv(t2, le2);
            index_t t2_adj2 = Tadj(t2, (le2 + 1) % 3);
            index_t t2_adj3 = Tadj(t2, (le2 + 2) % 3);
            index_t t2_ec2 = Tec_[3 * t2 + index_t((le2 + 1) % 3)];
            index_t t2_ec3 = Tec_[3 * t2 + index_t((le2 + 2) % 3)];
            index_t t3 = Tnew();
            index_t t4 = Tnew();
            index_t c1 = cnstr;
            index_t c2 = copy_chain(cnstr);
            index_t c3 = copy_chain(cnstr);
            index_t c4 = copy_chain(cnstr);
            Tset(t1, v, v1, v2, t1_adj3, t2, t4, t1_ec3, c1, NO_INDEX);
            Tset(t2, v, v2, v4, t2_adj2, t3, t1, t2_ec2, NO_INDEX, c2);
            Tset(t3, v, v4, v3, t2_adj3, t4, t2, t2_ec3, c3, NO_INDEX);
            Tset(t4, v, v3, v1, t1_adj2, t1, t3, t1_ec2, NO_INDEX, c4);
            Tadj_back_connect(t1, 0, t1);
            Tadj_back_connect(t2, 0, t2);
            Tadj_back_connect(t3, 0, t2);
            Tadj_back_connect(t4, 0, t1);
            if (S) {
                S->push_back(t1);
                S->push_back(t2);
                S->push_back(t3);
                S->push_back(t4);
            }
        } else {
            t2 = Tnew();
            index_t c1 = cnstr;
            index_t c2 = copy_chain(cnstr);
            Tset(t1, v, v1, v2, t1_adj3, NO_INDEX, t2, t1_ec3, c1, NO_INDEX);
            Tset(t2, v, v3, v1, t1_adj2, t1, NO_INDEX, t1_ec2, NO_INDEX, c2);
            Tadj_back_connect(t1, 0, t1);
            Tadj_back_connect(t2, 0, t1);
            if (S) {
                S->push_back(t1);
                S->push_back(t2);
            }
        }
    }

    index_t copy_chain(index_t head) {
        index_t out = NO_INDEX;
        for (index_t c = head; c != NO_INDEX; c = chains_[c].next) {
            out = chain_push(out, chains_[c].id);
        }
        return out;
    }

    // whoever used to point at `old_t` across its edge `le` now points at t
    void Tadj_back_connect(index_t t, int le, index_t old_t) {
        index_t t2 = Tadj(t, le);
        if (t2 == NO_INDEX) return;
        int le2 = Tadj_find(t2, old_t);
        if (le2 < 0) le2 = Tadj_find(t2, t);
        assert(le2 >= 0);
        Tadj_[3 * t2 + index_t(le2)] = t;
    }

    void swap_edge(index_t t1) {
        assert(Tec_[3 * t1] == NO_INDEX);
        index_t v1 = Tv(t1, 0), v2 = Tv(t1, 1), v3 = Tv(t1, 2);
        index_t t1_adj2 = Tadj(t1, 1), t1_adj3 = Tadj(t1, 2);
        index_t t1_ec2 = Tec_[3 * t1 + 1], t1_ec3 = Tec_[3 * t1 + 2];
        index_t t2 = Tadj(t1, 0);
        int le2 = Tadj_find(t2, t1);
        index_t v4 = Tv(t2, le2);
        assert(Tv(t2, (le2 + 1) % 3) == v3);
        assert(Tv(t2, (le2 + 2) % 3) == v2);
        index_t t2_adj2 = Tadj(t2, (le2 + 1) % 3);
        index_t t2_adj3 = Tadj(t2, (le2 + 2) % 3);
        index_t t2_ec2 = Tec_[3 * t2 + index_t((le2 + 1) % 3)];
        index_t t2_ec3 = Tec_[3 * t2 + index_t((le2 + 2) % 3)];
        Tset(t1, v1, v4, v3, t2_adj3, t1_adj2, t2, t2_ec3, t1_ec2, NO_INDEX);
        Tset(t2, v1, v2, v4, t2_adj2, t1, t1_adj3, t2_ec2, NO_INDEX, t1_ec3);
        Tadj_back_connect(t1, 0, t2);
        Tadj_back_connect(t1, 1, t1);
        Tadj_back_connect(t2, 0, t2);
        Tadj_back_connect(t2, 2, t1);
    }

    bool is_convex_quad(index_t t) {
        index_t v1 = Tv(t, 0), v2 = Tv(t, 1), v3 = Tv(t, 2);
        index_t t2 = Tadj(t, 0);
        int le2 = Tadj_find(t2, t);
        index_t v4 = Tv(t2, le2);
        Sign o1 = orient(v2, v1, v4);
        Sign o2 = orient(v4, v2, v3);
        Sign o3 = orient(v3, v4, v1);
        Sign o4 = orient(v1, v3, v2);
        return sign_int(o1) * sign_int(o2) > 0 && sign_int(o2) * sign_int(o3) > 0 &&
               sign_int(o3) * sign_int(o4) > 0 && sign_int(o4) * sign_int(o1) > 0;
    }

    void delaunayize_vertex_neighbors(index_t v, DList& S) {
        while (!S.empty()) {
            index_t t1 = S.pop_back();
            assert(Tv(t1, 0) == v);
            if (Tec_[3 * t1] != NO_INDEX) continue;
            index_t t2 = Tadj(t1, 0);
            if (t2 == NO_INDEX) continue;
            index_t v1 = Tv(t2, 0), v2 = Tv(t2, 1), v3 = Tv(t2, 2);
            if (incircle(v1, v2, v3, v) == POSITIVE && is_convex_quad(t1)) {
                swap_edge(t1);
                S.push_back(t1);
                S.push_back(t2);
            }
        }
    }

    // Restores the in-circle condition around the edges created by the
    // enforcement swaps. Triangle rotations drift as neighbors flip, so the
    // worklist re-checks all three edges of each touched triangle; flips
    // strictly decrease the lifted functional, so this terminates.
    void delaunayize_new_edges(DList& N) {
        std::vector<index_t> work;
        while (!N.empty()) work.push_back(N.pop_back());
        std::size_t budget = 64 + 16 * std::size_t(triangle_count()) *
                                      std::size_t(triangle_count());
        std::size_t steps = 0;
        while (!work.empty()) {
            if (++steps > budget) {
                throw std::logic_error("delaunayize_new_edges exceeded its budget");
            }
            index_t t1 = work.back();
            work.pop_back();
            for (int le = 0; le < 3; ++le) {
                if (Tec_[3 * t1 + index_t(le)] != NO_INDEX) continue;
                index_t t2 = Tadj(t1, le);
                if (t2 == NO_INDEX) continue;
                Trot(t1, le);
                int le2 = Tadj_find(t2, t1);
                index_t v3 = Tv(t2, le2);
                if (incircle(Tv(t1, 0), Tv(t1, 1), Tv(t1, 2), v3) == POSITIVE &&
                    is_convex_quad(t1)) {
                    swap_edge(t1);
                    work.push_back(t1);
                    work.push_back(t2);
                    break;
                }
            }
        }
    }

    // Walks from vertex i toward j, pushing crossed edges (as triangles
    // rotated to edge 0) onto Q. Stops at and returns the first vertex
    // encountered on the constraint: a vertex exactly on (i,j), a crossing
    // with an existing constrained edge (the intersection is built and
    // inserted), or j itself. Covered sub-edges found on the way are
    // flagged, since edge enforcement will not see them.
    index_t find_intersected_edges(index_t i, index_t j, index_t id, DList& Q) {
        index_t t_prev = NO_INDEX, v_prev = NO_INDEX;
        index_t t = NO_INDEX, v = i;
        std::size_t budget = 16 + 8 * std::size_t(triangle_count() + vertex_count());
        std::size_t steps = 0;
        while (true) {
            if (++steps > budget) {
                throw std::logic_error("constraint walk exceeded its budget");
            }
            index_t t_next = NO_INDEX, v_next = NO_INDEX;
            if (v != NO_INDEX) {
                bool found = fan_step(v, i, j, id, t_prev, v_prev, t_next, v_next);
                if (!found) {
                    throw std::logic_error("constraint walk stuck at a vertex");
                }
            } else {
                // generic case: on triangle t, edge 0 was the crossed edge
                if (Tv(t, 0) == j || Tv(t, 1) == j || Tv(t, 2) == j) {
                    v_next = j;
                } else {
                    bool stepped = false;
                    for (int le = 0; le < 3 && !stepped; ++le) {
                        if (Tadj(t, le) == t_prev) continue;
                        index_t v1 = Tv(t, (le + 1) % 3);
                        index_t v2 = Tv(t, (le + 2) % 3);
                        Sign o1 = orient(i, j, v1);
                        Sign o2 = orient(i, j, v2);
                        if (sign_int(o1) * sign_int(o2) < 0) {
                            Trot(t, le);
                            if (edge_is_constrained(t, 0)) {
                                v_next = build_crossing(id, t);
                            } else {
                                Q.push_back(t);
                                Tmark(t);
                                t_next = Tadj(t, 0);
                            }
                            stepped = true;
                        } else if (o1 == ZERO) {
                            v_next = v1;
                            stepped = true;
                        } else if (o2 == ZERO) {
                            v_next = v2;
                            stepped = true;
                        }
                    }
                    if (!stepped) {
                        throw std::logic_error("constraint walk stuck in a triangle");
                    }
                }
            }
            t_prev = t;
            v_prev = v;
            t = t_next;
            v = v_next;
            if (v != NO_INDEX) return v;
        }
    }

    // one step of the walk when standing on vertex v: scan the triangle fan
    // around v for the arrival vertex j, a vertex exactly on (i,j), or the
    // edge crossed by the constraint
    bool fan_step(index_t v, index_t i, index_t j, index_t id, index_t t_prev,
                  index_t v_prev, index_t& t_next, index_t& v_next) {
        bool found = false;
        for_each_triangle_around_vertex(v, [&](index_t t, int lv) {
            if (t == t_prev) return false;
            index_t a = Tv(t, (lv + 1) % 3);
            index_t b = Tv(t, (lv + 2) % 3);
            if (a == j || b == j) {
                v_next = j;
                t_next = NO_INDEX;
                int le = (a == j) ? (lv + 2) % 3 : (lv + 1) % 3;
                set_edge_cnstr_with_neighbor(t, le, id);
                found = true;
                return true;
            }
            Sign o1 = orient(i, j, a);
            Sign o2 = orient(i, j, b);
            Sign o3 = orient_nc(a, b, j);
            Sign o4 = orient_nc(a, b, v);
            if (sign_int(o1) * sign_int(o2) < 0 && sign_int(o3) * sign_int(o4) < 0) {
                Trot(t, lv); // crossed edge becomes edge 0, handled next round
                t_next = t;
                v_next = NO_INDEX;
                found = true;
                return true;
            }
            if (o1 == ZERO && sign_int(o3) * sign_int(o4) < 0 && a != v_prev) {
                v_next = a;
                t_next = NO_INDEX;
                set_edge_cnstr_with_neighbor(t, (lv + 2) % 3, id);
                found = true;
                return true;
            }
            if (o2 == ZERO && sign_int(o3) * sign_int(o4) < 0 && b != v_prev) {
                v_next = b;
                t_next = NO_INDEX;
                set_edge_cnstr_with_neighbor(t, (lv + 1) % 3, id);
                found = true;
                return true;
            }
            return false;
        });
        return found;
    }

    // the constraint being inserted crosses the constrained edge 0 of t:
    // build the intersection point, insert it in the edge
    index_t build_crossing(index_t id, index_t t) {
        if (!intersection_factory) {
            throw TopologyError("crossing constraints but no intersection factory");
        }
        index_t other_id = chains_[Tec_[3 * t]].id;
        Point p = intersection_factory(id, other_id);
        index_t v = add_point(std::move(p));
        insert_vertex_in_edge(v, t, 0, nullptr);
        locate_hint_ = v2T_[v];
        return v;
    }

    // iterate triangles incident to v (handles border fans); fn(t, lv)
    // returns true to stop
    template <class F>
    void for_each_triangle_around_vertex(index_t v, F&& fn) {
        index_t t0 = v2T_[v];
        index_t t = t0;
        index_t prev = NO_INDEX;
        // forward sweep
        while (t != NO_INDEX) {
            int lv = Tv_find(t, v);
            if (fn(t, lv)) return;
            index_t next = Tadj(t, (lv + 1) % 3);
            if (next == t0) return; // closed fan
            prev = t;
            t = next;
        }
        // hit the border: sweep the other way from t0
        t = t0;
        while (t != NO_INDEX) {
            int lv = Tv_find(t, v);
            index_t next = Tadj(t, (lv + 2) % 3);
            if (next == NO_INDEX) return;
            t = next;
            lv = Tv_find(t, v);
            if (fn(t, lv)) return;
        }
    }

    // processes the queue of crossed edges with the four-configuration
    // single-orient2d test; i and j bound the sub-segment being enforced
    void constrain_edges(index_t i, index_t j, index_t id, DList& Q, DList& N) {
        std::size_t budget = 64 + 16 * std::size_t(triangle_count()) *
                                      std::size_t(triangle_count());
        std::size_t steps = 0;
        auto new_edge = [&](index_t t, int le) {
            Trot(t, le);
            Tunmark(t);
            if ((Tv(t, 1) == i && Tv(t, 2) == j) || (Tv(t, 1) == j && Tv(t, 2) == i)) {
                set_edge_cnstr_with_neighbor(t, 0, id);
            } else {
                N.push_back(t);
            }
        };
        auto isect_edge = [&](index_t t, int le) {
            Trot(t, le);
            Q.push_front(t);
        };
        while (!Q.empty()) {
            if (++steps > budget) {
                throw std::logic_error("constraint enforcement exceeded its budget");
            }
            index_t t1 = Q.pop_back();
            if (!Tis_marked(t1)) continue;
            if (!is_convex_quad(t1)) {
                // unflippable for now; the queue cannot be a singleton or
                // the process would never converge
                if (Q.empty()) {
                    throw std::logic_error("single non-convex quad left in queue");
                }
                Q.push_front(t1);
                continue;
            }
            index_t t2 = Tadj(t1, 0);
            bool no_isect = !Tis_marked(t2);
            index_t v0 = Tv(t1, 0);
            bool t2v0_t1v2 = (Tis_marked(t2) && Tv(t2, 0) == Tv(t1, 2));
            bool t2v0_t1v1 = (Tis_marked(t2) && Tv(t2, 0) == Tv(t1, 1));
            swap_edge(t1);
            if (no_isect) {
                new_edge(t1, 2);
            } else {
                // the four configurations (t2 above/below the constraint
                // crossed with which of t2's vertices matches t1's)
                Sign o = orient(i, j, v0);
                if (t2v0_t1v2) {
                    if (sign_int(o) >= 0) {
                        new_edge(t1, 2);
                    } else {
                        isect_edge(t1, 2);
                    }
                } else {
                    assert(t2v0_t1v1);
                    if (sign_int(o) > 0) {
                        Trot(t2, 1);
                        isect_edge(t1, 0);
                    } else {
                        Q.remove(t2);
                        new_edge(t2, 1);
                        isect_edge(t1, 0);
                    }
                }
            }
        }
    }

    bool edge_is_Delaunay(index_t t1, int le1) const {
        if (Tec_[3 * t1 + index_t(le1)] != NO_INDEX) return true;
        index_t t2 = Tadj(t1, le1);
        if (t2 == NO_INDEX) return true;
        int le2 = Tadj_find(t2, t1);
        index_t v1 = Tv(t1, le1);
        index_t v2 = Tv(t1, (le1 + 1) % 3);
        index_t v3 = Tv(t1, (le1 + 2) % 3);
        index_t v4 = Tv(t2, le2);
        Sign ic = in_circle_l<K>(points_[v1], points_[v2], points_[v3], points_[v4],
                                 l_[v1], l_[v2], l_[v3], l_[v4]);
        if (ic != POSITIVE) return true;
        // regular-triangulation caveat: a positive in-circle on a
        // non-convex quad is not flippable and is accepted
        Sign o1 = orient_nc(v2, v1, v4);
        Sign o2 = orient_nc(v4, v2, v3);
        Sign o3 = orient_nc(v3, v4, v1);
        Sign o4 = orient_nc(v1, v3, v2);
        bool convex = sign_int(o1) * sign_int(o2) > 0 && sign_int(o2) * sign_int(o3) > 0 &&
                      sign_int(o3) * sign_int(o4) > 0 && sign_int(o4) * sign_int(o1) > 0;
        return !convex;
    }

    bool constraint_covered(index_t id) const {
        // all edges carrying this id must connect its endpoints: walk them
        std::vector<std::pair<index_t, index_t>> edges;
        for (index_t t = 0; t < triangle_count(); ++t) {
            for (int le = 0; le < 3; ++le) {
                index_t t2 = Tadj(t, le);
                if (t2 != NO_INDEX && t2 < t) continue;
                for (index_t c = Tec_[3 * t + index_t(le)]; c != NO_INDEX;
                     c = chains_[c].next) {
                    if (chains_[c].id == id) {
                        edges.push_back({Tv(t, (le + 1) % 3), Tv(t, (le + 2) % 3)});
                    }
                }
            }
        }
        index_t ci = NO_INDEX, cj = NO_INDEX;
        for (const auto& cn : constraints_) {
            if (cn.id == id) {
                ci = cn.i;
                cj = cn.j;
            }
        }
        if (edges.empty()) return false;
        // endpoints must appear an odd number of times, interior vertices even
        std::vector<std::pair<index_t, int>> degree;
        auto bump = [&](index_t vv) {
            for (auto& [u, d] : degree) {
                if (u == vv) {
                    ++d;
                    return;
                }
            }
            degree.push_back({vv, 1});
        };
        for (auto [a, b] : edges) {
            bump(a);
            bump(b);
        }
        for (auto [u, d] : degree) {
            bool endpoint = (u == ci) || (u == cj);
            if (endpoint && d % 2 == 0) return false;
            if (!endpoint && d % 2 == 1) return false;
        }
        return true;
    }

    std::vector<Point> points_;
    std::vector<double> l_;
    std::vector<index_t> v2T_;
    std::vector<index_t> T_;
    std::vector<index_t> Tadj_;
    std::vector<index_t> Tec_;
    std::vector<std::uint8_t> Tflags_;
    std::vector<index_t> Tnext_;
    std::vector<index_t> Tprev_;
    std::vector<ChainNode> chains_;
    std::vector<Constraint> constraints_;
    PredicateCache cache_;
    bool flipped_ = false;
    index_t locate_hint_ = 0;
};

} // namespace meshcsg

#endif
