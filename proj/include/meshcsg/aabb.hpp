#ifndef MESHCSG_AABB_HPP
#define MESHCSG_AABB_HPP

#include <algorithm>
#include <bit>
#include <vector>

#include "meshcsg/base.hpp"
#include "meshcsg/trimesh.hpp"

namespace meshcsg {

/// Implicit balanced AABB tree over mesh facets: node n covers the facet
/// range [b,e), its children 2n and 2n+1 cover [b,m) and [m,e) with
/// m = b+(e-b)/2, the root is node 1, leaves hold one facet. Building
/// reorders the mesh facet array in place (balanced Morton-style ordering
/// via recursive median partitioning); only the box array is stored.
class FacetAABB {
public:
    struct Box {
        Vec3d lo{0, 0, 0}, hi{0, 0, 0};
        bool overlaps(const Box& o) const {
            // closed intervals: touching boxes count, touching facets can
            // intersect
            return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y &&
                   o.lo.y <= hi.y && lo.z <= o.hi.z && o.lo.z <= hi.z;
        }
        void merge(const Box& o) {
            lo = {std::min(lo.x, o.lo.x), std::min(lo.y, o.lo.y), std::min(lo.z, o.lo.z)};
            hi = {std::max(hi.x, o.hi.x), std::max(hi.y, o.hi.y), std::max(hi.z, o.hi.z)};
        }
    };

    template <Kernel K>
    static FacetAABB build(TriMesh<K>& mesh) {
        if (mesh.facets.empty()) {
            throw InvalidInputError("AABB over empty mesh");
        }
        FacetAABB t;
        t.nf_ = index_t(mesh.facets.size());
        std::vector<Box> fbox(t.nf_);
        for (index_t f = 0; f < t.nf_; ++f) fbox[f] = facet_box(mesh, f);

        // balanced Morton-style ordering: recursive median partition with
        // cycling split axis, permuting the facet array in place
        std::vector<index_t> order(t.nf_);
        for (index_t i = 0; i < t.nf_; ++i) order[i] = i;
        morton_partition(order, fbox, 0, t.nf_, 0);
        apply_permutation(mesh, fbox, order);

        std::size_t levels = std::bit_width(std::size_t(t.nf_ - 1)) + 1; // ceil(log2)+1
        t.boxes_.resize(std::size_t(1) << levels);
        t.fill_boxes(fbox, 1, 0, t.nf_);
        return t;
    }

    index_t facet_count() const { return nf_; }
    const Box& node_box(index_t n) const { return boxes_[n]; }

    /// Calls cb(f1, f2) with f1 < f2 exactly once per unordered facet pair
    /// whose boxes overlap.
    template <class F>
    void self_intersect(F&& cb) const {
        intersect_rec(1, 0, nf_, 1, 0, nf_, cb);
    }

private:
    template <Kernel K>
    static Box facet_box(const TriMesh<K>& mesh, index_t f) {
        // boxes come from double coordinates of input vertices: the tree is
        // built before any construction exists
        const auto& fc = mesh.facets[f];
        Box b{mesh.input_points[fc.v[0]], mesh.input_points[fc.v[0]]};
        for (int i = 1; i < 3; ++i) {
            const Vec3d& p = mesh.input_points[fc.v[std::size_t(i)]];
            b.merge(Box{p, p});
        }
        return b;
    }

    static void morton_partition(std::vector<index_t>& order, const std::vector<Box>& fbox,
                                 index_t b, index_t e, int axis) {
        if (e - b <= 1) return;
        index_t m = b + (e - b) / 2;
        std::nth_element(order.begin() + b, order.begin() + m, order.begin() + e,
                         [&](index_t f1, index_t f2) {
                             double c1 = fbox[f1].lo[axis] + fbox[f1].hi[axis];
                             double c2 = fbox[f2].lo[axis] + fbox[f2].hi[axis];
                             return c1 < c2;
                         });
        morton_partition(order, fbox, b, m, (axis + 1) % 3);
        morton_partition(order, fbox, m, e, (axis + 1) % 3);
    }

    template <Kernel K>
    static void apply_permutation(TriMesh<K>& mesh, std::vector<Box>& fbox,
                                  const std::vector<index_t>& order) {
        std::vector<typename TriMesh<K>::Facet> nf(mesh.facets.size());
        std::vector<Box> nb(fbox.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            nf[i] = std::move(mesh.facets[order[i]]);
            nb[i] = fbox[order[i]];
        }
        mesh.facets = std::move(nf);
        fbox = std::move(nb);
    }

    Box fill_boxes(const std::vector<Box>& fbox, index_t n, index_t b, index_t e) {
        if (e - b == 1) {
            boxes_[n] = fbox[b];
            return boxes_[n];
        }
        index_t m = b + (e - b) / 2;
        Box box = fill_boxes(fbox, 2 * n, b, m);
        box.merge(fill_boxes(fbox, 2 * n + 1, m, e));
        boxes_[n] = box;
        return box;
    }

    template <class F>
    void intersect_rec(index_t n1, index_t b1, index_t e1, index_t n2, index_t b2,
                       index_t e2, F&& cb) const {
        if (e2 <= b1) return; // symmetric duplicate of an already-visited pair
        if (!boxes_[n1].overlaps(boxes_[n2])) return;
        index_t N1 = e1 - b1, N2 = e2 - b2;
        if (N1 == 1 && N2 == 1) {
            if (b1 != b2) cb(b1, b2);
            return;
        }
        if (N2 > N1) {
            index_t m2 = b2 + N2 / 2;
            intersect_rec(n1, b1, e1, 2 * n2, b2, m2, cb);
            intersect_rec(n1, b1, e1, 2 * n2 + 1, m2, e2, cb);
        } else {
            index_t m1 = b1 + N1 / 2;
            intersect_rec(2 * n1, b1, m1, n2, b2, e2, cb);
            intersect_rec(2 * n1 + 1, m1, e1, n2, b2, e2, cb);
        }
    }

    std::vector<Box> boxes_;
    index_t nf_ = 0;
};

} // namespace meshcsg

#endif
