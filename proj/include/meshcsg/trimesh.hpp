#ifndef MESHCSG_TRIMESH_HPP
#define MESHCSG_TRIMESH_HPP

#include <array>
#include <cstdint>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "meshcsg/base.hpp"
#include "meshcsg/hpoint.hpp"

namespace meshcsg {

/// Fixed-width bitvector over operand indices 0..N-1 (operand 1..N in user
/// facing numbering). Width grows on demand and never shrinks.
class OperandSet {
public:
    OperandSet() = default;

    void set(std::uint32_t i) {
        std::size_t word = i / 64;
        if (word >= bits_.size()) bits_.resize(word + 1, 0);
        bits_[word] |= (std::uint64_t(1) << (i % 64));
    }

    bool test(std::uint32_t i) const {
        std::size_t word = i / 64;
        if (word >= bits_.size()) return false;
        return (bits_[word] >> (i % 64)) & 1u;
    }

    OperandSet& operator|=(const OperandSet& o) {
        if (o.bits_.size() > bits_.size()) bits_.resize(o.bits_.size(), 0);
        for (std::size_t i = 0; i < o.bits_.size(); ++i) bits_[i] |= o.bits_[i];
        return *this;
    }

    OperandSet& operator^=(const OperandSet& o) {
        if (o.bits_.size() > bits_.size()) bits_.resize(o.bits_.size(), 0);
        for (std::size_t i = 0; i < o.bits_.size(); ++i) bits_[i] ^= o.bits_[i];
        return *this;
    }

    OperandSet& operator&=(const OperandSet& o) {
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            bits_[i] &= (i < o.bits_.size()) ? o.bits_[i] : 0;
        }
        return *this;
    }

    OperandSet complement(std::uint32_t width) const {
        OperandSet r = *this;
        if (width == 0) return r;
        std::size_t words = (width + 63) / 64;
        if (r.bits_.size() < words) r.bits_.resize(words, 0);
        for (std::size_t i = 0; i < words; ++i) r.bits_[i] = ~r.bits_[i];
        std::uint32_t tail = width % 64;
        if (tail) r.bits_[words - 1] &= (std::uint64_t(1) << tail) - 1;
        for (std::size_t i = words; i < r.bits_.size(); ++i) r.bits_[i] = 0;
        return r;
    }

    bool empty() const {
        for (std::uint64_t w : bits_) {
            if (w) return false;
        }
        return true;
    }

    friend bool operator==(const OperandSet& a, const OperandSet& b) {
        std::size_t n = std::max(a.bits_.size(), b.bits_.size());
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t wa = i < a.bits_.size() ? a.bits_[i] : 0;
            std::uint64_t wb = i < b.bits_.size() ? b.bits_[i] : 0;
            if (wa != wb) return false;
        }
        return true;
    }

private:
    boost::container::small_vector<std::uint64_t, 1> bits_;
};

/// Indexed triangle mesh. Input vertices carry double coordinates;
/// constructed vertices (from intersections) reference exact homogeneous
/// points and are indexed after the inputs. Facets carry the operand
/// bitvector B(t) and the id of the input facet they came from.
template <Kernel K>
class TriMesh {
public:
    struct Facet {
        std::array<index_t, 3> v;
        OperandSet operands;
        index_t source = NO_INDEX;
    };

    std::vector<Vec3d> input_points;
    std::vector<HPoint3<K>> constructed_points;
    std::vector<Facet> facets;
    std::uint32_t operand_count = 0;

    index_t vertex_count() const {
        return index_t(input_points.size() + constructed_points.size());
    }
    bool is_input_vertex(index_t v) const { return v < input_points.size(); }

    HPoint3<K> point(index_t v) const {
        if (is_input_vertex(v)) return HPoint3<K>::from_double(input_points[v]);
        return constructed_points[v - input_points.size()];
    }

    const HPoint3<K>* constructed(index_t v) const {
        if (is_input_vertex(v)) return nullptr;
        return &constructed_points[v - input_points.size()];
    }

    /// Double approximation usable for non-exact bookkeeping only.
    Vec3d approx_point(index_t v) const {
        if (is_input_vertex(v)) return input_points[v];
        return constructed_points[v - input_points.size()].approx();
    }

    index_t add_facet(index_t a, index_t b, index_t c, OperandSet ops,
                      index_t source = NO_INDEX) {
        facets.push_back(Facet{{a, b, c}, std::move(ops), source});
        return index_t(facets.size() - 1);
    }

    bool facet_has_constructed_vertex(index_t f) const {
        for (index_t v : facets[f].v) {
            if (!is_input_vertex(v)) return true;
        }
        return false;
    }
};

} // namespace meshcsg

#endif
