#ifndef MESHCSG_KERNEL_HPP
#define MESHCSG_KERNEL_HPP

#include <concepts>

#include "meshcsg/base.hpp"
#include "meshcsg/bigfloat.hpp"
#include "meshcsg/expansion.hpp"
#include "meshcsg/interval.hpp"

namespace meshcsg {

template <typename T>
concept ExactNumber = requires(const T& a, const T& b) {
    { a + b } -> std::same_as<T>;
    { a - b } -> std::same_as<T>;
    { a * b } -> std::same_as<T>;
    { -a } -> std::same_as<T>;
    { a.sign() } -> std::same_as<Sign>;
    { a.is_zero() } -> std::same_as<bool>;
    { a.to_interval() } -> std::same_as<Interval>;
    { T::from_double(1.0) } -> std::same_as<T>;
};

/// Kernel selection is a construction-time parameter of the whole pipeline:
/// every number in a run belongs to one kernel.
struct ExpansionKernel {
    using Exact = Expansion;
    static constexpr const char* name = "expansion";
    // in_circle uses per-point rounded lifting weights (regular triangulation)
    static constexpr bool exact_incircle_lift = false;
    // homogeneous points have no cheap canonical form; order by ratio_compare
    static constexpr bool normalized_points = false;

    static Exact compress(const Exact& x) { return x.compressed(); }
    static Exact diff(double a, double b) { return Expansion::diff(a, b); }
    /// Equality is itself a comparison for expansions; only the trivial
    /// single-component case is cheap enough for a fast path.
    static bool trivially_equal(const Exact& a, const Exact& b) {
        return a.size() == 1 && b.size() == 1 && a.component(0) == b.component(0);
    }
};

struct MpFloatKernel {
    using Exact = BigFloat;
    static constexpr const char* name = "mpfloat";
    static constexpr bool exact_incircle_lift = true;
    static constexpr bool normalized_points = true;

    static Exact compress(const Exact& x) { return x; }
    static Exact diff(double a, double b) {
        return BigFloat::from_double(a) - BigFloat::from_double(b);
    }
    static bool trivially_equal(const Exact& a, const Exact& b) { return a == b; }
};

static_assert(ExactNumber<Expansion>);
static_assert(ExactNumber<BigFloat>);

template <typename K>
concept Kernel = requires {
    typename K::Exact;
    requires ExactNumber<typename K::Exact>;
    { K::name } -> std::convertible_to<const char*>;
};

} // namespace meshcsg

#endif
