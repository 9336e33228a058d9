#ifndef MESHCSG_BASE_HPP
#define MESHCSG_BASE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace meshcsg {

using index_t = std::uint32_t;
inline constexpr index_t NO_INDEX = index_t(-1);

/// Sign of an exact quantity. The numeric values make products and
/// comparisons work with plain integer arithmetic.
enum class Sign : std::int8_t {
    NEGATIVE = -1,
    ZERO     = 0,
    POSITIVE = 1
};

inline constexpr Sign NEGATIVE = Sign::NEGATIVE;
inline constexpr Sign ZERO     = Sign::ZERO;
inline constexpr Sign POSITIVE = Sign::POSITIVE;

inline constexpr int sign_int(Sign s) { return static_cast<int>(s); }

inline constexpr Sign sign_from_int(int i) {
    return i < 0 ? NEGATIVE : (i > 0 ? POSITIVE : ZERO);
}

inline constexpr Sign operator*(Sign a, Sign b) {
    return sign_from_int(sign_int(a) * sign_int(b));
}

inline constexpr Sign operator-(Sign a) { return sign_from_int(-sign_int(a)); }

inline Sign sign_of(double x) {
    return x < 0.0 ? NEGATIVE : (x > 0.0 ? POSITIVE : ZERO);
}

// Pipeline error conditions. Names follow the failure they report.

/// The expansion kernel ran out of exponent range (overflow or underflow
/// while multiplying), or a BigFloat exponent left the 32-bit range.
class KernelRangeError : public std::runtime_error {
public:
    explicit KernelRangeError(const std::string& what)
        : std::runtime_error("kernel range error: " + what) {}
};

class InvalidInputError : public std::runtime_error {
public:
    explicit InvalidInputError(const std::string& what)
        : std::runtime_error("invalid input: " + what) {}
};

class DegenerateConstructionError : public std::runtime_error {
public:
    explicit DegenerateConstructionError(const std::string& what)
        : std::runtime_error("degenerate construction: " + what) {}
};

class DegenerateInputError : public std::runtime_error {
public:
    explicit DegenerateInputError(const std::string& what)
        : std::runtime_error("degenerate input: " + what) {}
};

class OutOfDomainError : public std::runtime_error {
public:
    explicit OutOfDomainError(const std::string& what)
        : std::runtime_error("out of domain: " + what) {}
};

class TopologyError : public std::runtime_error {
public:
    explicit TopologyError(const std::string& what)
        : std::runtime_error("topology error: " + what) {}
};

struct Vec3d {
    double x = 0.0, y = 0.0, z = 0.0;

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    friend Vec3d operator+(const Vec3d& a, const Vec3d& b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend Vec3d operator-(const Vec3d& a, const Vec3d& b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend Vec3d operator*(double s, const Vec3d& a) {
        return {s * a.x, s * a.y, s * a.z};
    }
    friend bool operator==(const Vec3d& a, const Vec3d& b) {
        return a.x == b.x && a.y == b.y && a.z == b.z;
    }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline double dot(const Vec3d& a, const Vec3d& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3d cross(const Vec3d& a, const Vec3d& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

} // namespace meshcsg

#endif
