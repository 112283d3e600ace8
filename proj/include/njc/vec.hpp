#ifndef NJC_VEC_HPP
#define NJC_VEC_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "njc/common.hpp"

namespace njc {

/// Real coordinate vector. Dimension is fixed by the owning space.
using Vec = std::vector<double>;

inline Vec point_add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec point_sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec point_neg(const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

inline Vec point_scale(const Vec& a, double s) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

/// -1 means the point type carries no explicit coordinate dimension.
inline int dimension_of(const Vec& a) { return static_cast<int>(a.size()); }

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_p(const Vec& a, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : a) m = std::max(m, std::fabs(v));
        return m;
    }
    double s = 0.0;
    for (double v : a) s += std::pow(std::fabs(v), p);
    return std::pow(s, 1.0 / p);
}

inline Vec unit_axis(int dim, int axis) {
    Vec r(static_cast<std::size_t>(dim), 0.0);
    r[static_cast<std::size_t>(axis)] = 1.0;
    return r;
}

}  // namespace njc

#endif  // NJC_VEC_HPP
