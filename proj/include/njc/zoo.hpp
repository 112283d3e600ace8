#ifndef NJC_ZOO_HPP
#define NJC_ZOO_HPP

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "njc/common.hpp"
#include "njc/metric.hpp"
#include "njc/vec.hpp"

namespace njc {

// ---------------------------------------------------------------------------
// Built-in floating-point metric spaces, each with its registered property
// profile and closed-form constant where one is known.
// ---------------------------------------------------------------------------

namespace detail {

inline MetricSpace<Vec> base_real_space(std::string id, int dim) {
    if (dim < 1) throw ContractViolation("zoo: dim must be >= 1");
    MetricSpace<Vec> s;
    s.id = std::move(id);
    s.dim = dim;
    s.zero = Vec(static_cast<std::size_t>(dim), 0.0);
    s.sample = [dim](Rng& rng, double scale) {
        Vec v(static_cast<std::size_t>(dim));
        for (auto& c : v) c = scale * rng.gaussian();
        return v;
    };
    s.perturb = [](const Vec& x, Rng& rng, double step) {
        Vec v = x;
        for (auto& c : v) c += step * rng.gaussian();
        return v;
    };
    return s;
}

}  // namespace detail

/// d(x, y) = min(||x-y||_2, radius). Not normable: the gauge saturates.
/// Closed form 2^(2-sigma) registered for radius 1 and sigma in [1,2] (the
/// argument uses f <= 1).
inline MetricSpace<Vec> make_truncated(int dim, double radius = 1.0) {
    if (!(radius > 0.0)) throw ContractViolation("make_truncated: radius must be positive");
    MetricSpace<Vec> s = detail::base_real_space("truncated", dim);
    s.dist = [radius](const Vec& x, const Vec& y) {
        return std::min(norm2(point_sub(x, y)), radius);
    };
    if (radius == 1.0) {
        s.closed_form = [](double sigma) -> std::optional<ClosedForm> {
            if (sigma >= 1.0 && sigma <= 2.0)
                return ClosedForm{std::exp2(2.0 - sigma), "truncated metric, sigma in [1,2]", true};
            return std::nullopt;
        };
    }
    s.expected_properties = {
        {"metric_axioms", true},        {"even", true},
        {"subadditive", true},          {"translation_invariant", true},
        {"two_homogeneous", false},     {"absolutely_homogeneous", false},
        {"midpoint_convex", false},
    };
    return s;
}

/// d(x, y) = ||x-y||_2^eta with eta in (0,1]. A metric by the power-mean
/// inequality; the gauge is even and subadditive but not 2-homogeneous.
inline MetricSpace<Vec> make_fractional_power(int dim, double exponent) {
    if (!(exponent > 0.0 && exponent <= 1.0))
        throw ContractViolation("make_fractional_power: exponent must lie in (0,1]");
    MetricSpace<Vec> s = detail::base_real_space("frac-power", dim);
    s.dist = [exponent](const Vec& x, const Vec& y) {
        return std::pow(norm2(point_sub(x, y)), exponent);
    };
    if (std::fabs(exponent - 0.2) < 1e-15) {
        s.closed_form = [](double sigma) -> std::optional<ClosedForm> {
            if (std::fabs(sigma - 4.0) < 1e-12)
                return ClosedForm{0.25, "fifth-root metric at sigma 4", true};
            return std::nullopt;
        };
    }
    const bool euclidean = (exponent == 1.0);
    s.expected_properties = {
        {"metric_axioms", true},
        {"even", true},
        {"subadditive", true},
        {"translation_invariant", true},
        {"two_homogeneous", euclidean},
        {"absolutely_homogeneous", euclidean},
        {"midpoint_convex", euclidean},
    };
    return s;
}

/// d(x, y) = ||x-y|| + | ||x||^2 - ||y||^2 |. The gauge f = ||x|| + ||x||^2
/// is even but not subadditive; the metric is not translation-invariant.
inline MetricSpace<Vec> make_norm_plus_square(int dim) {
    MetricSpace<Vec> s = detail::base_real_space("norm-plus-square", dim);
    s.dist = [](const Vec& x, const Vec& y) {
        const double nx = norm2(x), ny = norm2(y);
        return norm2(point_sub(x, y)) + std::fabs(nx * nx - ny * ny);
    };
    const Vec e = unit_axis(dim, 0);
    s.witness_seeds.push_back({e, e});  // ratio (3/2)^sigma at sigma >= 2
    s.expected_properties = {
        {"metric_axioms", true},        {"even", true},
        {"subadditive", false},         {"translation_invariant", false},
        {"two_homogeneous", false},     {"absolutely_homogeneous", false},
        {"midpoint_convex", true},
    };
    return s;
}

/// Sum-type metric d(x, y) = h(x) + h(y) for x != y, where
/// h(x) = ||x|| + <x,e> on <x,e> >= 0 and ||x|| - 4 <x,e> otherwise.
/// The gauge h is subadditive and positively homogeneous but not even.
inline MetricSpace<Vec> make_asymmetric_sum(int dim, Vec direction = {}) {
    MetricSpace<Vec> s = detail::base_real_space("asym-sum", dim);
    if (direction.empty()) direction = unit_axis(dim, 0);
    if (dimension_of(direction) != dim || std::fabs(norm2(direction) - 1.0) > 1e-12)
        throw ContractViolation("make_asymmetric_sum: direction must be a unit vector");
    const Vec e = direction;
    const auto h = [e](const Vec& x) {
        const double ip = dot(x, e);
        return ip >= 0.0 ? norm2(x) + ip : norm2(x) - 4.0 * ip;
    };
    s.dist = [h](const Vec& x, const Vec& y) {
        if (x == y) return 0.0;
        return h(x) + h(y);
    };
    s.witness_seeds.push_back({e, point_scale(e, 10.0)});
    s.witness_seeds.push_back({e, point_scale(e, 100.0)});
    s.expected_properties = {
        {"metric_axioms", true},        {"even", false},
        {"subadditive", true},          {"translation_invariant", false},
        {"two_homogeneous", true},      {"absolutely_homogeneous", false},
        {"midpoint_convex", true},
    };
    return s;
}

namespace detail {

inline std::string compact_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

/// Conjugate exponent; q(1) = inf and q(inf) = 1.
inline double conjugate_exponent(double p) {
    if (p == 1.0) return kInf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

/// Exact p-metric constants (validity handled by the caller registrations):
///  p in (1,2]: 2^(sigma/p - sigma + 1) on sigma in [p, q]
///  p in (2,inf): 2^(1 - sigma/p) on sigma in [q, p]
///  p in {1, inf}: 2 for every sigma.
inline std::optional<double> pmetric_value(double p, double sigma) {
    constexpr double eps = 1e-12;
    if (p == 1.0 || std::isinf(p)) return 2.0;
    const double q = conjugate_exponent(p);
    if (p > 1.0 && p <= 2.0) {
        if (sigma >= p - eps && sigma <= q + eps) return std::exp2(sigma / p - sigma + 1.0);
        return std::nullopt;
    }
    if (p > 2.0) {
        if (sigma >= q - eps && sigma <= p + eps) return std::exp2(1.0 - sigma / p);
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace detail

/// d(x, y) = ||x-y||_p on R^dim, p in [1, inf].
inline MetricSpace<Vec> make_norm_induced(int dim, double p) {
    if (!(p >= 1.0)) throw ContractViolation("make_norm_induced: p must lie in [1,inf]");
    const std::string label =
        std::isinf(p) ? "norm(inf)" : "norm(" + detail::compact_number(p) + ")";
    MetricSpace<Vec> s = detail::base_real_space(label, dim);
    s.dist = [p](const Vec& x, const Vec& y) { return norm_p(point_sub(x, y), p); };
    if (dim >= 2)
        s.witness_seeds.push_back({unit_axis(dim, 0), unit_axis(dim, 1)});
    const bool hilbert = (p == 2.0 || dim == 1);
    if (hilbert) {
        s.closed_form = [](double sigma) -> std::optional<ClosedForm> {
            if (std::fabs(sigma - 2.0) < 1e-12)
                return ClosedForm{1.0, "inner-product norm, parallelogram identity", true};
            return std::nullopt;
        };
    } else {
        s.closed_form = [p](double sigma) -> std::optional<ClosedForm> {
            if (const auto v = detail::pmetric_value(p, sigma))
                return ClosedForm{*v, "p-metric theorem", true};
            return std::nullopt;
        };
    }
    s.expected_properties = {
        {"metric_axioms", true},        {"even", true},
        {"subadditive", true},          {"translation_invariant", true},
        {"two_homogeneous", true},      {"absolutely_homogeneous", true},
        {"midpoint_convex", true},
    };
    s.clarkson_all = hilbert;
    return s;
}

/// Parses zoo names used by the CLI: "truncated", "truncated(radius)",
/// "frac-power(exponent)", "norm-plus-square", "asym-sum", "norm(p)".
inline MetricSpace<Vec> make_zoo_space(const std::string& spec, int dim) {
    std::string name = spec;
    std::optional<double> arg;
    const auto open = spec.find('(');
    if (open != std::string::npos) {
        if (spec.back() != ')') throw ContractViolation("zoo spec: missing ')': " + spec);
        name = spec.substr(0, open);
        const std::string inside = spec.substr(open + 1, spec.size() - open - 2);
        if (inside == "inf" || inside == "Inf" || inside == "INF") {
            arg = kInf;
        } else {
            try {
                arg = std::stod(inside);
            } catch (const std::exception&) {
                throw ContractViolation("zoo spec: bad parameter '" + inside + "' in " + spec);
            }
        }
    }
    if (name == "truncated") return make_truncated(dim, arg.value_or(1.0));
    if (name == "frac-power") return make_fractional_power(dim, arg.value_or(0.2));
    if (name == "norm-plus-square") return make_norm_plus_square(dim);
    if (name == "asym-sum") return make_asymmetric_sum(dim);
    if (name == "norm") return make_norm_induced(dim, arg.value_or(2.0));
    if (name == "euclidean") return make_norm_induced(dim, 2.0);
    throw ContractViolation("unknown zoo metric: " + spec);
}

inline std::vector<std::string> zoo_names() {
    return {"truncated", "frac-power", "norm-plus-square", "asym-sum", "norm(p)", "euclidean"};
}

}  // namespace njc

#endif  // NJC_ZOO_HPP
