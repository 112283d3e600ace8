#ifndef NJC_METRIC_HPP
#define NJC_METRIC_HPP

#include <cfloat>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "njc/common.hpp"
#include "njc/vec.hpp"

namespace njc {

/// Order sigma of the constant; validated once at construction.
class Order {
public:
    explicit Order(double sigma) : sigma_(sigma) {
        if (!std::isfinite(sigma) || sigma < 1.0)
            throw ContractViolation("Order: sigma must lie in [1, inf)");
    }
    double sigma() const { return sigma_; }

private:
    double sigma_;
};

/// [lo, hi] bracket for the constant; hi may be +inf.
struct Bracket {
    double lo = 0.0;
    double hi = kInf;
    bool hi_finite() const { return std::isfinite(hi); }
};

/// Closed-form value registered for a space. `search_attainable` records
/// whether random search is expected to reach the value (the Hamel-additive
/// supremum, for instance, is approached only along structured sequences).
struct ClosedForm {
    double value = 0.0;
    std::string source;
    bool search_attainable = true;
};

/// A probe stating that in the ambient real space `scaled` equals
/// `lambda * base`, even though the relation is invisible to coordinate-wise
/// scaling (used by the rational-basis spaces).
template <typename P>
struct ScalingWitness {
    P base;
    P scaled;
    double lambda = 1.0;
    std::string note;
};

/// Evaluation contract for a metric d on a vector space, together with the
/// sampling hooks the audits and the estimator need. Instances are immutable
/// after construction and safe to share across threads.
template <typename P>
struct MetricSpace {
    std::string id;
    int dim = 0;
    std::function<double(const P&, const P&)> dist;
    P zero{};
    std::function<P(Rng&, double)> sample;                  // scale parameter
    std::function<P(const P&, Rng&, double)> perturb;       // refinement step

    std::vector<std::pair<P, P>> witness_seeds;             // deterministic ratio candidates
    std::vector<ScalingWitness<P>> scaling_witnesses;       // real-scaling probes
    std::function<std::optional<ClosedForm>(double)> closed_form;  // sigma -> value
    std::map<std::string, bool> expected_properties;        // registered audit profile

    // Registered analytic fact: the gauge satisfies the (alpha,beta)-Clarkson
    // inequality for every conjugate pair (true for inner-product norms and
    // the absolute value).
    bool clarkson_all = false;
};

template <typename P>
void require_dim(const MetricSpace<P>& space, const P& x, const char* where) {
    const int d = dimension_of(x);
    if (d >= 0 && d != space.dim)
        throw ContractViolation(std::string(where) + ": dimension mismatch");
}

/// f(x) := d(x, 0).
template <typename P>
double gauge(const MetricSpace<P>& space, const P& x) {
    require_dim(space, x, "gauge");
    return space.dist(x, space.zero);
}

/// The one-variable gauge of a metric, as a reusable function object.
template <typename P>
class GaugeFunction {
public:
    explicit GaugeFunction(const MetricSpace<P>& source) : source_(&source) {}
    double operator()(const P& x) const { return gauge(*source_, x); }
    const MetricSpace<P>& source() const { return *source_; }

private:
    const MetricSpace<P>* source_;
};

namespace detail {

inline double pow_sigma(double base, double sigma) {
    if (sigma == 1.0) return base;
    if (sigma == 2.0) return base * base;
    return std::pow(base, sigma);
}

/// Ratio evaluation that reports degeneracy instead of throwing; the search
/// loops use this to skip bad pairs cheaply.
template <typename P>
std::optional<double> try_gauge_ratio(const MetricSpace<P>& space, double sigma,
                                      const P& x, const P& y) {
    const double fx = space.dist(x, space.zero);
    const double fy = space.dist(y, space.zero);
    const double den = std::exp2(sigma - 1.0) * (pow_sigma(fx, sigma) + pow_sigma(fy, sigma));
    const double scale = std::max(fx, fy);
    if (!(den > DBL_MIN) || den <= 1e-12 * pow_sigma(scale, sigma)) return std::nullopt;
    const double fpl = space.dist(point_add(x, y), space.zero);
    const double fmi = space.dist(point_sub(x, y), space.zero);
    return (pow_sigma(fpl, sigma) + pow_sigma(fmi, sigma)) / den;
}

}  // namespace detail

/// The ratio G of order sigma:
///   [f^s(x+y) + f^s(x-y)] / [2^(s-1) (f^s(x) + f^s(y))].
template <typename P>
double gauge_ratio(const MetricSpace<P>& space, const Order& order, const P& x, const P& y) {
    require_dim(space, x, "gauge_ratio");
    require_dim(space, y, "gauge_ratio");
    const auto r = detail::try_gauge_ratio(space, order.sigma(), x, y);
    if (!r) throw DegeneratePair("gauge_ratio: denominator below degeneracy threshold");
    return *r;
}

/// The parametrized ratio H of order sigma:
///   [f^s(x+ty) + f^s(x-ty)] / [2^(s-1) (1 + t^s)],  t in [0,1].
template <typename P>
double param_ratio(const MetricSpace<P>& space, const Order& order, const P& x, const P& y,
                   double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw ContractViolation("param_ratio: t must lie in [0,1]");
    require_dim(space, x, "param_ratio");
    require_dim(space, y, "param_ratio");
    const double sigma = order.sigma();
    const P ty = point_scale(y, t);
    const double fpl = space.dist(point_add(x, ty), space.zero);
    const double fmi = space.dist(point_sub(x, ty), space.zero);
    const double den = std::exp2(sigma - 1.0) * (1.0 + detail::pow_sigma(t, sigma));
    return (detail::pow_sigma(fpl, sigma) + detail::pow_sigma(fmi, sigma)) / den;
}

/// A ratio value together with the pair that produced it.
template <typename P>
struct RatioSample {
    P x{};
    P y{};
    double value = 0.0;
};

/// Audit outcomes that activate the theorem bounds.
struct PropertyFlags {
    bool two_homogeneous = false;
    bool subadditive = false;
    bool even = false;
};

/// Bracket implied by the bound theorems: the constant always dominates
/// 2^(2-sigma), dominates 1 under 2-homogeneity, and is capped by 2 when the
/// gauge is subadditive and even.
inline Bracket theorem_bounds(const PropertyFlags& flags, const Order& order) {
    Bracket b;
    const double universal = std::exp2(2.0 - order.sigma());
    b.lo = flags.two_homogeneous ? std::max(universal, 1.0) : universal;
    b.hi = (flags.subadditive && flags.even) ? 2.0 : kInf;
    return b;
}

}  // namespace njc

#endif  // NJC_METRIC_HPP
