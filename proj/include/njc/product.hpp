#ifndef NJC_PRODUCT_HPP
#define NJC_PRODUCT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "njc/common.hpp"
#include "njc/metric.hpp"
#include "njc/properties.hpp"
#include "njc/zoo.hpp"

namespace njc {

// ---------------------------------------------------------------------------
// The simplex-function class Psi_n, product metrics built from it, the m/M
// transfer calculus and the exact p-metric constants.
// ---------------------------------------------------------------------------

/// Simplex point: barycentric coordinates, nonnegative, summing to one.
using SimplexPoint = std::vector<double>;

struct MembershipRecord {
    CheckStatus status = CheckStatus::SKIPPED;
    std::map<std::string, CheckStatus> conditions;
    std::optional<Witness> witness;
    int grid_resolution = 0;
};

/// Candidate psi: Omega_n -> R+, with its membership-audit record for the
/// class Psi_n (vertex condition, convexity, restriction inequality and the
/// max(t) <= psi <= 1 envelope).
struct SimplexFunction {
    int n = 2;
    std::function<double(const SimplexPoint&)> eval;
    enum class Kind { PSI_P, CUSTOM } kind = Kind::CUSTOM;
    double p = 2.0;  // meaningful for PSI_P
    std::string name = "custom";
    MembershipRecord membership;

    double operator()(const SimplexPoint& t) const { return eval(t); }
};

/// psi_p(t) = (t_1^p + ... + t_n^p)^(1/p), max(t) at p = inf.
inline SimplexFunction make_psi_p(int n, double p) {
    if (n < 2) throw ContractViolation("make_psi_p: n must be >= 2");
    if (!(p >= 1.0)) throw ContractViolation("make_psi_p: p must lie in [1,inf]");
    SimplexFunction psi;
    psi.n = n;
    psi.kind = SimplexFunction::Kind::PSI_P;
    psi.p = p;
    psi.name = std::isinf(p) ? "psi_inf" : "psi_" + detail::compact_number(p);
    if (std::isinf(p)) {
        psi.eval = [](const SimplexPoint& t) {
            double m = 0.0;
            for (double v : t) m = std::max(m, v);
            return m;
        };
    } else {
        psi.eval = [p](const SimplexPoint& t) {
            double s = 0.0;
            for (double v : t) s += std::pow(v, p);
            return std::pow(s, 1.0 / p);
        };
    }
    return psi;
}

namespace detail {

inline std::vector<SimplexPoint> simplex_lattice(int n, int resolution) {
    std::vector<SimplexPoint> out;
    SimplexPoint cur(static_cast<std::size_t>(n), 0.0);
    const std::function<void(int, int)> rec = [&](int index, int remaining) {
        if (index == n - 1) {
            cur[static_cast<std::size_t>(index)] =
                static_cast<double>(remaining) / resolution;
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            cur[static_cast<std::size_t>(index)] = static_cast<double>(k) / resolution;
            rec(index + 1, remaining - k);
        }
    };
    rec(0, resolution);
    return out;
}

inline SimplexPoint random_interior_point(int n, Rng& rng) {
    SimplexPoint t(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (auto& v : t) {
        v = -std::log(1.0 - rng.uniform());  // exponential => Dirichlet(1,...,1)
        sum += v;
    }
    for (auto& v : t) v /= sum;
    return t;
}

inline SimplexPoint project_to_simplex(SimplexPoint t) {
    double sum = 0.0;
    for (auto& v : t) {
        v = std::max(v, 0.0);
        sum += v;
    }
    if (sum <= 0.0) {
        std::fill(t.begin(), t.end(), 1.0 / static_cast<double>(t.size()));
        return t;
    }
    for (auto& v : t) v /= sum;
    return t;
}

inline int default_grid_resolution(int n) {
    if (n == 2) return 200;
    if (n == 3) return 64;
    return 16;
}

}  // namespace detail

/// Sampled membership audit for the class Psi_n on a barycentric lattice plus
/// random interior points. PASS is a grid certificate, not a proof.
inline MembershipRecord audit_membership(const SimplexFunction& psi, int grid_resolution) {
    if (grid_resolution < 2)
        throw ContractViolation("audit_membership: grid_resolution must be >= 2");
    const int n = psi.n;
    const Tolerance tol;
    MembershipRecord rec;
    rec.grid_resolution = grid_resolution;

    auto points = detail::simplex_lattice(n, grid_resolution);
    Rng rng(tag_seed(0xC0FFEE, "membership:" + psi.name));
    for (int i = 0; i < 1000; ++i) points.push_back(detail::random_interior_point(n, rng));

    detail::SlackTracker vertex, envelope, restriction, convexity;
    const auto point_witness = [](const SimplexPoint& t, double lhs, double rhs,
                                  const std::string& note) {
        Witness w;
        w.points.push_back(nlohmann::json(t));
        w.lhs = lhs;
        w.rhs = rhs;
        w.note = note;
        return w;
    };

    Tolerance vertex_tol;
    vertex_tol.rel = 1e-12;
    for (int i = 0; i < n; ++i) {
        SimplexPoint e(static_cast<std::size_t>(n), 0.0);
        e[static_cast<std::size_t>(i)] = 1.0;
        const double v = psi(e);
        vertex.observe(detail::eq_slack(v, 1.0, vertex_tol),
                       [&] { return point_witness(e, v, 1.0, "psi(e_i) = 1"); });
    }

    for (const auto& t : points) {
        const double v = psi(t);
        double mx = 0.0;
        for (double c : t) mx = std::max(mx, c);
        envelope.observe(detail::le_slack(mx, v, tol),
                         [&] { return point_witness(t, mx, v, "max(t) <= psi(t)"); });
        envelope.observe(detail::le_slack(v, 1.0, tol),
                         [&] { return point_witness(t, v, 1.0, "psi(t) <= 1"); });
        for (int i = 0; i < n; ++i) {
            const double ti = t[static_cast<std::size_t>(i)];
            if (ti >= 1.0 - 1e-12) continue;
            SimplexPoint face = t;
            for (int j = 0; j < n; ++j)
                face[static_cast<std::size_t>(j)] =
                    (j == i) ? 0.0 : t[static_cast<std::size_t>(j)] / (1.0 - ti);
            const double rhs = (1.0 - ti) * psi(face);
            restriction.observe(detail::le_slack(rhs, v, tol), [&] {
                return point_witness(t, rhs, v, "psi(t) >= (1-t_i) psi(face_i(t))");
            });
        }
    }

    Rng pair_rng(tag_seed(0xC0FFEE, "membership-pairs:" + psi.name));
    const int pairs = static_cast<int>(points.size()) * 2;
    for (int k = 0; k < pairs; ++k) {
        const auto& a = points[static_cast<std::size_t>(
            pair_rng.uniform_int(0, static_cast<int>(points.size()) - 1))];
        const auto& b = points[static_cast<std::size_t>(
            pair_rng.uniform_int(0, static_cast<int>(points.size()) - 1))];
        SimplexPoint mid(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) mid[i] = 0.5 * (a[i] + b[i]);
        const double lhs = psi(mid), rhs = 0.5 * (psi(a) + psi(b));
        convexity.observe(detail::le_slack(lhs, rhs, tol), [&] {
            Witness w;
            w.points.push_back(nlohmann::json(a));
            w.points.push_back(nlohmann::json(b));
            w.lhs = lhs;
            w.rhs = rhs;
            w.note = "midpoint convexity on the simplex";
            return w;
        });
    }

    const CheckResult rv = vertex.finish(vertex_tol);
    const CheckResult re = envelope.finish(tol);
    const CheckResult rr = restriction.finish(tol);
    const CheckResult rc = convexity.finish(tol);
    rec.conditions["vertex"] = rv.status;
    rec.conditions["envelope"] = re.status;
    rec.conditions["inequality_I"] = rr.status;
    rec.conditions["midpoint_convexity"] = rc.status;
    rec.status = CheckStatus::PASS;
    for (const CheckResult* r : {&rv, &re, &rr, &rc}) {
        if (r->status == CheckStatus::FAIL) {
            rec.status = CheckStatus::FAIL;
            if (!rec.witness) rec.witness = r->witness;
        }
    }
    return rec;
}

/// Product space: the composed metric plus its parts.
struct ProductSpace : MetricSpace<Vec> {
    std::vector<MetricSpace<Vec>> components;
    SimplexFunction psi;
    std::vector<int> offsets;  // slice start per component
};

namespace detail {

inline Vec slice(const Vec& x, int offset, int len) {
    return Vec(x.begin() + offset, x.begin() + offset + len);
}

}  // namespace detail

/// Builds the metric
///   d(x, y) = (sum_i d_i) * psi(d_1/sum, ..., d_n/sum)     (0 when x = y)
/// on the concatenated coordinates; for psi_p the direct closed form
/// (sum d_i^p)^(1/p) (max at p = inf) avoids 0/0 at partial coincidences.
inline ProductSpace make_product(std::vector<MetricSpace<Vec>> components, SimplexFunction psi) {
    const int n = static_cast<int>(components.size());
    if (n != psi.n) throw ContractViolation("make_product: psi.n must match component count");
    if (psi.membership.status == CheckStatus::SKIPPED)
        psi.membership = audit_membership(psi, detail::default_grid_resolution(psi.n));
    if (psi.membership.status != CheckStatus::PASS)
        throw ContractViolation("make_product: psi failed the Psi_n membership audit");

    ProductSpace s;
    s.psi = psi;
    s.components = std::move(components);
    s.offsets.resize(static_cast<std::size_t>(n));
    int dim = 0;
    for (int i = 0; i < n; ++i) {
        s.offsets[static_cast<std::size_t>(i)] = dim;
        dim += s.components[static_cast<std::size_t>(i)].dim;
    }
    s.dim = dim;
    s.zero = Vec(static_cast<std::size_t>(dim), 0.0);
    {
        std::string id = "product[" + psi.name + "](";
        for (int i = 0; i < n; ++i) id += (i ? "," : "") + s.components[static_cast<std::size_t>(i)].id;
        s.id = id + ")";
    }

    const auto comps = s.components;  // captured copies keep the space self-contained
    const auto offsets = s.offsets;
    const SimplexFunction psif = s.psi;
    s.dist = [comps, offsets, psif, n](const Vec& x, const Vec& y) {
        std::vector<double> d(static_cast<std::size_t>(n));
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto& c = comps[static_cast<std::size_t>(i)];
            d[static_cast<std::size_t>(i)] =
                c.dist(detail::slice(x, offsets[static_cast<std::size_t>(i)], c.dim),
                       detail::slice(y, offsets[static_cast<std::size_t>(i)], c.dim));
            sum += d[static_cast<std::size_t>(i)];
        }
        if (sum == 0.0) return 0.0;
        if (psif.kind == SimplexFunction::Kind::PSI_P) {
            if (std::isinf(psif.p)) {
                double m = 0.0;
                for (double v : d) m = std::max(m, v);
                return m;
            }
            double acc = 0.0;
            for (double v : d) acc += std::pow(v, psif.p);
            return std::pow(acc, 1.0 / psif.p);
        }
        for (auto& v : d) v /= sum;
        return sum * psif(d);
    };
    s.sample = [comps, offsets, dim, n](Rng& rng, double scale) {
        Vec v(static_cast<std::size_t>(dim));
        for (int i = 0; i < n; ++i) {
            const Vec part = comps[static_cast<std::size_t>(i)].sample(rng, scale);
            std::copy(part.begin(), part.end(),
                      v.begin() + offsets[static_cast<std::size_t>(i)]);
        }
        return v;
    };
    s.perturb = [comps, offsets, n](const Vec& x, Rng& rng, double step) {
        Vec v = x;
        for (int i = 0; i < n; ++i) {
            const auto& c = comps[static_cast<std::size_t>(i)];
            const Vec part = c.perturb(
                detail::slice(x, offsets[static_cast<std::size_t>(i)], c.dim), rng, step);
            std::copy(part.begin(), part.end(),
                      v.begin() + offsets[static_cast<std::size_t>(i)]);
        }
        return v;
    };

    // Deterministic lower-bound witnesses: unit points in two distinct
    // components (their duals are evaluated by the search automatically).
    {
        Rng rng(tag_seed(1, "product-seeds"));
        std::vector<Vec> units(static_cast<std::size_t>(n));
        bool ok = true;
        for (int i = 0; i < n; ++i) {
            const auto& c = comps[static_cast<std::size_t>(i)];
            Vec u = c.sample(rng, 1.0);
            const double fu = c.dist(u, c.zero);
            if (!(fu > 0.0)) {
                ok = false;
                break;
            }
            units[static_cast<std::size_t>(i)] = point_scale(u, 1.0 / fu);
        }
        if (ok) {
            for (int i = 0; i < n && ok; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    Vec x(static_cast<std::size_t>(dim), 0.0), y(x);
                    std::copy(units[static_cast<std::size_t>(i)].begin(),
                              units[static_cast<std::size_t>(i)].end(),
                              x.begin() + offsets[static_cast<std::size_t>(i)]);
                    std::copy(units[static_cast<std::size_t>(j)].begin(),
                              units[static_cast<std::size_t>(j)].end(),
                              y.begin() + offsets[static_cast<std::size_t>(j)]);
                    s.witness_seeds.push_back({x, y});
                }
            }
        }
    }

    // Closed form when the p-metric theorem's hypotheses are registered for
    // every component.
    const bool all_homogeneous = std::all_of(
        s.components.begin(), s.components.end(), [](const MetricSpace<Vec>& c) {
            auto it = c.expected_properties.find("two_homogeneous");
            return it != c.expected_properties.end() && it->second;
        });
    const bool some_even = std::any_of(
        s.components.begin(), s.components.end(), [](const MetricSpace<Vec>& c) {
            auto it = c.expected_properties.find("even");
            return it != c.expected_properties.end() && it->second;
        });
    const bool all_subadd_even = std::all_of(
        s.components.begin(), s.components.end(), [](const MetricSpace<Vec>& c) {
            auto se = c.expected_properties.find("subadditive");
            auto ev = c.expected_properties.find("even");
            return se != c.expected_properties.end() && se->second &&
                   ev != c.expected_properties.end() && ev->second;
        });
    const bool all_clarkson = std::all_of(
        s.components.begin(), s.components.end(),
        [](const MetricSpace<Vec>& c) { return c.clarkson_all; });
    if (psi.kind == SimplexFunction::Kind::PSI_P && all_homogeneous && some_even) {
        const double p = psi.p;
        if ((p == 1.0 || std::isinf(p)) && all_subadd_even) {
            s.closed_form = [](double) {
                return std::optional<ClosedForm>(
                    ClosedForm{2.0, "p-metric theorem, p in {1,inf}", true});
            };
        } else if (p > 1.0 && !std::isinf(p) && all_clarkson) {
            s.closed_form = [p](double sigma) -> std::optional<ClosedForm> {
                if (const auto v = detail::pmetric_value(p, sigma))
                    return ClosedForm{*v, "p-metric theorem", true};
                return std::nullopt;
            };
        }
    }
    if (all_subadd_even) {
        // product gauge inherits subadditivity and evenness
        s.expected_properties["subadditive"] = true;
        s.expected_properties["even"] = true;
    }
    if (all_homogeneous) s.expected_properties["two_homogeneous"] = true;
    return s;
}

struct MinMaxRatio {
    double m = 0.0;
    double M = 0.0;
    SimplexPoint witness_m;
    SimplexPoint witness_M;
};

/// min and max of psi/phi over the simplex: lattice scan, random interior
/// points, then projected local refinement around both extremizers. Both
/// functions must belong to the class (members are bounded below by max(t),
/// so the ratio is well defined).
inline MinMaxRatio min_max_ratio(const SimplexFunction& psi, const SimplexFunction& phi,
                                 int grid_resolution, int refine_steps) {
    if (psi.n != phi.n) throw ContractViolation("min_max_ratio: mismatched n");
    const int n = psi.n;
    auto points = detail::simplex_lattice(n, grid_resolution);
    Rng rng(tag_seed(0xAB, "minmax:" + psi.name + "/" + phi.name));
    for (int i = 0; i < 1000; ++i) points.push_back(detail::random_interior_point(n, rng));

    MinMaxRatio r;
    r.m = kInf;
    r.M = -kInf;
    const auto ratio = [&](const SimplexPoint& t) { return psi(t) / phi(t); };
    for (const auto& t : points) {
        const double v = ratio(t);
        if (v < r.m) {
            r.m = v;
            r.witness_m = t;
        }
        if (v > r.M) {
            r.M = v;
            r.witness_M = t;
        }
    }
    double step = 0.5 / grid_resolution * 10.0;
    for (int k = 0; k < refine_steps; ++k, step *= 0.9) {
        SimplexPoint tm = r.witness_m, tM = r.witness_M;
        for (auto& v : tm) v += step * rng.gaussian();
        for (auto& v : tM) v += step * rng.gaussian();
        tm = detail::project_to_simplex(std::move(tm));
        tM = detail::project_to_simplex(std::move(tM));
        if (const double v = ratio(tm); v < r.m) {
            r.m = v;
            r.witness_m = tm;
        }
        if (const double v = ratio(tM); v > r.M) {
            r.M = v;
            r.witness_M = tM;
        }
    }
    return r;
}

/// Transfer sandwich: [(m/M)^sigma C_phi, (M/m)^sigma C_phi].
inline Bracket transfer_bounds(double c_phi, double m, double M, const Order& order) {
    if (!(c_phi > 0.0) || !(m > 0.0) || !(m <= M))
        throw ContractViolation("transfer_bounds: need C_phi > 0 and 0 < m <= M");
    Bracket b;
    b.lo = std::pow(m / M, order.sigma()) * c_phi;
    b.hi = std::pow(M / m, order.sigma()) * c_phi;
    return b;
}

enum class DominationSide { ABOVE, BELOW };

/// Exact constant under domination (n = 2): M_2^sigma 2^(1-sigma/2) when
/// psi >= phi, and m_2^(-sigma) 2^(1-sigma/2) when psi <= phi. The caller
/// attests the hypotheses (reference constant, homogeneity, one even
/// component); the report records the attestation.
inline double dominating_exact_constant(double m2_or_M2, const Order& order, DominationSide side) {
    const double base = std::exp2(1.0 - order.sigma() / 2.0);
    if (side == DominationSide::ABOVE) return std::pow(m2_or_M2, order.sigma()) * base;
    return std::pow(m2_or_M2, -order.sigma()) * base;
}

/// Exact p-metric constant when sigma lies in the theorem's validity range.
inline std::optional<double> pmetric_constant(double p, double sigma) {
    if (!(p >= 1.0)) throw ContractViolation("pmetric_constant: p must lie in [1,inf]");
    if (!(sigma >= 1.0)) throw ContractViolation("pmetric_constant: sigma must lie in [1,inf)");
    return detail::pmetric_value(p, sigma);
}

struct ClarksonLiftReport {
    CheckStatus lift_status = CheckStatus::SKIPPED;
    std::vector<CheckResult> component_results;
    CheckResult product_result;
};

/// Verifies on samples that the (p,q)-Clarkson inequality lifts from the
/// components to the psi_p product. When a component fails the hypothesis the
/// lift claim is SKIPPED but the direct product check is still reported.
inline ClarksonLiftReport check_clarkson_lift(const std::vector<MetricSpace<Vec>>& components,
                                              double p, int samples, uint64_t seed) {
    if (!(p > 1.0 && p <= 2.0))
        throw ContractViolation("check_clarkson_lift: p must lie in (1,2]");
    const double q = p / (p - 1.0);
    ClarksonLiftReport rep;
    bool all_pass = true;
    for (std::size_t i = 0; i < components.size(); ++i) {
        rep.component_results.push_back(
            check_clarkson(components[i], p, q, samples, child_seed(seed, i)));
        all_pass = all_pass && rep.component_results.back().status == CheckStatus::PASS;
    }
    const ProductSpace prod =
        make_product(components, make_psi_p(static_cast<int>(components.size()), p));
    rep.product_result = check_clarkson(prod, p, q, samples, child_seed(seed, 0xBEEF));
    rep.lift_status = all_pass ? rep.product_result.status : CheckStatus::SKIPPED;
    return rep;
}

enum class PowerMeanVariant { I, II, III };

/// Power-mean inequality chains used as test oracles:
///  I  (alpha in (0,1]): (sum a)^alpha <= sum a^alpha <= n^(1-alpha) (sum a)^alpha
///  II (alpha >= 1):     sum a^alpha <= (sum a)^alpha <= n^(alpha-1) sum a^alpha
///  III(alpha in (0,1]): (sum (a+b)^alpha)^(1/alpha)
///                         >= (sum a^alpha)^(1/alpha) + (sum b^alpha)^(1/alpha)
inline bool power_mean_oracle(PowerMeanVariant variant, double alpha,
                              const std::vector<double>& a,
                              const std::vector<double>& b = {}) {
    for (double v : a)
        if (v < 0.0) throw ContractViolation("power_mean_oracle: inputs must be nonnegative");
    for (double v : b)
        if (v < 0.0) throw ContractViolation("power_mean_oracle: inputs must be nonnegative");
    const double n = static_cast<double>(a.size());
    constexpr double slack = 1e-12;
    const auto leq = [&](double l, double r) {
        return l <= r + slack * std::max({1.0, std::fabs(l), std::fabs(r)});
    };
    double sum = 0.0, sum_pow = 0.0;
    for (double v : a) {
        sum += v;
        sum_pow += std::pow(v, alpha);
    }
    switch (variant) {
        case PowerMeanVariant::I: {
            if (!(alpha > 0.0 && alpha <= 1.0))
                throw ContractViolation("power_mean_oracle I: alpha must lie in (0,1]");
            const double lo = std::pow(sum, alpha);
            return leq(lo, sum_pow) && leq(sum_pow, std::pow(n, 1.0 - alpha) * lo);
        }
        case PowerMeanVariant::II: {
            if (!(alpha >= 1.0))
                throw ContractViolation("power_mean_oracle II: alpha must be >= 1");
            const double mid = std::pow(sum, alpha);
            return leq(sum_pow, mid) && leq(mid, std::pow(n, alpha - 1.0) * sum_pow);
        }
        case PowerMeanVariant::III: {
            if (!(alpha > 0.0 && alpha <= 1.0))
                throw ContractViolation("power_mean_oracle III: alpha must lie in (0,1]");
            if (b.size() != a.size())
                throw ContractViolation("power_mean_oracle III: need equally sized tuples");
            double sum_ab = 0.0, sum_b = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                sum_ab += std::pow(a[i] + b[i], alpha);
                sum_b += std::pow(b[i], alpha);
            }
            const double lhs = std::pow(sum_ab, 1.0 / alpha);
            const double rhs = std::pow(sum_pow, 1.0 / alpha) + std::pow(sum_b, 1.0 / alpha);
            return leq(rhs, lhs);
        }
    }
    return false;
}

}  // namespace njc

#endif  // NJC_PRODUCT_HPP
