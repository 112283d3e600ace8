#ifndef NJC_PROPERTIES_HPP
#define NJC_PROPERTIES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "njc/common.hpp"
#include "njc/metric.hpp"

namespace njc {

// ---------------------------------------------------------------------------
// Sampled structural audits of a gauge/metric. A PASS is always "no
// counterexample found in N samples", never a proof; a FAIL carries a witness
// that re-evaluates as a violation under the stated tolerance.
// ---------------------------------------------------------------------------

enum class CheckStatus { PASS, FAIL, SKIPPED };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::PASS: return "PASS";
        case CheckStatus::FAIL: return "FAIL";
        default: return "SKIPPED";
    }
}

struct Tolerance {
    double rel = 1e-9;
    double abs_floor = 1e-12;
    double floor_scale() const { return abs_floor / rel; }
};

struct Witness {
    nlohmann::json points = nlohmann::json::array();
    std::vector<double> scalars;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string note;
};

struct CheckResult {
    CheckStatus status = CheckStatus::SKIPPED;
    double margin = 0.0;  // worst normalized slack observed
    std::optional<Witness> witness;
};

namespace detail {

/// Normalized signed slack of the claim "lhs <= rhs". Nonnegative slack means
/// the claim holds on this sample; a value below -tol.rel is a violation.
inline double le_slack(double lhs, double rhs, const Tolerance& tol) {
    const double m = std::max({std::fabs(lhs), std::fabs(rhs), tol.floor_scale()});
    return (rhs - lhs) / m;
}

/// Slack of the claim "lhs == rhs" (always <= 0).
inline double eq_slack(double lhs, double rhs, const Tolerance& tol) {
    const double m = std::max({std::fabs(lhs), std::fabs(rhs), tol.floor_scale()});
    return -std::fabs(lhs - rhs) / m;
}

class SlackTracker {
public:
    void observe(double slack, const std::function<Witness()>& make_witness) {
        if (slack < min_slack_) {
            min_slack_ = slack;
            worst_ = make_witness();
        }
        seen_ = true;
    }

    CheckResult finish(const Tolerance& tol) const {
        CheckResult r;
        if (!seen_) {
            r.status = CheckStatus::SKIPPED;
            return r;
        }
        r.margin = min_slack_;
        if (min_slack_ < -tol.rel) {
            r.status = CheckStatus::FAIL;
            r.witness = worst_;
        } else {
            r.status = CheckStatus::PASS;
        }
        return r;
    }

    double min_slack() const { return min_slack_; }

private:
    double min_slack_ = kInf;
    std::optional<Witness> worst_;
    bool seen_ = false;
};

inline const std::vector<double>& audit_scales() {
    static const std::vector<double> s = {0.01, 1.0, 100.0};
    return s;
}

template <typename P>
Witness make_point_witness(std::initializer_list<const P*> pts, std::vector<double> scalars,
                           double lhs, double rhs, const std::string& note) {
    Witness w;
    for (const P* p : pts) w.points.push_back(nlohmann::json(*p));
    w.scalars = std::move(scalars);
    w.lhs = lhs;
    w.rhs = rhs;
    w.note = note;
    return w;
}

}  // namespace detail

enum class Property {
    even,
    subadditive,
    midpoint_convex,
    convex,
    translation_invariant,
    positively_homogeneous,
    absolutely_homogeneous,
    lambda_homogeneous,
    scaling_contraction,  // f(tx) <= t f(x) for t in [0,1]
    half_contraction,     // f(x/2) <= f(x)/2
};

inline const char* property_name(Property p) {
    switch (p) {
        case Property::even: return "even";
        case Property::subadditive: return "subadditive";
        case Property::midpoint_convex: return "midpoint_convex";
        case Property::convex: return "convex";
        case Property::translation_invariant: return "translation_invariant";
        case Property::positively_homogeneous: return "positively_homogeneous";
        case Property::absolutely_homogeneous: return "absolutely_homogeneous";
        case Property::lambda_homogeneous: return "lambda_homogeneous";
        case Property::scaling_contraction: return "scaling_contraction";
        case Property::half_contraction: return "half_contraction";
    }
    return "?";
}

/// Metric axioms on sampled triples: symmetry, identity, positivity and the
/// triangle inequality. FAIL is a result, not an error.
template <typename P>
CheckResult check_metric_axioms(const MetricSpace<P>& space, int samples, uint64_t seed,
                                Tolerance tol = {}) {
    if (samples < 1) throw ContractViolation("check_metric_axioms: samples must be >= 1");
    Rng rng(tag_seed(seed, "metric_axioms"));
    detail::SlackTracker tracker;
    const auto& scales = detail::audit_scales();
    for (int i = 0; i < samples; ++i) {
        const double sx = scales[i % scales.size()];
        const double sy = scales[(i / scales.size()) % scales.size()];
        const P x = space.sample(rng, sx);
        const P y = space.sample(rng, sy);
        const P z = space.sample(rng, sy);
        const double dxy = space.dist(x, y), dyx = space.dist(y, x);
        tracker.observe(detail::eq_slack(dxy, dyx, tol), [&] {
            return detail::make_point_witness<P>({&x, &y}, {}, dxy, dyx, "symmetry");
        });
        const double dxx = space.dist(x, x);
        tracker.observe(detail::eq_slack(dxx, 0.0, tol), [&] {
            return detail::make_point_witness<P>({&x}, {}, dxx, 0.0, "identity d(x,x)=0");
        });
        if (dxy <= 0.0 && !(x == y)) {
            tracker.observe(-1.0, [&] {
                return detail::make_point_witness<P>({&x, &y}, {}, dxy, 0.0,
                                                     "positivity d(x,y)>0 for x!=y");
            });
        }
        const double lhs = space.dist(x, z);
        const double rhs = space.dist(x, y) + space.dist(y, z);
        tracker.observe(detail::le_slack(lhs, rhs, tol), [&] {
            return detail::make_point_witness<P>({&x, &y, &z}, {}, lhs, rhs, "triangle inequality");
        });
    }
    return tracker.finish(tol);
}

/// Checks one property of the gauge f(x) = d(x, 0) on sampled points. The
/// homogeneity audits additionally replay any real-scaling witnesses the
/// space registered (relations between points that coefficient-wise scaling
/// cannot express).
template <typename P>
CheckResult check_property(const MetricSpace<P>& space, Property property, int samples,
                           uint64_t seed, std::optional<double> lambda = std::nullopt,
                           Tolerance tol = {}) {
    if ((property == Property::lambda_homogeneous) != lambda.has_value())
        throw ContractViolation("check_property: lambda supplied iff property is lambda_homogeneous");
    Rng rng(tag_seed(seed, property_name(property)));
    detail::SlackTracker tracker;
    const auto& scales = detail::audit_scales();
    const GaugeFunction<P> f(space);

    for (int i = 0; i < samples; ++i) {
        const double sx = scales[i % scales.size()];
        const double sy = scales[(i / scales.size()) % scales.size()];
        const P x = space.sample(rng, sx);
        const P y = space.sample(rng, sy);
        switch (property) {
            case Property::even: {
                const P nx = point_neg(x);
                const double l = f(nx), r = f(x);
                tracker.observe(detail::eq_slack(l, r, tol), [&] {
                    return detail::make_point_witness<P>({&x}, {}, l, r, "f(-x) = f(x)");
                });
                break;
            }
            case Property::subadditive: {
                const double l = f(point_add(x, y)), r = f(x) + f(y);
                tracker.observe(detail::le_slack(l, r, tol), [&] {
                    return detail::make_point_witness<P>({&x, &y}, {}, l, r, "f(x+y) <= f(x)+f(y)");
                });
                break;
            }
            case Property::midpoint_convex: {
                const double l = f(point_scale(point_add(x, y), 0.5));
                const double r = 0.5 * (f(x) + f(y));
                tracker.observe(detail::le_slack(l, r, tol), [&] {
                    return detail::make_point_witness<P>({&x, &y}, {}, l, r,
                                                         "f((x+y)/2) <= (f(x)+f(y))/2");
                });
                break;
            }
            case Property::convex: {
                static constexpr double fixed[] = {0.25, 0.5, 0.75};
                const double t = (i % 4 < 3) ? fixed[i % 4] : rng.uniform();
                const P mix = point_add(point_scale(x, t), point_scale(y, 1.0 - t));
                const double l = f(mix), r = t * f(x) + (1.0 - t) * f(y);
                tracker.observe(detail::le_slack(l, r, tol), [&] {
                    return detail::make_point_witness<P>({&x, &y}, {t}, l, r,
                                                         "f(tx+(1-t)y) <= t f(x)+(1-t) f(y)");
                });
                break;
            }
            case Property::translation_invariant: {
                const P z = space.sample(rng, sx);
                const double l = space.dist(point_add(x, z), point_add(y, z));
                const double r = space.dist(x, y);
                tracker.observe(detail::eq_slack(l, r, tol), [&] {
                    return detail::make_point_witness<P>({&x, &y, &z}, {}, l, r,
                                                         "d(x+z,y+z) = d(x,y)");
                });
                break;
            }
            case Property::scaling_contraction: {
                const double t = rng.uniform();
                const double l = f(point_scale(x, t)), r = t * f(x);
                tracker.observe(detail::le_slack(l, r, tol), [&] {
                    return detail::make_point_witness<P>({&x}, {t}, l, r, "f(tx) <= t f(x), t in [0,1]");
                });
                break;
            }
            case Property::half_contraction: {
                const double l = f(point_scale(x, 0.5)), r = 0.5 * f(x);
                tracker.observe(detail::le_slack(l, r, tol), [&] {
                    return detail::make_point_witness<P>({&x}, {}, l, r, "f(x/2) <= f(x)/2");
                });
                break;
            }
            case Property::positively_homogeneous: {
                static constexpr double probes[] = {0.5, 2.0};
                const double t = (i % 3 < 2) ? probes[i % 3] : rng.uniform(0.0, 4.0);
                const double l = f(point_scale(x, t)), r = t * f(x);
                tracker.observe(detail::eq_slack(l, r, tol), [&] {
                    return detail::make_point_witness<P>({&x}, {t}, l, r, "f(tx) = t f(x), t >= 0");
                });
                break;
            }
            case Property::absolutely_homogeneous: {
                static constexpr double probes[] = {0.5, 2.0, -1.0};
                const double t = (i % 4 < 3) ? probes[i % 4] : rng.uniform(-4.0, 4.0);
                const double l = f(point_scale(x, t)), r = std::fabs(t) * f(x);
                tracker.observe(detail::eq_slack(l, r, tol), [&] {
                    return detail::make_point_witness<P>({&x}, {t}, l, r, "f(tx) = |t| f(x)");
                });
                break;
            }
            case Property::lambda_homogeneous: {
                const double t = *lambda;
                const double l = f(point_scale(x, t)), r = t * f(x);
                tracker.observe(detail::eq_slack(l, r, tol), [&] {
                    return detail::make_point_witness<P>({&x}, {t}, l, r, "f(tx) = t f(x)");
                });
                break;
            }
        }
    }

    if (property == Property::positively_homogeneous ||
        property == Property::absolutely_homogeneous) {
        for (const auto& w : space.scaling_witnesses) {
            const double l = f(w.scaled);
            const double r = std::fabs(w.lambda) * f(w.base);
            tracker.observe(detail::eq_slack(l, r, tol), [&] {
                return detail::make_point_witness<P>({&w.base, &w.scaled}, {w.lambda}, l, r,
                                                     "registered scaling witness: " + w.note);
            });
        }
    }
    return tracker.finish(tol);
}

/// f(2x) = 2 f(x), with iterate spot-checks at k = -1 and k = 2.
template <typename P>
CheckResult check_two_homogeneous(const MetricSpace<P>& space, int samples, uint64_t seed,
                                  Tolerance tol = {}) {
    Rng rng(tag_seed(seed, "two_homogeneous"));
    detail::SlackTracker tracker;
    const auto& scales = detail::audit_scales();
    const GaugeFunction<P> f(space);
    for (int i = 0; i < samples; ++i) {
        const P x = space.sample(rng, scales[i % scales.size()]);
        const double fx = f(x);
        struct Probe { double factor, multiple; const char* note; };
        static constexpr Probe probes[] = {
            {2.0, 2.0, "f(2x) = 2 f(x)"},
            {0.5, 0.5, "f(x/2) = f(x)/2"},
            {4.0, 4.0, "f(4x) = 4 f(x)"},
        };
        for (const auto& p : probes) {
            const double l = f(point_scale(x, p.factor)), r = p.multiple * fx;
            tracker.observe(detail::eq_slack(l, r, tol), [&] {
                return detail::make_point_witness<P>({&x}, {p.factor}, l, r, p.note);
            });
        }
    }
    return tracker.finish(tol);
}

/// Order-sigma parallelogram identity on sampled pairs:
///   f^s(x+y) + f^s(x-y) = 2^(s/2) (f^s(x) + f^s(y)).
template <typename P>
CheckResult check_parallelogram(const MetricSpace<P>& space, const Order& order, int samples,
                                uint64_t seed, Tolerance tol = {}) {
    Rng rng(tag_seed(seed, "parallelogram"));
    detail::SlackTracker tracker;
    const auto& scales = detail::audit_scales();
    const GaugeFunction<P> f(space);
    const double sigma = order.sigma();
    for (int i = 0; i < samples; ++i) {
        const P x = space.sample(rng, scales[i % scales.size()]);
        const P y = space.sample(rng, scales[(i / scales.size()) % scales.size()]);
        const double l = detail::pow_sigma(f(point_add(x, y)), sigma) +
                         detail::pow_sigma(f(point_sub(x, y)), sigma);
        const double r =
            std::exp2(sigma / 2.0) * (detail::pow_sigma(f(x), sigma) + detail::pow_sigma(f(y), sigma));
        tracker.observe(detail::eq_slack(l, r, tol), [&] {
            return detail::make_point_witness<P>({&x, &y}, {sigma}, l, r, "parallelogram identity");
        });
    }
    return tracker.finish(tol);
}

namespace detail {

inline void require_conjugate(double alpha, double beta) {
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw ContractViolation("Clarkson check: alpha must lie in (1,2]");
    if (std::fabs(1.0 / alpha + 1.0 / beta - 1.0) > 1e-12)
        throw ContractViolation("Clarkson check: 1/alpha + 1/beta must equal 1");
}

}  // namespace detail

/// (alpha,beta)-Clarkson inequality on sampled pairs:
///   f^b(x+y) + f^b(x-y) <= 2 (f^a(x) + f^a(y))^(b/a).
template <typename P>
CheckResult check_clarkson(const MetricSpace<P>& space, double alpha, double beta, int samples,
                           uint64_t seed, Tolerance tol = {}) {
    detail::require_conjugate(alpha, beta);
    Rng rng(tag_seed(seed, "clarkson"));
    detail::SlackTracker tracker;
    const auto& scales = detail::audit_scales();
    const GaugeFunction<P> f(space);
    for (int i = 0; i < samples; ++i) {
        const P x = space.sample(rng, scales[i % scales.size()]);
        const P y = space.sample(rng, scales[(i / scales.size()) % scales.size()]);
        const double l = std::pow(f(point_add(x, y)), beta) + std::pow(f(point_sub(x, y)), beta);
        const double r = 2.0 * std::pow(std::pow(f(x), alpha) + std::pow(f(y), alpha), beta / alpha);
        tracker.observe(detail::le_slack(l, r, tol), [&] {
            return detail::make_point_witness<P>({&x, &y}, {alpha, beta}, l, r,
                                                 "Clarkson inequality");
        });
    }
    return tracker.finish(tol);
}

/// Reverse form: 2 (f^b(x) + f^b(y))^(a/b) <= f^a(x+y) + f^a(x-y).
template <typename P>
CheckResult check_reverse_clarkson(const MetricSpace<P>& space, double alpha, double beta,
                                   int samples, uint64_t seed, Tolerance tol = {}) {
    detail::require_conjugate(alpha, beta);
    Rng rng(tag_seed(seed, "clarkson"));  // shared sample stream with check_clarkson
    detail::SlackTracker tracker;
    const auto& scales = detail::audit_scales();
    const GaugeFunction<P> f(space);
    for (int i = 0; i < samples; ++i) {
        const P x = space.sample(rng, scales[i % scales.size()]);
        const P y = space.sample(rng, scales[(i / scales.size()) % scales.size()]);
        const double l = 2.0 * std::pow(std::pow(f(x), beta) + std::pow(f(y), beta), alpha / beta);
        const double r = std::pow(f(point_add(x, y)), alpha) + std::pow(f(point_sub(x, y)), alpha);
        tracker.observe(detail::le_slack(l, r, tol), [&] {
            return detail::make_point_witness<P>({&x, &y}, {alpha, beta}, l, r,
                                                 "reverse Clarkson inequality");
        });
    }
    return tracker.finish(tol);
}

/// Agreement of the six equivalent conditions for translation-invariant
/// metrics, evaluated on one shared sample set. SKIPPED when the
/// translation-invariance audit fails. Registered scaling witnesses are
/// deliberately not consulted here: this check compares sampled behaviour
/// only, on identical draws.
template <typename P>
CheckResult equivalence_consistency(const MetricSpace<P>& space, int samples, uint64_t seed,
                                    Tolerance tol = {}) {
    const CheckResult ti = check_property(space, Property::translation_invariant, samples, seed,
                                          std::nullopt, tol);
    if (ti.status != CheckStatus::PASS) {
        CheckResult r;
        r.status = CheckStatus::SKIPPED;
        Witness w;
        w.note = "translation-invariance audit did not pass";
        r.witness = w;
        return r;
    }

    Rng rng(tag_seed(seed, "equivalence_consistency"));
    const auto& scales = detail::audit_scales();
    const GaugeFunction<P> f(space);
    constexpr int kConditions = 6;
    detail::SlackTracker trackers[kConditions];
    static const char* names[kConditions] = {
        "midpoint_convex", "convex",      "scaling_contraction",
        "half_contraction", "positively_homogeneous", "absolutely_homogeneous"};

    for (int i = 0; i < samples; ++i) {
        const P x = space.sample(rng, scales[i % scales.size()]);
        const P y = space.sample(rng, scales[(i / scales.size()) % scales.size()]);
        const double t01 = rng.uniform();
        const double tpos = rng.uniform(0.0, 4.0);
        const double tany = rng.uniform(-4.0, 4.0);
        const double fx = f(x), fy = f(y);

        const auto witness = [&](double l, double r, const char* note) {
            return [&, l, r, note] {
                return detail::make_point_witness<P>({&x, &y}, {t01, tpos, tany}, l, r, note);
            };
        };

        double l = f(point_scale(point_add(x, y), 0.5)), r = 0.5 * (fx + fy);
        trackers[0].observe(detail::le_slack(l, r, tol), witness(l, r, names[0]));

        l = f(point_add(point_scale(x, t01), point_scale(y, 1.0 - t01)));
        r = t01 * fx + (1.0 - t01) * fy;
        trackers[1].observe(detail::le_slack(l, r, tol), witness(l, r, names[1]));

        l = f(point_scale(x, t01)), r = t01 * fx;
        trackers[2].observe(detail::le_slack(l, r, tol), witness(l, r, names[2]));

        l = f(point_scale(x, 0.5)), r = 0.5 * fx;
        trackers[3].observe(detail::le_slack(l, r, tol), witness(l, r, names[3]));

        l = f(point_scale(x, tpos)), r = tpos * fx;
        trackers[4].observe(detail::eq_slack(l, r, tol), witness(l, r, names[4]));

        l = f(point_scale(x, tany)), r = std::fabs(tany) * fx;
        trackers[5].observe(detail::eq_slack(l, r, tol), witness(l, r, names[5]));
    }

    CheckResult byname[kConditions];
    bool all_agree = true;
    double min_margin = kInf;
    for (int c = 0; c < kConditions; ++c) {
        byname[c] = trackers[c].finish(tol);
        min_margin = std::min(min_margin, byname[c].margin);
        if (byname[c].status != byname[0].status) all_agree = false;
    }

    CheckResult out;
    out.margin = min_margin;
    out.status = all_agree ? CheckStatus::PASS : CheckStatus::FAIL;
    Witness w;
    std::string note = "condition statuses:";
    for (int c = 0; c < kConditions; ++c)
        note += std::string(" ") + names[c] + "=" + to_string(byname[c].status);
    w.note = note;
    if (!all_agree) {
        for (int c = 0; c < kConditions; ++c) {
            if (byname[c].status == CheckStatus::FAIL && byname[c].witness) {
                w.points = byname[c].witness->points;
                w.scalars = byname[c].witness->scalars;
                w.lhs = byname[c].witness->lhs;
                w.rhs = byname[c].witness->rhs;
                break;
            }
        }
        out.witness = w;
    } else {
        out.witness = w;  // keep the per-condition summary either way
    }
    return out;
}

struct PropertyReport {
    std::string space_id;
    std::map<std::string, CheckResult> checks;
    int sample_count = 0;
    uint64_t seed = 0;
    double tolerance = 0.0;

    const CheckResult* find(const std::string& name) const {
        auto it = checks.find(name);
        return it == checks.end() ? nullptr : &it->second;
    }
    bool passed(const std::string& name) const {
        const CheckResult* r = find(name);
        return r && r->status == CheckStatus::PASS;
    }
};

/// Runs the full default audit battery.
template <typename P>
PropertyReport run_standard_audit(const MetricSpace<P>& space, int samples, uint64_t seed,
                                  Tolerance tol = {}) {
    PropertyReport rep;
    rep.space_id = space.id;
    rep.sample_count = samples;
    rep.seed = seed;
    rep.tolerance = tol.rel;
    rep.checks["metric_axioms"] = check_metric_axioms(space, samples, seed, tol);
    for (Property p : {Property::even, Property::subadditive, Property::midpoint_convex,
                       Property::convex, Property::translation_invariant,
                       Property::scaling_contraction, Property::half_contraction,
                       Property::positively_homogeneous, Property::absolutely_homogeneous}) {
        rep.checks[property_name(p)] = check_property(space, p, samples, seed, std::nullopt, tol);
    }
    rep.checks["two_homogeneous"] = check_two_homogeneous(space, samples, seed, tol);
    rep.checks["parallelogram_order2"] =
        check_parallelogram(space, Order(2.0), samples, seed, tol);
    rep.checks["equivalence_consistency"] = equivalence_consistency(space, samples, seed, tol);
    return rep;
}

inline PropertyFlags flags_from(const PropertyReport& report) {
    PropertyFlags f;
    f.two_homogeneous = report.passed("two_homogeneous");
    f.subadditive = report.passed("subadditive");
    f.even = report.passed("even");
    return f;
}

inline Bracket theorem_bounds(const PropertyReport& report, const Order& order) {
    return theorem_bounds(flags_from(report), order);
}

enum class Normability { NORMABLE, NON_NORMABLE, UNDECIDED };

inline const char* to_string(Normability n) {
    switch (n) {
        case Normability::NORMABLE: return "NORMABLE";
        case Normability::NON_NORMABLE: return "NON_NORMABLE";
        default: return "UNDECIDED";
    }
}

struct NormabilityVerdict {
    Normability verdict = Normability::UNDECIDED;
    std::optional<Witness> witness;
    std::string rationale;
};

/// Normability of the metric, decided from the audit report. Absolute
/// homogeneity is necessary for a norm, so any violation witness (sampled or
/// registered) settles NON_NORMABLE; absolute homogeneity plus midpoint
/// convexity, or plus translation-invariance (which yields subadditivity),
/// settles NORMABLE.
template <typename P>
NormabilityVerdict normability_verdict(const MetricSpace<P>& space, const PropertyReport& report) {
    (void)space;
    for (const char* key : {"translation_invariant", "midpoint_convex", "absolutely_homogeneous"})
        if (!report.find(key))
            throw ContractViolation(std::string("normability_verdict: report lacks '") + key + "'");

    const CheckResult& ah = *report.find("absolutely_homogeneous");
    const CheckResult& mp = *report.find("midpoint_convex");
    const CheckResult& ti = *report.find("translation_invariant");
    const CheckResult* sa = report.find("subadditive");

    NormabilityVerdict v;
    if (ah.status == CheckStatus::FAIL) {
        v.verdict = Normability::NON_NORMABLE;
        v.witness = ah.witness;
        v.rationale = "gauge is not absolutely homogeneous";
        return v;
    }
    if (sa && sa->status == CheckStatus::FAIL) {
        v.verdict = Normability::NON_NORMABLE;
        v.witness = sa->witness;
        v.rationale = "gauge is not subadditive";
        return v;
    }
    if (mp.status == CheckStatus::FAIL && ah.status == CheckStatus::PASS) {
        v.verdict = Normability::NON_NORMABLE;
        v.witness = mp.witness;
        v.rationale = "absolutely homogeneous but not midpoint convex";
        return v;
    }
    if (ah.status == CheckStatus::PASS &&
        (mp.status == CheckStatus::PASS || ti.status == CheckStatus::PASS)) {
        v.verdict = Normability::NORMABLE;
        v.rationale = "absolutely homogeneous and midpoint convex / translation-invariant";
        return v;
    }
    v.verdict = Normability::UNDECIDED;
    v.rationale = "audits skipped or inconclusive";
    return v;
}

/// Polarization form recovered from the gauge (order-2 identity):
///   <x,y> := (f^2(x+y) - f^2(x-y)) / 4.
template <typename P>
double polarization(const MetricSpace<P>& space, const P& x, const P& y) {
    const GaugeFunction<P> f(space);
    const double a = f(point_add(x, y)), b = f(point_sub(x, y));
    return 0.25 * (a * a - b * b);
}

// --- JSON serialization ----------------------------------------------------

inline void to_json(nlohmann::json& j, const Witness& w) {
    j = nlohmann::json{{"points", w.points},
                       {"scalars", w.scalars},
                       {"lhs", w.lhs},
                       {"rhs", w.rhs},
                       {"note", w.note}};
}

inline void to_json(nlohmann::json& j, const CheckResult& r) {
    j = nlohmann::json{{"status", to_string(r.status)}, {"margin", r.margin}};
    if (r.witness)
        j["witness"] = *r.witness;
    else
        j["witness"] = nullptr;
}

inline void to_json(nlohmann::json& j, const PropertyReport& rep) {
    j = nlohmann::json{{"schema", "njc-lab/1"},
                       {"space", rep.space_id},
                       {"samples", rep.sample_count},
                       {"seed", rep.seed},
                       {"tolerance", rep.tolerance},
                       {"interpretation", "PASS = no counterexample found in N samples"}};
    nlohmann::json checks = nlohmann::json::object();
    for (const auto& [name, result] : rep.checks) checks[name] = result;
    j["checks"] = checks;
}

inline void to_json(nlohmann::json& j, const NormabilityVerdict& v) {
    j = nlohmann::json{{"verdict", to_string(v.verdict)}, {"rationale", v.rationale}};
    if (v.witness)
        j["witness"] = *v.witness;
    else
        j["witness"] = nullptr;
}

}  // namespace njc

#endif  // NJC_PROPERTIES_HPP
