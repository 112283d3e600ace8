#ifndef NJC_ESTIMATOR_HPP
#define NJC_ESTIMATOR_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "njc/common.hpp"
#include "njc/metric.hpp"
#include "njc/properties.hpp"

namespace njc {

// ---------------------------------------------------------------------------
// Supremum search for the constant: random multi-scale sampling, deterministic
// witness seeds, dual-pair evaluation and derivative-free local refinement.
// The reported value is a certified lower bound (the witness re-evaluates to
// it); upper certification comes only from theorem_bounds or closed forms.
// ---------------------------------------------------------------------------

struct SearchConfig {
    uint64_t seed = 20260810ULL;
    int restarts = 32;
    int samples_per_restart = 4096;
    int refine_steps = 200;
    std::vector<double> scales = {0.01, 1.0, 100.0};
    double step_decay = 0.9;
    bool parallel = true;

    void validate() const {
        if (restarts < 1 || samples_per_restart < 1)
            throw ContractViolation("SearchConfig: restarts and samples_per_restart must be >= 1");
        if (!(step_decay > 0.0 && step_decay < 1.0))
            throw ContractViolation("SearchConfig: step_decay must lie in (0,1)");
        if (scales.empty()) throw ContractViolation("SearchConfig: scales must be nonempty");
    }
};

enum class Formulation { FULL, UNIT_SPHERE };

inline const char* to_string(Formulation f) {
    return f == Formulation::FULL ? "FULL" : "UNIT_SPHERE";
}

template <typename P>
struct ConstantEstimate {
    double sigma = 2.0;
    double value = 0.0;
    RatioSample<P> witness;
    Bracket bracket;
    Formulation formulation = Formulation::FULL;
    std::optional<ClosedForm> closed_form;
    SearchConfig budget;
};

namespace detail {

template <typename P>
struct Candidate {
    double value = -kInf;
    P x{};
    P y{};
    double scale_hint = 1.0;
    bool valid() const { return value > -kInf; }
};

/// Values within 1e-12 relative are treated as ties; the earlier candidate
/// (seed witnesses come first) keeps the spot. This stops floating-point
/// wobble from displacing an exact witness such as (x, 0).
inline bool improves(double v, double best) {
    if (!(best > -kInf)) return true;
    return v > best + 1e-12 * std::fabs(best);
}

/// Considers a pair and, because the ratio of the dual pair (x+y, x-y) is a
/// valid ratio for any metric, the dual as well.
template <typename P>
void consider_pair(const MetricSpace<P>& space, double sigma, const P& x, const P& y,
                   double scale_hint, Candidate<P>& best) {
    if (const auto v = try_gauge_ratio(space, sigma, x, y); v && improves(*v, best.value))
        best = Candidate<P>{*v, x, y, scale_hint};
    const P u = point_add(x, y);
    const P w = point_sub(x, y);
    if (const auto v = try_gauge_ratio(space, sigma, u, w); v && improves(*v, best.value))
        best = Candidate<P>{*v, u, w, scale_hint};
}

/// One restart: seeded candidates (restart 0), the random pair stream, then
/// hill climbing with multiplicative step decay. Sampling and refinement use
/// separate child streams so that enlarging one budget axis keeps the other
/// stream a prefix.
template <typename P>
Candidate<P> run_restart(const MetricSpace<P>& space, double sigma, const SearchConfig& cfg,
                         int restart) {
    const uint64_t base = child_seed(cfg.seed, static_cast<uint64_t>(restart));
    Rng sample_rng(child_seed(base, 0));
    Rng refine_rng(child_seed(base, 1));
    Candidate<P> best;

    if (restart == 0) {
        // Universal witness: G(x, 0) = 2^(2-sigma) for any x with f(x) > 0.
        const P probe = space.sample(sample_rng, 1.0);
        consider_pair(space, sigma, probe, space.zero, 1.0, best);
        for (const auto& [wx, wy] : space.witness_seeds) consider_pair(space, sigma, wx, wy, 1.0, best);
    }

    const std::size_t ns = cfg.scales.size();
    for (int i = 0; i < cfg.samples_per_restart; ++i) {
        const double sx = cfg.scales[static_cast<std::size_t>(i) % ns];
        const double sy = cfg.scales[(static_cast<std::size_t>(i) / ns) % ns];
        const P x = space.sample(sample_rng, sx);
        P y;
        switch (i & 3) {
            case 0: y = space.sample(sample_rng, sy); break;
            case 1: y = point_scale(x, sample_rng.uniform(0.0, 3.0)); break;          // colinear
            case 2: y = space.perturb(point_neg(x), sample_rng, 0.05 * sx); break;    // near -x
            default: y = space.perturb(x, sample_rng, 0.05 * sx); break;              // near x
        }
        consider_pair(space, sigma, x, y, std::max(sx, sy), best);
    }

    if (best.valid() && cfg.refine_steps > 0) {
        double step = 0.5 * best.scale_hint;
        for (int k = 0; k < cfg.refine_steps; ++k, step *= cfg.step_decay) {
            const P x = space.perturb(best.x, refine_rng, step);
            const P y = space.perturb(best.y, refine_rng, step);
            consider_pair(space, sigma, x, y, best.scale_hint, best);
        }
    }
    return best;
}

template <typename P>
Candidate<P> best_over_restarts(const MetricSpace<P>& space, double sigma,
                                const SearchConfig& cfg) {
    std::vector<Candidate<P>> results(static_cast<std::size_t>(cfg.restarts));
    if (cfg.parallel && cfg.restarts > 1) {
        // Reduction by maximum in restart order: parallel equals serial.
        const unsigned workers =
            std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                            static_cast<unsigned>(cfg.restarts)));
        std::vector<std::future<void>> futs;
        std::atomic<int> next{0};
        for (unsigned w = 0; w < workers; ++w) {
            futs.push_back(std::async(std::launch::async, [&] {
                for (int r = next.fetch_add(1); r < cfg.restarts; r = next.fetch_add(1))
                    results[static_cast<std::size_t>(r)] = run_restart(space, sigma, cfg, r);
            }));
        }
        for (auto& f : futs) f.get();
    } else {
        for (int r = 0; r < cfg.restarts; ++r)
            results[static_cast<std::size_t>(r)] = run_restart(space, sigma, cfg, r);
    }
    Candidate<P> best;
    for (const auto& c : results)
        if (c.valid() && improves(c.value, best.value)) best = c;
    return best;
}

}  // namespace detail

/// Maximizes the ratio G over restarts x samples with local refinement and
/// returns the best value found, bracketed by the theorem bounds implied by
/// `flags` (pass audit results when available; the universal bracket applies
/// otherwise).
template <typename P>
ConstantEstimate<P> estimate(const MetricSpace<P>& space, const Order& order,
                             const SearchConfig& cfg = {}, PropertyFlags flags = {}) {
    cfg.validate();
    const double sigma = order.sigma();
    const auto best = detail::best_over_restarts(space, sigma, cfg);
    if (!best.valid()) throw EstimationFailed("estimate: every sampled pair was degenerate");

    ConstantEstimate<P> e;
    e.sigma = sigma;
    e.value = gauge_ratio(space, order, best.x, best.y);  // recompute from scratch
    e.witness = RatioSample<P>{best.x, best.y, e.value};
    e.bracket = theorem_bounds(flags, order);
    e.formulation = Formulation::FULL;
    e.closed_form = space.closed_form ? space.closed_form(sigma) : std::nullopt;
    e.budget = cfg;
    return e;
}

/// Unit-sphere formulation: maximizes H(x, y, t) over pairs normalized to
/// f(x) = f(y) = 1 and t in [0,1]. Available only when the absolute
/// homogeneity audit passed (the hypothesis of the parametrized formulas).
template <typename P>
ConstantEstimate<P> estimate_unit_sphere(const MetricSpace<P>& space, const Order& order,
                                         const SearchConfig& cfg, bool absolutely_homogeneous,
                                         PropertyFlags flags = {}) {
    if (!absolutely_homogeneous)
        throw FormulationUnavailable(
            "estimate_unit_sphere: requires a passed absolute-homogeneity audit");
    cfg.validate();
    const double sigma = order.sigma();
    const GaugeFunction<P> f(space);

    struct Best {
        double value = -kInf;
        P x{}, y{};
        double t = 0.0;
    } best;

    for (int r = 0; r < cfg.restarts; ++r) {
        const uint64_t base = child_seed(cfg.seed ^ 0x55u, static_cast<uint64_t>(r));
        Rng rng(base);
        Best local;
        for (int i = 0; i < cfg.samples_per_restart; ++i) {
            const double sx = cfg.scales[static_cast<std::size_t>(i) % cfg.scales.size()];
            P x = space.sample(rng, sx);
            P y = space.sample(rng, sx);
            const double fx = f(x), fy = f(y);
            if (!(fx > 0.0) || !(fy > 0.0)) continue;
            x = point_scale(x, 1.0 / fx);
            y = point_scale(y, 1.0 / fy);
            static constexpr double tgrid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
            const double t = (i % 6 < 5) ? tgrid[i % 6] : rng.uniform();
            const double v = param_ratio(space, order, x, y, t);
            if (v > local.value) local = Best{v, x, y, t};
        }
        if (local.value > -kInf) {
            double step = 0.25;
            for (int k = 0; k < cfg.refine_steps; ++k, step *= cfg.step_decay) {
                P x = space.perturb(local.x, rng, step);
                P y = space.perturb(local.y, rng, step);
                const double fx = f(x), fy = f(y);
                if (!(fx > 0.0) || !(fy > 0.0)) continue;
                x = point_scale(x, 1.0 / fx);
                y = point_scale(y, 1.0 / fy);
                const double t = std::clamp(local.t + step * rng.gaussian(), 0.0, 1.0);
                const double v = param_ratio(space, order, x, y, t);
                if (v > local.value) local = Best{v, x, y, t};
            }
        }
        if (local.value > best.value) best = local;
    }
    // Seeded unit-vector candidates participate through witness_seeds too.
    for (const auto& [wx, wy] : space.witness_seeds) {
        const double fx = f(wx), fy = f(wy);
        if (!(fx > 0.0) || !(fy > 0.0)) continue;
        const P x = point_scale(wx, 1.0 / fx);
        const P y = point_scale(wy, 1.0 / fy);
        for (double t : {0.5, 1.0}) {
            const double v = param_ratio(space, order, x, y, t);
            if (v > best.value) best = Best{v, x, y, t};
        }
    }
    if (best.value <= -kInf)
        throw EstimationFailed("estimate_unit_sphere: no usable normalized pair");

    ConstantEstimate<P> e;
    e.sigma = sigma;
    // Under absolute homogeneity H(x, y, t) = G(x, t y); report that pair.
    e.witness.x = best.x;
    e.witness.y = point_scale(best.y, best.t);
    e.value = gauge_ratio(space, order, e.witness.x, e.witness.y);
    e.witness.value = e.value;
    e.bracket = theorem_bounds(flags, order);
    e.formulation = Formulation::UNIT_SPHERE;
    e.closed_form = space.closed_form ? space.closed_form(sigma) : std::nullopt;
    e.budget = cfg;
    return e;
}

/// Closed-form value registered for the space at this order, if any.
template <typename P>
std::optional<ClosedForm> closed_form_lookup(const MetricSpace<P>& space, double sigma) {
    if (!space.closed_form) return std::nullopt;
    return space.closed_form(sigma);
}

struct WitnessSequenceReport {
    struct Entry {
        int k = 0;
        double gamma = 0.0;
        bool skipped = false;
    };
    std::vector<Entry> entries;
    double best = -kInf;
    int best_k = 0;
};

/// Evaluates the ratio along an indexed witness family (x_k, y_k); used to
/// certify lower bounds that random search cannot reach.
template <typename P>
WitnessSequenceReport witness_sequence_bound(
    const std::function<std::pair<P, P>(int)>& generator, const MetricSpace<P>& space,
    const Order& order, int k_max) {
    if (k_max < 1) throw ContractViolation("witness_sequence_bound: k_max must be >= 1");
    WitnessSequenceReport rep;
    for (int k = 1; k <= k_max; ++k) {
        const auto [x, y] = generator(k);
        const auto v = detail::try_gauge_ratio(space, order.sigma(), x, y);
        WitnessSequenceReport::Entry e;
        e.k = k;
        if (v) {
            e.gamma = *v;
            if (*v > rep.best) {
                rep.best = *v;
                rep.best_k = k;
            }
        } else {
            e.skipped = true;
        }
        rep.entries.push_back(e);
    }
    return rep;
}

// --- JSON serialization ----------------------------------------------------

inline void to_json(nlohmann::json& j, const SearchConfig& c) {
    j = nlohmann::json{{"seed", c.seed},
                       {"restarts", c.restarts},
                       {"samples_per_restart", c.samples_per_restart},
                       {"refine_steps", c.refine_steps},
                       {"scales", c.scales},
                       {"step_decay", c.step_decay}};
}

inline void to_json(nlohmann::json& j, const ClosedForm& c) {
    j = nlohmann::json{{"value", c.value},
                       {"source", c.source},
                       {"search_attainable", c.search_attainable}};
}

template <typename P>
void to_json(nlohmann::json& j, const ConstantEstimate<P>& e) {
    j = nlohmann::json{{"schema", "njc-lab/1"},
                       {"kind", "lower-bound certificate + bracket"},
                       {"sigma", e.sigma},
                       {"value", e.value},
                       {"witness", {{"x", nlohmann::json(e.witness.x)}, {"y", nlohmann::json(e.witness.y)}}},
                       {"bracket",
                        {{"lo", e.bracket.lo},
                         {"hi", e.bracket.hi_finite() ? nlohmann::json(e.bracket.hi)
                                                      : nlohmann::json(nullptr)}}},
                       {"formulation", to_string(e.formulation)},
                       {"budget", e.budget},
                       {"seed", e.budget.seed}};
    if (e.closed_form)
        j["closed_form"] = *e.closed_form;
    else
        j["closed_form"] = nullptr;
}

}  // namespace njc

#endif  // NJC_ESTIMATOR_HPP
