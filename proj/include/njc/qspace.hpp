#ifndef NJC_QSPACE_HPP
#define NJC_QSPACE_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "njc/common.hpp"
#include "njc/metric.hpp"
#include "njc/rational.hpp"

namespace njc {

// ---------------------------------------------------------------------------
// Exact-rational vector spaces over a finite declared basis. The declared
// labels stand in for finitely many elements of a Hamel basis of R^n over Q;
// every computation in the constructions below touches only finitely many
// basis elements, so a finite declaration suffices.
// ---------------------------------------------------------------------------

/// Exact vector: finite map from basis labels to rational coefficients.
/// Zero coefficients are never stored.
struct QVector {
    std::map<std::string, Rational> coeffs;

    bool is_zero() const { return coeffs.empty(); }
    bool operator==(const QVector& o) const { return coeffs == o.coeffs; }
};

inline QVector make_qvector(std::initializer_list<std::pair<std::string, Rational>> init) {
    QVector v;
    for (const auto& [label, c] : init)
        if (c != 0) v.coeffs[label] = c;
    return v;
}

inline QVector point_add(const QVector& a, const QVector& b) {
    QVector r = a;
    for (const auto& [label, c] : b.coeffs) {
        auto it = r.coeffs.find(label);
        if (it == r.coeffs.end()) {
            r.coeffs.emplace(label, c);
        } else {
            it->second += c;
            if (it->second == 0) r.coeffs.erase(it);
        }
    }
    return r;
}

inline QVector point_neg(const QVector& a) {
    QVector r = a;
    for (auto& [label, c] : r.coeffs) c = -c;
    return r;
}

inline QVector point_sub(const QVector& a, const QVector& b) { return point_add(a, point_neg(b)); }

inline QVector scale_exact(const QVector& a, const Rational& q) {
    QVector r;
    if (q == 0) return r;
    for (const auto& [label, c] : a.coeffs) r.coeffs.emplace(label, c * q);
    return r;
}

/// Scaling by a double is exact: finite doubles are dyadic rationals.
inline QVector point_scale(const QVector& a, double s) {
    return scale_exact(a, rational_from_double(s));
}

inline int dimension_of(const QVector&) { return -1; }  // labels checked by the space

/// Declared basis fragment: each label carries its real embedding (scalar
/// coordinate along a fixed unit direction) and the value g(b) defining the
/// additive functional. Linear independence of the embeds over Q is a
/// declaration obligation; bad declarations void the non-normability
/// guarantees.
struct BasisDecl {
    struct Label {
        std::string name;
        double embed = 0.0;
        Rational functional_value{0};
    };
    std::vector<Label> labels;

    const Label* find(const std::string& name) const {
        for (const auto& l : labels)
            if (l.name == name) return &l;
        return nullptr;
    }
    const Label& at(const std::string& name) const {
        const Label* l = find(name);
        if (!l) throw ContractViolation("BasisDecl: undeclared label '" + name + "'");
        return *l;
    }
};

inline void validate_basis(const BasisDecl& basis) {
    if (basis.labels.empty()) throw ContractViolation("BasisDecl: empty declaration");
    for (std::size_t i = 0; i < basis.labels.size(); ++i)
        for (std::size_t j = i + 1; j < basis.labels.size(); ++j)
            if (basis.labels[i].name == basis.labels[j].name)
                throw ContractViolation("BasisDecl: duplicate label '" + basis.labels[i].name +
                                        "'");
}

/// The declaration used by the worked examples: {e -> 1, sqrt2e -> sqrt(2)}
/// with g(e) = 1 and g(sqrt2e) = 0. 1 and sqrt(2) are independent over Q.
inline BasisDecl default_hamel_basis() {
    BasisDecl b;
    b.labels.push_back({"e", 1.0, Rational(1)});
    b.labels.push_back({"sqrt2e", std::sqrt(2.0), Rational(0)});
    return b;
}

/// phi(x) = sum of coeff(b) * g(b), exact.
inline Rational additive_functional(const BasisDecl& basis, const QVector& x) {
    Rational acc(0);
    for (const auto& [label, c] : x.coeffs) acc += c * basis.at(label).functional_value;
    return acc;
}

/// Real embedding of x along the declared direction.
inline double embed_value(const BasisDecl& basis, const QVector& x) {
    double acc = 0.0;
    for (const auto& [label, c] : x.coeffs) acc += to_double(c) * basis.at(label).embed;
    return acc;
}

namespace detail {

inline QVector sample_qvector(const BasisDecl& basis, Rng& rng, double scale) {
    const Rational s = rational_from_double(scale);
    QVector v;
    for (const auto& l : basis.labels) {
        const int num = rng.uniform_int(-12, 12);
        static constexpr int dens[] = {1, 2, 3, 4, 5, 6, 8, 12, 16};
        const int den = dens[rng.uniform_int(0, 8)];
        if (num == 0) continue;
        v.coeffs[l.name] = s * Rational(num, den);
    }
    return v;
}

/// Perturbation snapped to a 1/1024 grid so coefficient denominators stay
/// bounded across many refinement rounds.
inline QVector perturb_qvector(const BasisDecl& basis, const QVector& x, Rng& rng, double step) {
    QVector r = x;
    for (const auto& l : basis.labels) {
        const double g = rng.gaussian() * step;
        const long long ticks = static_cast<long long>(std::llround(g * 1024.0));
        if (ticks == 0) continue;
        const Rational dq(ticks, 1024);
        auto it = r.coeffs.find(l.name);
        if (it == r.coeffs.end()) {
            r.coeffs.emplace(l.name, dq);
        } else {
            it->second += dq;
            if (it->second == 0) r.coeffs.erase(it);
        }
    }
    return r;
}

inline bool is_small_rational(double x) {
    for (int den = 1; den <= 32; ++den) {
        const double scaled = x * den;
        if (std::fabs(scaled - std::llround(scaled)) < 1e-9 * std::max(1.0, std::fabs(scaled)))
            return true;
    }
    return false;
}

/// Real-scaling probes between declared labels whose embed ratio is not a
/// small rational: in the ambient space unit(j) = (embed_j/embed_i) * unit(i),
/// a relation invisible to coefficient-wise scaling.
template <typename MakeUnit>
std::vector<ScalingWitness<QVector>> label_scaling_witnesses(const BasisDecl& basis,
                                                             MakeUnit make_unit) {
    std::vector<ScalingWitness<QVector>> out;
    for (std::size_t i = 0; i < basis.labels.size(); ++i) {
        for (std::size_t j = 0; j < basis.labels.size(); ++j) {
            if (i == j) continue;
            const double ei = basis.labels[i].embed, ej = basis.labels[j].embed;
            if (ei == 0.0) continue;
            const double lambda = ej / ei;
            if (lambda <= 0.0 || is_small_rational(lambda)) continue;
            ScalingWitness<QVector> w;
            w.base = make_unit(basis.labels[i].name);
            w.scaled = make_unit(basis.labels[j].name);
            w.lambda = lambda;
            w.note = basis.labels[j].name + " = " + std::to_string(lambda) + " * " +
                     basis.labels[i].name + " in the ambient space";
            out.push_back(std::move(w));
        }
    }
    return out;
}

}  // namespace detail

/// d(x, y) = |embed(x-y)| + |phi(x-y)|. The gauge is subadditive, even and
/// Q-homogeneous but not a norm over R.
inline MetricSpace<QVector> make_hamel_additive_metric(const BasisDecl& basis) {
    validate_basis(basis);
    MetricSpace<QVector> s;
    s.id = "hamel-additive";
    s.dim = static_cast<int>(basis.labels.size());
    s.zero = QVector{};
    s.dist = [basis](const QVector& x, const QVector& y) {
        const QVector d = point_sub(x, y);
        Rational phi = additive_functional(basis, d);
        if (phi < 0) phi = -phi;
        return std::fabs(embed_value(basis, d)) + to_double(phi);
    };
    s.sample = [basis](Rng& rng, double scale) { return detail::sample_qvector(basis, rng, scale); };
    s.perturb = [basis](const QVector& x, Rng& rng, double step) {
        return detail::perturb_qvector(basis, x, rng, step);
    };
    s.scaling_witnesses = detail::label_scaling_witnesses(
        basis, [](const std::string& name) { return make_qvector({{name, Rational(1)}}); });
    s.closed_form = [](double) {
        return std::optional<ClosedForm>(ClosedForm{2.0, "hamel-additive limit", false});
    };
    s.expected_properties = {
        {"metric_axioms", true},  {"even", true},
        {"subadditive", true},    {"translation_invariant", true},
        {"two_homogeneous", true},  // over Q; every float scalar is rational
        {"absolutely_homogeneous", false},
    };
    return s;
}

/// d(x, y) = sqrt(sum of squared rational coefficients of x-y). Squared
/// gauges are exact rationals; the square root is taken at output only.
inline MetricSpace<QVector> make_rational_euclidean_metric(const BasisDecl& basis) {
    validate_basis(basis);
    MetricSpace<QVector> s;
    s.id = "rational-euclidean";
    s.dim = static_cast<int>(basis.labels.size());
    s.zero = QVector{};
    s.dist = [basis](const QVector& x, const QVector& y) {
        const QVector d = point_sub(x, y);
        Rational sq(0);
        for (const auto& [label, c] : d.coeffs) {
            basis.at(label);  // undeclared labels are contract violations
            sq += c * c;
        }
        return std::sqrt(to_double(sq));
    };
    s.sample = [basis](Rng& rng, double scale) { return detail::sample_qvector(basis, rng, scale); };
    s.perturb = [basis](const QVector& x, Rng& rng, double step) {
        return detail::perturb_qvector(basis, x, rng, step);
    };
    s.scaling_witnesses = detail::label_scaling_witnesses(
        basis, [](const std::string& name) { return make_qvector({{name, Rational(1)}}); });
    s.closed_form = [](double sigma) -> std::optional<ClosedForm> {
        if (std::fabs(sigma - 2.0) < 1e-12)
            return ClosedForm{1.0, "exact parallelogram identity", true};
        return std::nullopt;
    };
    s.expected_properties = {
        {"metric_axioms", true},  {"even", true},
        {"subadditive", true},    {"translation_invariant", true},
        {"two_homogeneous", true},
        {"absolutely_homogeneous", false},
    };
    return s;
}

/// Exact squared gauge sum(c_i^2) of the coefficient vector.
inline Rational squared_coefficient_gauge(const QVector& x) {
    Rational sq(0);
    for (const auto& [label, c] : x.coeffs) sq += c * c;
    return sq;
}

/// Order-2 parallelogram identity on squared gauges, decided in exact
/// rational arithmetic: f2(x+y) + f2(x-y) == 2 (f2(x) + f2(y)).
inline bool rational_parallelogram_exact(const QVector& x, const QVector& y) {
    const Rational lhs =
        squared_coefficient_gauge(point_add(x, y)) + squared_coefficient_gauge(point_sub(x, y));
    const Rational rhs = 2 * (squared_coefficient_gauge(x) + squared_coefficient_gauge(y));
    return lhs == rhs;
}

inline void to_json(nlohmann::json& j, const QVector& v) {
    j = nlohmann::json::object();
    for (const auto& [label, c] : v.coeffs) j[label] = to_fraction_string(c);
}

inline void from_json(const nlohmann::json& j, QVector& v) {
    v.coeffs.clear();
    for (auto it = j.begin(); it != j.end(); ++it) {
        const Rational c = parse_rational(it.value().get<std::string>());
        if (c != 0) v.coeffs[it.key()] = c;
    }
}

/// Basis declarations load from JSON: a list of
///   {"label": ..., "embed": "<decimal>", "functional_value": "p/q"}.
inline BasisDecl basis_from_json(const nlohmann::json& j) {
    BasisDecl b;
    for (const auto& entry : j) {
        BasisDecl::Label l;
        l.name = entry.at("label").get<std::string>();
        const auto& e = entry.at("embed");
        l.embed = e.is_string() ? to_double(parse_rational(e.get<std::string>()))
                                : e.get<double>();
        l.functional_value = parse_rational(entry.at("functional_value").get<std::string>());
        if (b.find(l.name)) throw ContractViolation("basis_from_json: duplicate label " + l.name);
        b.labels.push_back(std::move(l));
    }
    if (b.labels.empty()) throw ContractViolation("basis_from_json: empty declaration");
    return b;
}

inline nlohmann::json basis_to_json(const BasisDecl& b) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& l : b.labels) {
        out.push_back({{"label", l.name},
                       {"embed", l.embed},
                       {"functional_value", to_fraction_string(l.functional_value)}});
    }
    return out;
}

/// Witness pair (x_k, y_k) for the Hamel-additive example: x_k = k e + r_k
/// sqrt2e with |embed(x_k)| <= 1 and phi(x_k) = k, y_k = -x_k + k e. The
/// rational r_k ~ -k/sqrt(2) comes from the Pell convergents a/b of sqrt(2),
/// for which |a - b sqrt(2)| = 1/(a + b sqrt(2)) exactly.
inline std::pair<QVector, QVector> hamel_witness_generator(const BasisDecl& basis, int k) {
    if (k < 1) throw ContractViolation("hamel_witness_generator: k must be >= 1");
    const BasisDecl::Label* e = nullptr;
    const BasisDecl::Label* s2e = nullptr;
    for (const auto& l : basis.labels) {
        if (std::fabs(l.embed - 1.0) < 1e-12) e = &l;
        if (std::fabs(l.embed - std::sqrt(2.0)) < 1e-12) s2e = &l;
    }
    if (!e || !s2e)
        throw ContractViolation(
            "hamel_witness_generator: basis must declare labels with embeds 1 and sqrt(2)");

    // First convergent (a, b) with k / (a (a + b sqrt2)) <= 1.
    BigInt a = 1, b = 1;
    const double sqrt2 = std::sqrt(2.0);
    while (a.convert_to<double>() * (a.convert_to<double>() + b.convert_to<double>() * sqrt2) <
           static_cast<double>(k)) {
        const BigInt na = a + 2 * b, nb = a + b;
        a = na;
        b = nb;
    }
    const Rational r(-BigInt(k) * b, a);

    QVector xk;
    xk.coeffs[e->name] = Rational(k);
    xk.coeffs[s2e->name] = r;
    // y_k = -x_k + phi(x_k) e; phi(x_k) = k, so the e-coefficient cancels.
    QVector yk;
    yk.coeffs[s2e->name] = -r;
    return {xk, yk};
}

}  // namespace njc

#endif  // NJC_QSPACE_HPP
