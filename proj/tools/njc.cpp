// njc - command-line front end for auditing metrics on vector spaces and
// estimating their generalized von Neumann-Jordan constants.
//
// Subcommands:
//   audit      structural property audit + normability verdict
//   estimate   constant estimation per sigma with brackets and closed forms
//   product    simplex-function product metrics: membership, audit, estimates
//   reproduce  closed-form reproduction table (CSV)
//
// Exit codes: 0 success, 1 mismatch/estimation/tolerance failure, 2 config error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "njc/njc.hpp"

namespace {

using nlohmann::json;

struct Options {
    std::string metric = "norm(2)";
    int dim = 2;
    std::string sigma = "2";
    uint64_t seed = 20260810ULL;
    int budget = 4096;   // samples per restart
    int restarts = 32;
    int refine = 200;
    int samples = 1200;  // audit samples
    std::string out;
    std::string format = "json";
    std::string basis_file;
    std::string config;
    std::string components = "norm(1)@1,norm(1)@1";
    std::string psi = "p:2";
};

void add_common_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--metric", o.metric,
                    "zoo name (truncated, frac-power, norm-plus-square, asym-sum, norm(p)) or "
                    "qspace metric (hamel, rational-euclidean)");
    cmd->add_option("--dim", o.dim, "coordinate dimension for zoo metrics");
    cmd->add_option("--sigma", o.sigma, "comma-separated list of orders, e.g. 1,1.5,2");
    cmd->add_option("--seed", o.seed, "random seed; fixes every sample deterministically");
    cmd->add_option("--budget", o.budget, "search samples per restart");
    cmd->add_option("--restarts", o.restarts, "search restarts");
    cmd->add_option("--refine", o.refine, "refinement steps per restart");
    cmd->add_option("--samples", o.samples, "audit samples per check");
    cmd->add_option("--out", o.out, "output file (stdout when omitted)");
    cmd->add_option("--format", o.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--basis-file", o.basis_file, "basis declaration JSON for qspace metrics");
    cmd->add_option("--config", o.config, "JSON config file; explicit flags take precedence");
}

// Config-file values fill in everything the command line left untouched.
void merge_config(const CLI::App* cmd, Options& o) {
    if (o.config.empty()) return;
    std::ifstream in(o.config);
    if (!in) throw njc::ContractViolation("config: cannot open " + o.config);
    json j;
    in >> j;
    const auto given = [&](const std::string& flag) {
        const CLI::Option* opt = cmd->get_option_no_throw(flag);
        return opt && opt->count() > 0;
    };
    if (j.contains("metric") && !given("--metric")) o.metric = j["metric"].get<std::string>();
    if (j.contains("dim") && !given("--dim")) o.dim = j["dim"].get<int>();
    if (j.contains("sigma") && !given("--sigma")) {
        if (j["sigma"].is_array()) {
            std::string acc;
            for (const auto& v : j["sigma"]) acc += (acc.empty() ? "" : ",") + v.dump();
            o.sigma = acc;
        } else {
            o.sigma = j["sigma"].is_string() ? j["sigma"].get<std::string>() : j["sigma"].dump();
        }
    }
    if (j.contains("seed") && !given("--seed")) o.seed = j["seed"].get<uint64_t>();
    if (j.contains("budget") && !given("--budget")) o.budget = j["budget"].get<int>();
    if (j.contains("restarts") && !given("--restarts")) o.restarts = j["restarts"].get<int>();
    if (j.contains("refine") && !given("--refine")) o.refine = j["refine"].get<int>();
    if (j.contains("samples") && !given("--samples")) o.samples = j["samples"].get<int>();
    if (j.contains("basis_file") && !given("--basis-file"))
        o.basis_file = j["basis_file"].get<std::string>();
    if (j.contains("format") && !given("--format")) o.format = j["format"].get<std::string>();
    if (j.contains("product")) {
        const auto& p = j["product"];
        if (p.contains("psi") && !given("--psi")) o.psi = p["psi"].get<std::string>();
        if (p.contains("components") && !given("--components")) {
            std::string acc;
            for (const auto& c : p["components"]) {
                std::string spec;
                int cdim = 1;
                if (c.is_string()) {
                    spec = c.get<std::string>();
                } else {
                    spec = c.at("metric").get<std::string>();
                    if (c.contains("dim")) cdim = c["dim"].get<int>();
                }
                acc += (acc.empty() ? "" : ",") + spec + "@" + std::to_string(cdim);
            }
            o.components = acc;
        }
    }
}

std::vector<double> parse_sigma_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw njc::ContractViolation("--sigma: cannot parse '" + item + "'");
        }
    }
    if (out.empty()) throw njc::ContractViolation("--sigma: list must be nonempty");
    return out;
}

std::string sig12(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_output(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw njc::ContractViolation("cannot open output file " + o.out);
    f << text;
}

njc::SearchConfig search_config(const Options& o) {
    njc::SearchConfig cfg;
    cfg.seed = o.seed;
    cfg.restarts = o.restarts;
    cfg.samples_per_restart = o.budget;
    cfg.refine_steps = o.refine;
    return cfg;
}

njc::BasisDecl load_basis(const Options& o) {
    if (o.basis_file.empty()) return njc::default_hamel_basis();
    std::ifstream in(o.basis_file);
    if (!in) throw njc::ContractViolation("cannot open basis file " + o.basis_file);
    json j;
    in >> j;
    return njc::basis_from_json(j);
}

bool is_qspace_metric(const std::string& name) {
    return name == "hamel" || name == "hamel-additive" || name == "rational-euclidean";
}

njc::MetricSpace<njc::QVector> make_qspace_metric(const Options& o) {
    const njc::BasisDecl basis = load_basis(o);
    if (o.metric == "rational-euclidean") return njc::make_rational_euclidean_metric(basis);
    return njc::make_hamel_additive_metric(basis);
}

// --- audit -------------------------------------------------------------

template <typename P>
int do_audit(const njc::MetricSpace<P>& space, const Options& o) {
    const auto report = njc::run_standard_audit(space, o.samples, o.seed);
    const auto verdict = njc::normability_verdict(space, report);

    json out = report;
    out["normability"] = verdict;
    json expected = json::object();
    std::vector<std::string> mismatches;
    for (const auto& [key, want] : space.expected_properties) {
        expected[key] = want ? "PASS" : "FAIL";
        const njc::CheckResult* got = report.find(key);
        if (!got) continue;
        const bool pass = got->status == njc::CheckStatus::PASS;
        if (pass != want) mismatches.push_back(key);
    }
    out["expected_profile"] = expected;
    out["profile_mismatches"] = mismatches;
    write_output(o, out.dump(2));
    return mismatches.empty() ? 0 : 1;
}

// --- estimate ----------------------------------------------------------

template <typename P>
json estimate_row(const njc::MetricSpace<P>& space, double sigma, const njc::SearchConfig& cfg,
                  const njc::PropertyFlags& flags) {
    const auto e = njc::estimate(space, njc::Order(sigma), cfg, flags);
    json row = e;
    row["space"] = space.id;
    if (e.closed_form) row["closed_form_delta"] = std::fabs(e.value - e.closed_form->value);
    return row;
}

template <typename P>
int do_estimate(const njc::MetricSpace<P>& space, const Options& o) {
    const auto sigmas = parse_sigma_list(o.sigma);
    const auto report = njc::run_standard_audit(space, o.samples, o.seed);
    if (!report.passed("metric_axioms"))
        std::cerr << "warning: " << space.id
                  << " did not pass the metric-axiom audit; estimating anyway\n";
    const auto flags = njc::flags_from(report);
    const auto cfg = search_config(o);

    json rows = json::array();
    for (double s : sigmas) rows.push_back(estimate_row(space, s, cfg, flags));

    if (o.format == "csv") {
        std::string csv =
            "space,sigma,value,bracket_lo,bracket_hi,closed_form,abs_delta,formulation,seed\n";
        for (const auto& r : rows) {
            csv += r["space"].get<std::string>() + "," + sig12(r["sigma"].get<double>()) + "," +
                   sig12(r["value"].get<double>()) + "," +
                   sig12(r["bracket"]["lo"].get<double>()) + "," +
                   (r["bracket"]["hi"].is_null() ? "inf" : sig12(r["bracket"]["hi"].get<double>())) +
                   "," +
                   (r["closed_form"].is_null() ? ""
                                               : sig12(r["closed_form"]["value"].get<double>())) +
                   "," + (r.contains("closed_form_delta") ? sig12(r["closed_form_delta"].get<double>()) : "") +
                   "," + r["formulation"].get<std::string>() + "," +
                   std::to_string(r["seed"].get<uint64_t>()) + "\n";
        }
        write_output(o, csv);
    } else {
        json out = {{"schema", "njc-lab/1"}, {"space", space.id}, {"estimates", rows}};
        write_output(o, out.dump(2));
    }
    return 0;
}

// --- product -----------------------------------------------------------

njc::SimplexFunction parse_psi(const std::string& spec, int n) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw njc::ContractViolation("psi spec must look like p:<value> or custom:<name>");
    const std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
    if (kind == "p") {
        const double p = (arg == "inf") ? njc::kInf : std::stod(arg);
        return njc::make_psi_p(n, p);
    }
    if (kind == "custom") {
        if (arg == "avg-1-inf") {
            njc::SimplexFunction f;
            f.n = n;
            f.name = "avg-1-inf";
            f.eval = [](const njc::SimplexPoint& t) {
                double sum = 0.0, mx = 0.0;
                for (double v : t) {
                    sum += v;
                    mx = std::max(mx, v);
                }
                return 0.5 * sum + 0.5 * mx;
            };
            return f;
        }
        throw njc::ContractViolation("unknown custom psi '" + arg + "'");
    }
    throw njc::ContractViolation("unknown psi kind '" + kind + "'");
}

std::vector<njc::MetricSpace<njc::Vec>> parse_components(const std::string& text) {
    std::vector<njc::MetricSpace<njc::Vec>> comps;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        int dim = 1;
        std::string spec = item;
        const auto at = item.rfind('@');
        if (at != std::string::npos) {
            spec = item.substr(0, at);
            dim = std::stoi(item.substr(at + 1));
        }
        comps.push_back(njc::make_zoo_space(spec, dim));
    }
    if (comps.size() < 2)
        throw njc::ContractViolation("product needs at least two components");
    return comps;
}

int do_product(const Options& o) {
    auto components = parse_components(o.components);
    auto psi = parse_psi(o.psi, static_cast<int>(components.size()));
    psi.membership = njc::audit_membership(
        psi, njc::detail::default_grid_resolution(psi.n));
    const auto prod = njc::make_product(components, psi);

    json out = {{"schema", "njc-lab/1"}, {"space", prod.id}};
    json membership = {{"status", njc::to_string(psi.membership.status)},
                       {"grid_resolution", psi.membership.grid_resolution}};
    json conds = json::object();
    for (const auto& [name, st] : psi.membership.conditions) conds[name] = njc::to_string(st);
    membership["conditions"] = conds;
    out["membership"] = membership;

    const auto report = njc::run_standard_audit<njc::Vec>(prod, o.samples, o.seed);
    out["audit"] = report;

    const auto flags = njc::flags_from(report);
    const auto cfg = search_config(o);
    json rows = json::array();
    for (double s : parse_sigma_list(o.sigma))
        rows.push_back(estimate_row<njc::Vec>(prod, s, cfg, flags));
    out["estimates"] = rows;
    write_output(o, out.dump(2));
    return 0;
}

// --- reproduce ---------------------------------------------------------

struct ReproRow {
    std::string space;
    double sigma;
    double paper;
    double estimated;
    double lo_tol;  // allowed shortfall below the paper value
    double hi_tol;  // allowed excess above it
    njc::Bracket bracket;
};

int do_reproduce(const Options& o) {
    using namespace njc;
    const auto cfg = search_config(o);
    std::vector<ReproRow> rows;

    const auto estimate_for = [&](const MetricSpace<Vec>& s, double sigma) {
        const auto rep = run_standard_audit(s, o.samples, o.seed);
        return estimate(s, Order(sigma), cfg, flags_from(rep));
    };

    {
        const auto trunc = make_truncated(2, 1.0);
        for (double sigma : {1.0, 1.5, 2.0}) {
            const auto e = estimate_for(trunc, sigma);
            rows.push_back({"truncated", sigma, std::exp2(2.0 - sigma), e.value, 1e-3, 1e-6,
                            e.bracket});
        }
    }
    {
        const auto frac = make_fractional_power(2, 0.2);
        const auto e = estimate_for(frac, 4.0);
        rows.push_back({"frac-power(0.2)", 4.0, 0.25, e.value, 1e-3, 1e-9, e.bracket});
    }
    {
        const auto nps = make_norm_plus_square(2);
        const auto e = estimate_for(nps, 2.0);
        rows.push_back({"norm-plus-square", 2.0, 2.25, e.value, 1e-12, kInf, e.bracket});
    }
    {
        const auto asym = make_asymmetric_sum(2);
        const Vec e1 = unit_axis(2, 0);
        const auto rep = witness_sequence_bound<Vec>(
            [e1](int k) { return std::make_pair(e1, point_scale(e1, double(k))); }, asym,
            Order(1.0), 1000);
        rows.push_back({"asym-sum (witness seq)", 1.0, 3.5, rep.best, 0.01, 1e-9,
                        Bracket{2.0, kInf}});
    }
    {
        const BasisDecl basis = default_hamel_basis();
        const auto hamel = make_hamel_additive_metric(basis);
        const auto rep = witness_sequence_bound<QVector>(
            [&basis](int k) { return hamel_witness_generator(basis, k); }, hamel, Order(2.0),
            1000);
        rows.push_back({"hamel-additive (witness seq)", 2.0, 2.0, rep.best, 0.01, 1e-9,
                        Bracket{1.0, 2.0}});

        const auto ratl = make_rational_euclidean_metric(basis);
        const auto rrep = run_standard_audit(ratl, o.samples, o.seed);
        const auto re = estimate(ratl, Order(2.0), cfg, flags_from(rrep));
        rows.push_back({"rational-euclidean", 2.0, 1.0, re.value, 1e-6, 1e-6, re.bracket});
    }
    {
        const auto euclid = make_norm_induced(2, 2.0);
        const auto e = estimate_for(euclid, 2.0);
        rows.push_back({"norm(2)", 2.0, 1.0, e.value, 1e-6, 1e-6, e.bracket});
    }
    {
        const std::vector<std::pair<double, double>> table = {
            {1.0, 2.0}, {1.5, 2.0}, {1.5, 1.5}, {1.5, 3.0}, {2.0, 2.0},
            {3.0, 2.0}, {3.0, 1.5}, {3.0, 3.0}, {kInf, 2.0}};
        for (const auto& [p, sigma] : table) {
            const auto prod = make_product(
                {make_norm_induced(1, 2.0), make_norm_induced(1, 2.0)}, make_psi_p(2, p));
            const auto paper = pmetric_constant(p, sigma);
            const auto e = estimate_for(prod, sigma);
            const std::string label =
                std::isinf(p) ? "p-metric(inf)" : "p-metric(" + detail::compact_number(p) + ")";
            rows.push_back({label, sigma, paper.value(), e.value, 1e-2, 1e-2, e.bracket});
        }
    }

    std::string csv =
        "space,sigma,paper_value,estimated_value,abs_delta,bracket_lo,bracket_hi,status\n";
    bool all_ok = true;
    for (const auto& r : rows) {
        const bool ok =
            r.estimated >= r.paper - r.lo_tol &&
            (std::isinf(r.hi_tol) || r.estimated <= r.paper + r.hi_tol);
        all_ok = all_ok && ok;
        csv += r.space + "," + sig12(r.sigma) + "," + sig12(r.paper) + "," + sig12(r.estimated) +
               "," + sig12(std::fabs(r.estimated - r.paper)) + "," + sig12(r.bracket.lo) + "," +
               (r.bracket.hi_finite() ? sig12(r.bracket.hi) : "inf") + "," +
               (ok ? "OK" : "OUT_OF_TOLERANCE") + "\n";
        if (!ok) std::cerr << "reproduce: row out of tolerance: " << r.space << " sigma "
                           << r.sigma << "\n";
    }
    write_output(o, csv);
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized von Neumann-Jordan constants of metrics on vector spaces"};
    app.require_subcommand(1);

    Options audit_opts, est_opts, prod_opts, repro_opts;
    CLI::App* audit = app.add_subcommand("audit", "run property audits and normability verdict");
    add_common_flags(audit, audit_opts);
    CLI::App* est = app.add_subcommand("estimate", "estimate the constant per sigma");
    add_common_flags(est, est_opts);
    CLI::App* prod = app.add_subcommand("product", "build and analyse a product metric");
    add_common_flags(prod, prod_opts);
    prod->add_option("--components", prod_opts.components,
                     "comma list of component specs, e.g. norm(1)@1,norm(1)@1");
    prod->add_option("--psi", prod_opts.psi, "simplex function: p:<value> or custom:<name>");
    CLI::App* repro = app.add_subcommand("reproduce", "emit the closed-form reproduction table");
    add_common_flags(repro, repro_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (audit->parsed()) {
            merge_config(audit, audit_opts);
            if (is_qspace_metric(audit_opts.metric))
                return do_audit(make_qspace_metric(audit_opts), audit_opts);
            return do_audit(njc::make_zoo_space(audit_opts.metric, audit_opts.dim), audit_opts);
        }
        if (est->parsed()) {
            merge_config(est, est_opts);
            if (is_qspace_metric(est_opts.metric))
                return do_estimate(make_qspace_metric(est_opts), est_opts);
            return do_estimate(njc::make_zoo_space(est_opts.metric, est_opts.dim), est_opts);
        }
        if (prod->parsed()) {
            merge_config(prod, prod_opts);
            return do_product(prod_opts);
        }
        merge_config(repro, repro_opts);
        return do_reproduce(repro_opts);
    } catch (const njc::ContractViolation& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const njc::EstimationFailed& e) {
        std::cerr << "estimation failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
