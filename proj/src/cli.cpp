#include "ontic/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ontic/continuum.hpp"
#include "ontic/ensemble.hpp"
#include "ontic/error.hpp"
#include "ontic/format.hpp"
#include "ontic/ontology.hpp"
#include "ontic/ontology_json.hpp"
#include "ontic/pbr.hpp"

namespace ontic::cli {

namespace {

using nlohmann::json;

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += sep;
        s += parts[i];
    }
    return s;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct GasFlags {
    int n = 0;
    int m = 0;
    std::int64_t e = 0;
    double delta = 1.0;
    std::int64_t eps0 = 0;
    double k = 1.0;
    std::size_t max_states = ensemble::kDefaultMaxStates;

    ensemble::GasSpec spec() const { return {n, m, e, delta, eps0}; }
};

void add_gas_flags(CLI::App* cmd, GasFlags& f) {
    cmd->add_option("--n", f.n, "particle count")->required();
    cmd->add_option("--m", f.m, "number of energy bins")->required();
    cmd->add_option("--e", f.e, "total energy in lattice units")->required();
    cmd->add_option("--delta", f.delta, "energy per lattice unit");
    cmd->add_option("--eps0", f.eps0, "ground-state offset in lattice units");
    cmd->add_option("--k", f.k, "Boltzmann constant applied to reported entropies");
    cmd->add_option("--max-states", f.max_states, "enumeration cap");
}

std::string binning_table(const std::vector<ensemble::BinningState>& states, const ontology::GasModel& gas,
                          double k, const std::string& format) {
    // mu comes from the full gas model so argmax rows report their true weight.
    const auto& mu = gas.model.preparations.front().mu;
    const auto mu_of = [&](const ensemble::BinningState& b) {
        for (std::size_t l = 0; l < gas.binnings.size(); ++l)
            if (gas.binnings[l] == b) return mu[l];
        return 0.0;
    };
    if (format == "json") {
        json rows = json::array();
        for (const auto& b : states) {
            const auto w = ensemble::multiplicity(b);
            json row = {{"binning", b.n},
                        {"log_omega", w.log_omega},
                        {"entropy", k * w.log_omega},
                        {"mu", mu_of(b)}};
            row["omega"] = w.exact ? json(w.exact->str()) : json(nullptr);
            rows.push_back(std::move(row));
        }
        return dump(rows);
    }
    std::string out = "binning,omega,entropy,mu\n";
    for (const auto& b : states) {
        const auto w = ensemble::multiplicity(b);
        const std::string omega = w.exact ? w.exact->str() : format_real(std::exp(w.log_omega));
        out += quote(b.key()) + "," + omega + "," + format_real(k * w.log_omega) + "," + format_real(mu_of(b)) + "\n";
    }
    return out;
}

json fit_json(const ensemble::BoltzmannFit& fit, const ensemble::GasSpec& spec) {
    return {{"alpha", fit.alpha},
            {"beta", fit.beta},
            {"eps", spec.level_energies()},
            {"predicted", fit.predicted},
            {"iterations", fit.iterations}};
}

std::string fit_rows(const char* variant, const ensemble::BoltzmannFit& fit, const ensemble::GasSpec& spec) {
    std::string out;
    for (int i = 0; i < spec.m; ++i) {
        out += std::string(variant) + "," + format_real(fit.alpha) + "," + format_real(fit.beta) + "," +
               format_real(spec.level_energy(i)) + "," + format_real(fit.predicted[static_cast<std::size_t>(i)]) +
               "\n";
    }
    return out;
}

std::string csv_validation(const ontology::ValidationReport& report) {
    std::string out = "code,location,value,deviation,message\n";
    for (const auto& i : report.issues) {
        out += quote(i.code) + "," + quote(i.location) + "," + format_real(i.value) + "," + format_real(i.deviation) +
               "," + quote(i.message) + "\n";
    }
    return out;
}

// Thrown for problems CLI11 cannot see (e.g. an unknown preparation name
// given with --pair); mapped to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Micro-canonical gas statistics, ontological models and the PBR no-go check", "ontic"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_path;
    std::string format;
    app.add_option("--out", out_path, "write results to this file instead of stdout");

    const auto add_format = [&](CLI::App* cmd, std::vector<std::string> choices) {
        cmd->add_option("--format", format, "output format")->check(CLI::IsMember(choices));
    };

    // --- gas -------------------------------------------------------------
    auto* gas = app.add_subcommand("gas", "ideal-gas binning statistics");
    gas->require_subcommand(1);
    GasFlags gf;

    auto* g_enum = gas->add_subcommand("enumerate", "list binning states with multiplicity");
    add_gas_flags(g_enum, gf);
    add_format(g_enum, {"csv", "json"});

    auto* g_argmax = gas->add_subcommand("argmax", "most probable binning states");
    add_gas_flags(g_argmax, gf);
    add_format(g_argmax, {"csv", "json"});

    auto* g_fit = gas->add_subcommand("fit", "Lagrange-multiplier Boltzmann fit");
    add_gas_flags(g_fit, gf);
    bool stirling = false;
    g_fit->add_flag("--stirling-compare", stirling, "report both Stirling variants");
    add_format(g_fit, {"csv", "json"});

    auto* g_solve = gas->add_subcommand("solve", "continuum total energy for a temperature");
    double c_n = 0.0;
    double c_t = 0.0;
    double c_eps0 = 0.0;
    double c_k = 1.0;
    int c_points = 0;
    std::optional<double> c_e1;
    g_solve->add_option("--n", c_n, "particle count")->required();
    g_solve->add_option("--t", c_t, "temperature")->required();
    g_solve->add_option("--eps0", c_eps0, "ground-state energy");
    g_solve->add_option("--k", c_k, "Boltzmann constant (energy per unit temperature)");
    g_solve->add_option("--points", c_points, "emit rho(eps) at this many points instead of E1");
    g_solve->add_option("--e1", c_e1, "use this E1 for the density curve instead of solving");
    add_format(g_solve, {"csv", "json"});

    auto* g_sample = gas->add_subcommand("sample", "Monte Carlo walk over microstates");
    add_gas_flags(g_sample, gf);
    std::uint64_t steps = 0;
    std::uint64_t seed = 0;
    ensemble::SamplerOptions sampler;
    g_sample->add_option("--steps", steps, "recorded samples")->required();
    g_sample->add_option("--seed", seed, "random seed")->required();
    g_sample->add_option("--interval", sampler.record_interval, "proposals per recorded sample");
    g_sample->add_option("--burn-in", sampler.burn_in, "proposals discarded first");
    add_format(g_sample, {"csv", "json"});

    auto* g_measure = gas->add_subcommand("measure", "tagged-particle energy distribution");
    add_gas_flags(g_measure, gf);
    std::string label = "T";
    g_measure->add_option("--label", label, "preparation name");
    add_format(g_measure, {"csv", "json"});

    // --- ontology ----------------------------------------------------------
    auto* ont = app.add_subcommand("ontology", "finite ontological models");
    ont->require_subcommand(1);
    std::string model_path;

    auto* o_validate = ont->add_subcommand("validate", "check normalizations and shapes");
    o_validate->add_option("model", model_path, "model JSON")->required();
    add_format(o_validate, {"csv", "json"});

    auto* o_check = ont->add_subcommand("check", "deviation from Born targets");
    o_check->add_option("model", model_path, "model JSON")->required();
    add_format(o_check, {"csv", "json"});

    auto* o_overlap = ont->add_subcommand("overlap", "overlap class of two preparations");
    o_overlap->add_option("model", model_path, "model JSON")->required();
    std::vector<std::string> pair;
    o_overlap->add_option("--pair", pair, "two preparation names")->required()->expected(2);
    add_format(o_overlap, {"text", "csv", "json"});

    auto* o_classify = ont->add_subcommand("classify", "minimal / non-minimal information verdict");
    o_classify->add_option("model", model_path, "model JSON")->required();
    std::vector<std::string> preps;
    o_classify->add_option("--preps", preps, "restrict to these preparations")->delimiter(',');
    add_format(o_classify, {"csv", "json"});

    // --- pbr -----------------------------------------------------------------
    auto* pbr_cmd = app.add_subcommand("pbr", "PBR no-go check");
    pbr_cmd->require_subcommand(1);
    int resolution = 50;
    std::string method = "lp";

    auto* p_demo = pbr_cmd->add_subcommand("demo", "Born table, annihilations and the q = 0 witness");
    add_format(p_demo, {"csv", "json"});

    auto* p_scan = pbr_cmd->add_subcommand("scan", "forbidden probability versus overlap");
    std::string mode = "q";
    int points = 11;
    std::vector<double> grid;
    p_scan->add_option("--mode", mode, "q: min forbidden probability per q; eps: largest q per eps")
        ->check(CLI::IsMember({"q", "eps"}));
    p_scan->add_option("--points", points, "evenly spaced grid size")->check(CLI::Range(2, 100000));
    p_scan->add_option("--grid", grid, "explicit grid values")->delimiter(',');
    p_scan->add_option("--resolution", resolution, "simplex grid resolution for --method grid")
        ->check(CLI::PositiveNumber);
    p_scan->add_option("--method", method, "optimizer")->check(CLI::IsMember({"lp", "grid"}));
    add_format(p_scan, {"csv", "json"});

    auto* p_cat = pbr_cmd->add_subcommand("cat", "cat/atom superposition fixture");
    // Unset components are 0; with no amplitude given at all, a = b = 1/sqrt2.
    double a_re = 0.0, a_im = 0.0, b_re = 0.0, b_im = 0.0;
    const std::array<CLI::Option*, 4> amplitude_opts = {
        p_cat->add_option("--a-re", a_re, "Re a (alive/excited amplitude)"),
        p_cat->add_option("--a-im", a_im, "Im a"),
        p_cat->add_option("--b-re", b_re, "Re b (dead/decayed amplitude)"),
        p_cat->add_option("--b-im", b_im, "Im b"),
    };
    add_format(p_cat, {"csv", "json"});

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        const auto* leaf = &app;
        while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
        err << leaf->help();
        return 2;
    }

    const auto fmt = [&](const char* fallback) { return format.empty() ? std::string(fallback) : format; };

    std::string result;
    int code = 0;
    try {
        if (g_enum->parsed() || g_argmax->parsed()) {
            const auto spec = gf.spec();
            const auto model = ontology::gas_model(spec, "T", ensemble::kDefaultExactThreshold, gf.max_states);
            const auto states = g_enum->parsed() ? model.binnings : ensemble::most_probable_binnings(spec, gf.max_states);
            result = binning_table(states, model, gf.k, fmt("csv"));
        } else if (g_fit->parsed()) {
            const auto spec = gf.spec();
            if (stirling) {
                const auto [leading, standard] = ensemble::stirling_compare(spec);
                if (fmt("csv") == "json") {
                    result = dump({{"leading", fit_json(leading, spec)},
                                   {"standard", fit_json(standard, spec)},
                                   {"beta_difference", std::abs(leading.beta - standard.beta)}});
                } else {
                    result = "variant,alpha,beta,eps,predicted\n" + fit_rows("leading", leading, spec) +
                             fit_rows("standard", standard, spec);
                }
            } else {
                const auto fit = ensemble::boltzmann_fit(spec);
                result = fmt("csv") == "json" ? dump(fit_json(fit, spec))
                                              : "variant,alpha,beta,eps,predicted\n" + fit_rows("standard", fit, spec);
            }
        } else if (g_solve->parsed()) {
            const continuum::ContinuumGas cg{c_n, c_k * c_t, c_eps0};
            const double e1 = c_e1 ? *c_e1 : continuum::solve_total_energy(cg);
            if (c_points > 0) {
                const auto curve = continuum::density_curve(cg, e1, c_points);
                if (fmt("csv") == "json") {
                    json pts = json::array();
                    for (const auto& p : curve.points) pts.push_back({{"eps", p.eps}, {"rho", p.rho}});
                    result = dump({{"E1", e1}, {"points", pts}});
                } else {
                    result = curve.to_csv();
                }
            } else if (fmt("csv") == "json") {
                result = dump({{"N", c_n}, {"T", c_t}, {"eps0", c_eps0}, {"E1", e1},
                               {"residual", continuum::energy_residual(e1, cg)}});
            } else {
                result = "n,t,eps0,e1\n" + format_real(c_n) + "," + format_real(c_t) + "," + format_real(c_eps0) +
                         "," + format_real(e1) + "\n";
            }
        } else if (g_sample->parsed()) {
            const auto s = ensemble::sample_microstates(gf.spec(), steps, seed, sampler);
            if (fmt("csv") == "json") {
                json j = json::object();
                for (const auto& [b, count] : s.visits) j[b.key()] = count;
                result = dump(j);
            } else {
                result = "binning,count,frequency\n";
                for (const auto& [b, count] : s.visits)
                    result += quote(b.key()) + "," + std::to_string(count) + "," + format_real(s.frequency(b)) + "\n";
            }
        } else if (g_measure->parsed()) {
            const auto spec = gf.spec();
            const auto model = ontology::gas_model(spec, label, ensemble::kDefaultExactThreshold, gf.max_states);
            const auto p = ontology::tagged_energy_distribution(model);
            const auto exact = ontology::exact_tagged_energy_distribution(model);
            const auto peak = ontology::peak_state(model);
            const auto& xi = model.model.measurements.front().xi;
            if (fmt("csv") == "json") {
                json rows = json::array();
                for (int i = 0; i < spec.m; ++i) {
                    const auto ui = static_cast<std::size_t>(i);
                    json row = {{"eps", spec.level_energy(i)}, {"p_t", p[ui]}, {"xi_lambda0", xi[ui][peak]}};
                    row["p_t_exact"] = exact ? json((*exact)[ui].str()) : json(nullptr);
                    rows.push_back(std::move(row));
                }
                result = dump({{"preparation", label},
                               {"lambda0", model.binnings[peak].n},
                               {"peak_delta", ontology::peak_approximation_delta(model)},
                               {"distribution", rows}});
            } else {
                result = "eps,p_t,p_t_exact,xi_lambda0\n";
                for (int i = 0; i < spec.m; ++i) {
                    const auto ui = static_cast<std::size_t>(i);
                    result += format_real(spec.level_energy(i)) + "," + format_real(p[ui]) + "," +
                              (exact ? (*exact)[ui].str() : std::string()) + "," + format_real(xi[ui][peak]) + "\n";
                }
            }
        } else if (o_validate->parsed()) {
            const auto report = ontology::validate(ontology::load_model(model_path));
            result = fmt("json") == "json" ? dump(ontology::to_json(report)) : csv_validation(report);
            if (!report.ok()) {
                code = 1;
                err << json{{"error", to_string(ErrorKind::InvalidModel)},
                            {"message", std::to_string(report.issues.size()) + " invariant violation(s)"}}
                           .dump()
                    << "\n";
            }
        } else if (o_check->parsed()) {
            const auto dev = ontology::born_deviation(ontology::load_model(model_path));
            if (fmt("csv") == "json") {
                json rows = json::array();
                for (const auto& r : dev.table) {
                    rows.push_back({{"preparation", r.preparation}, {"measurement", r.measurement},
                                    {"outcome", r.outcome}, {"target", r.target},
                                    {"predicted", r.predicted}, {"deviation", r.deviation}});
                }
                result = dump({{"max_deviation", dev.max_deviation}, {"table", rows}});
            } else {
                result = "preparation,measurement,outcome,target,predicted,deviation\n";
                for (const auto& r : dev.table) {
                    result += quote(r.preparation) + "," + quote(r.measurement) + "," + quote(r.outcome) + "," +
                              format_real(r.target) + "," + format_real(r.predicted) + "," + format_real(r.deviation) +
                              "\n";
                }
            }
        } else if (o_overlap->parsed()) {
            const auto model = ontology::load_model(model_path);
            const auto* p1 = model.find_preparation(pair[0]);
            const auto* p2 = model.find_preparation(pair[1]);
            if (!p1 || !p2) throw UsageError("unknown preparation in --pair");
            const auto report = ontology::overlap_classify(model.lambda, *p1, *p2);
            const auto f = fmt("text");
            if (f == "json") {
                auto j = ontology::to_json(report);
                j["first"] = pair[0];
                j["second"] = pair[1];
                result = dump(j);
            } else if (f == "csv") {
                result = "first,second,class,omega,common_support\n" + quote(pair[0]) + "," + quote(pair[1]) + "," +
                         to_string(report.overlap_class) + "," + format_real(report.overlap_mass) + "," +
                         quote(join(report.common_support_labels, ";")) + "\n";
            } else {
                result = to_string(report.overlap_class) + ", omega=" + format_real(report.overlap_mass) + "\n";
            }
        } else if (o_classify->parsed()) {
            auto model = ontology::load_model(model_path);
            if (!preps.empty()) model = ontology::select_preparations(model, preps);
            const auto ic = ontology::information_class(model);
            if (fmt("csv") == "json") {
                json per = json::object();
                for (std::size_t l = 0; l < model.lambda.size(); ++l) per[model.lambda.labels[l]] = ic.supporting[l];
                result = dump({{"verdict", to_string(ic.verdict)}, {"supporting", per}});
            } else {
                result = "lambda,preparations,verdict\n";
                for (std::size_t l = 0; l < model.lambda.size(); ++l) {
                    result += quote(model.lambda.labels[l]) + "," + quote(join(ic.supporting[l], ";")) + "," +
                              quote(to_string(ic.verdict)) + "\n";
                }
            }
        } else if (p_demo->parsed()) {
            const auto table = pbr::quantum_targets();
            const auto forbidden = pbr::forbidden_pairs(table);
            const auto is_forbidden = [&](std::size_t p, std::size_t k) {
                for (const auto& f : forbidden)
                    if (f.first == p && f.second == k) return true;
                return false;
            };
            if (fmt("csv") == "json") {
                const auto witness = pbr::min_forbidden_probability(0.0, resolution);
                json t = json::object();
                for (std::size_t p = 0; p < 4; ++p)
                    t[pbr::kPreparationNames[p]] = std::vector<double>(table[p].begin(), table[p].end());
                json fb = json::array();
                for (const auto& [p, k] : forbidden) fb.push_back({pbr::kPreparationNames[p], pbr::kOutcomeNames[k]});
                result = dump({{"targets", t},
                               {"forbidden", fb},
                               {"min_forbidden_q0", witness.value},
                               {"witness_born_deviation", ontology::born_deviation(witness.model).max_deviation},
                               {"witness_model", ontology::to_json(witness.model)}});
            } else {
                result = "preparation,outcome,probability,forbidden\n";
                for (std::size_t p = 0; p < 4; ++p)
                    for (std::size_t k = 0; k < 4; ++k)
                        result += quote(pbr::kPreparationNames[p]) + "," + pbr::kOutcomeNames[k] + "," +
                                  format_real(table[p][k]) + "," + (is_forbidden(p, k) ? "1" : "0") + "\n";
            }
        } else if (p_scan->parsed()) {
            const auto opt = method == "grid" ? pbr::Optimizer::GridDescent : pbr::Optimizer::LinearProgram;
            std::vector<double> xs = grid;
            if (xs.empty()) {
                const double top = mode == "q" ? 1.0 : 0.25;
                for (int i = 0; i < points; ++i) xs.push_back(top * i / (points - 1));
            }
            json rows = json::array();
            if (mode == "q") {
                result = "q,min_forbidden_prob\n";
                for (double q : xs) {
                    const double v = pbr::min_forbidden_probability(q, resolution, opt).value;
                    result += format_real(q) + "," + format_real(v) + "\n";
                    rows.push_back({{"q", q}, {"min_forbidden_prob", v}});
                }
            } else {
                result = "eps,q_max\n";
                for (const auto& pt : pbr::epsilon_overlap_tradeoff(xs, resolution, opt)) {
                    result += format_real(pt.eps) + "," + format_real(pt.q_max) + "\n";
                    rows.push_back({{"eps", pt.eps}, {"q_max", pt.q_max}});
                }
            }
            if (fmt("csv") == "json") result = dump(rows);
        } else if (p_cat->parsed()) {
            const bool any_amplitude =
                std::any_of(amplitude_opts.begin(), amplitude_opts.end(), [](auto* o) { return o->count() > 0; });
            if (!any_amplitude) a_re = b_re = M_SQRT1_2;
            const auto cat = pbr::cat_fixture({a_re, a_im}, {b_re, b_im});
            if (fmt("json") == "json") {
                result = dump(ontology::to_json(cat.model));
            } else {
                result = "first,second,class,omega\n";
                for (const auto& o : cat.overlaps)
                    result += quote(o.first) + "," + quote(o.second) + "," + to_string(o.report.overlap_class) + "," +
                              format_real(o.report.overlap_mass) + "\n";
            }
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }

    if (out_path.empty()) {
        out << result;
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) {
            err << json{{"error", "IOError"}, {"message", "cannot write " + out_path}}.dump() << "\n";
            return 1;
        }
        file << result;
    }
    return code;
}

}  // namespace ontic::cli
