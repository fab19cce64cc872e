#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gapprob/ensembles.hpp"
#include "gapprob/errors.hpp"
#include "gapprob/gap.hpp"

#ifndef GAPPROB_VERSION
#define GAPPROB_VERSION "unknown"
#endif

namespace gapprob::cli {

namespace {

using json = nlohmann::ordered_json;

std::string fmt15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

// Round to 15 significant digits so that JSON output carries no spurious trailing digits.
json num(double v) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return std::stod(fmt15(v));
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

json config_json(const RunConfig& c) {
    json j;
    j["quadrature_order"] = c.quadrature_order;
    j["ode_tolerance"] = num(c.ode_tolerance);
    j["identity_tolerance"] = c.identity_tolerance ? num(*c.identity_tolerance) : json(nullptr);
    j["output_format"] = c.output_format;
    j["seed"] = c.seed;
    return j;
}

json envelope(const RunConfig& c, json results) {
    json j;
    j["config"] = config_json(c);
    j["results"] = std::move(results);
    j["version"] = GAPPROB_VERSION;
    return j;
}

GapOptions gap_options(const RunConfig& c) {
    GapOptions o;
    o.quadrature_order = c.quadrature_order;
    o.ode.rel_tol = c.ode_tolerance;
    o.ode.abs_tol = c.ode_tolerance;
    return o;
}

json report_json(const IdentityReport& r) {
    json j;
    j["identity_name"] = r.identity_name;
    j["parameters"] = r.parameters;
    j["lhs"] = num(r.lhs);
    j["rhs"] = num(r.rhs);
    j["abs_diff"] = num(r.abs_diff);
    j["rel_diff"] = num(r.rel_diff);
    j["tolerance"] = num(r.tolerance);
    j["pass"] = r.pass;
    j["fredholm_error"] = num(r.fredholm_error);
    j["diagnostics"] = r.diagnostics;
    return j;
}

struct QueryArgs {
    std::string regime;
    int beta = 2;
    double a = 0.0;
    double xi = 1.0;
    std::string route = "fredholm";
    CLI::Option* a_opt = nullptr;
};

void add_query_options(CLI::App* sub, QueryArgs& q) {
    sub->add_option("--regime", q.regime, "bulk, soft or hard")
        ->required()
        ->check(CLI::IsMember({"bulk", "soft", "hard"}));
    sub->add_option("--beta", q.beta, "1, 2 or 4")->check(CLI::IsMember({1, 2, 4}));
    q.a_opt = sub->add_option("--a", q.a, "hard-edge exponent");
    sub->add_option("--xi", q.xi, "generating-function parameter in (0, 1]");
    sub->add_option("--route", q.route, "fredholm, painleve or both")
        ->check(CLI::IsMember({"fredholm", "painleve", "both"}));
}

GapQuery make_query(const QueryArgs& q, double s) {
    GapQuery g;
    g.regime = parse_regime(q.regime);
    g.beta = q.beta;
    g.s = s;
    g.xi = q.xi;
    g.route = parse_route(q.route);
    if (g.regime == Regime::hard) {
        if (q.a_opt->count() == 0) {
            throw DomainError("missing parameter --a (required for hard-edge queries)");
        }
        g.a = q.a;
    } else if (q.a_opt->count() > 0) {
        throw DomainError("--a applies to hard-edge queries only");
    }
    return g;
}

json result_json(const GapQuery& g, const GapResult& r) {
    json j;
    j["regime"] = to_string(g.regime);
    j["beta"] = g.beta;
    j["s"] = num(g.s);
    j["a"] = g.a ? num(*g.a) : json(nullptr);
    j["xi"] = num(g.xi);
    j["route"] = r.route;
    j["value"] = num(r.value);
    j["error_estimate"] = num(r.error_estimate);
    j["painleve_value"] = r.painleve_value ? num(*r.painleve_value) : json(nullptr);
    j["formula"] = r.formula;
    return j;
}

}  // namespace

void apply_config_text(const std::string& text, RunConfig& cfg) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line.substr(0, line.find('#')));
        if (t.empty()) {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        try {
            std::size_t used = 0;
            if (key == "quadrature_order") {
                cfg.quadrature_order = std::stoi(value, &used);
            } else if (key == "ode_tolerance") {
                cfg.ode_tolerance = std::stod(value, &used);
            } else if (key == "identity_tolerance") {
                cfg.identity_tolerance = std::stod(value, &used);
            } else if (key == "output_format") {
                cfg.output_format = value;
                used = value.size();
            } else if (key == "seed") {
                cfg.seed = std::stoull(value, &used);
            } else {
                throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            }
            if (used != value.size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::logic_error& e) {
            if (std::string(e.what()).rfind("config line", 0) == 0) {
                throw;
            }
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad value for '" + key + "'");
        }
    }
}

void validate(const RunConfig& c) {
    // Orders below 16 are accepted so that deliberately under-resolved runs remain possible.
    if (c.quadrature_order < 2 || c.quadrature_order > 2048) {
        throw std::invalid_argument("quadrature_order must lie in [2, 2048]");
    }
    if (!(c.ode_tolerance > 0.0)) {
        throw std::invalid_argument("ode_tolerance must be positive");
    }
    if (c.identity_tolerance && !(*c.identity_tolerance > 0.0)) {
        throw std::invalid_argument("identity_tolerance must be positive");
    }
    if (c.output_format != "csv" && c.output_format != "json") {
        throw std::invalid_argument("output_format must be csv or json");
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gap probabilities of random matrix ensembles via Fredholm determinants and Painleve transcendents"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    int order = 0;
    double ode_tol = 0.0;
    double identity_tol = 0.0;
    std::string format;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "key=value configuration file");
    auto* order_opt = app.add_option("--quadrature-order", order, "Nystrom order (default 64)");
    auto* ode_opt = app.add_option("--ode-tol", ode_tol, "ODE tolerance (default 1e-11)");
    auto* id_opt = app.add_option("--identity-tol", identity_tol, "tolerance applied to every identity");
    auto* fmt_opt = app.add_option("--format", format, "csv or json");
    auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed");

    QueryArgs eval_args;
    double eval_s = 0.0;
    auto* eval = app.add_subcommand("eval", "evaluate one gap probability");
    add_query_options(eval, eval_args);
    eval->add_option("--s", eval_s, "interval parameter")->required();

    QueryArgs table_args;
    std::vector<double> grid;
    double s_min = 0.0;
    double s_max = 0.0;
    int points = 0;
    auto* table = app.add_subcommand("table", "tabulate a gap probability over a grid of s");
    add_query_options(table, table_args);
    auto* grid_opt = table->add_option("--s-grid", grid, "comma-separated increasing s values")->delimiter(',');
    auto* min_opt = table->add_option("--s-min", s_min);
    auto* max_opt = table->add_option("--s-max", s_max);
    auto* pts_opt = table->add_option("--points", points);

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "run an identity verification suite");
    verify->add_option("--suite", suite)->check(CLI::IsMember({"bulk", "soft", "hard", "xi", "lemmas", "all"}));

    std::string family = "gaussian";
    std::string edge = "soft";
    int beta = 2;
    int N = 200;
    double sample_s = 0.0;
    double sample_a = 0.0;
    long trials = 20000;
    auto* sample = app.add_subcommand("sample", "Monte Carlo gap estimate against the scaling limit");
    sample->add_option("--family", family)->check(CLI::IsMember({"gaussian", "laguerre"}));
    sample->add_option("--edge", edge)->check(CLI::IsMember({"soft", "hard"}));
    sample->add_option("--beta", beta)->check(CLI::IsMember({1, 2, 4}));
    sample->add_option("--N", N);
    sample->add_option("--s", sample_s)->required();
    auto* sample_a_opt = sample->add_option("--a", sample_a);
    sample->add_option("--trials", trials);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) {
                throw std::invalid_argument("cannot read config file " + config_path);
            }
            std::stringstream buf;
            buf << f.rdbuf();
            apply_config_text(buf.str(), cfg);
        }
        if (order_opt->count()) cfg.quadrature_order = order;
        if (ode_opt->count()) cfg.ode_tolerance = ode_tol;
        if (id_opt->count()) cfg.identity_tolerance = identity_tol;
        if (fmt_opt->count()) cfg.output_format = format;
        if (seed_opt->count()) cfg.seed = seed;
        validate(cfg);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        const GapOptions opts = gap_options(cfg);
        if (*eval) {
            const GapQuery q = make_query(eval_args, eval_s);
            const GapResult r = evaluate_gap(q, opts);
            out << fmt15(r.value) << "\n" << envelope(cfg, json::array({result_json(q, r)})).dump() << "\n";
            return 0;
        }
        if (*table) {
            if (grid_opt->count() == 0) {
                if (!(min_opt->count() && max_opt->count() && pts_opt->count())) {
                    throw std::invalid_argument("table needs --s-grid or all of --s-min, --s-max, --points");
                }
                if (points < 2 || !(s_max > s_min)) {
                    throw std::invalid_argument("table needs --points >= 2 and --s-max > --s-min");
                }
                for (int i = 0; i < points; ++i) {
                    grid.push_back(s_min + (s_max - s_min) * i / (points - 1));
                }
            }
            if (grid.empty()) {
                throw std::invalid_argument("empty s grid");
            }
            for (std::size_t i = 1; i < grid.size(); ++i) {
                if (!(grid[i] > grid[i - 1])) {
                    throw std::invalid_argument("s grid must be strictly increasing");
                }
            }
            std::vector<std::pair<GapQuery, GapResult>> rows;
            for (double s : grid) {
                const GapQuery q = make_query(table_args, s);
                rows.emplace_back(q, evaluate_gap(q, opts));
            }
            if (cfg.output_format == "json") {
                json res = json::array();
                for (const auto& [q, r] : rows) {
                    res.push_back(result_json(q, r));
                }
                out << envelope(cfg, res).dump() << "\n";
            } else {
                out << "s,value,route,error_estimate\n";
                for (const auto& [q, r] : rows) {
                    out << fmt15(q.s) << "," << fmt15(r.value) << "," << r.route << "," << fmt15(r.error_estimate)
                        << "\n";
                }
            }
            return 0;
        }
        if (*verify) {
            VerifyOptions vo;
            vo.gap = opts;
            vo.tolerance = cfg.identity_tolerance;
            const auto reports = verify_identities(parse_suite(suite), vo);
            json res = json::array();
            bool all_pass = true;
            for (const auto& r : reports) {
                res.push_back(report_json(r));
                all_pass = all_pass && r.pass;
            }
            out << envelope(cfg, res).dump(2) << "\n";
            if (!all_pass) {
                err << "verification failed:";
                for (const auto& r : reports) {
                    if (!r.pass) {
                        err << " " << r.identity_name << "[" << r.parameters << "]";
                    }
                }
                err << "\n";
            }
            return all_pass ? 0 : 1;
        }
        if (*sample) {
            EnsembleSpec spec;
            spec.family = family == "gaussian" ? EnsembleFamily::gaussian : EnsembleFamily::laguerre;
            spec.beta = beta;
            spec.N = N;
            spec.a = sample_a;
            spec.seed = cfg.seed;
            const bool hard = edge == "hard";
            if (hard && sample_a_opt->count() == 0) {
                throw DomainError("missing parameter --a (required for hard-edge queries)");
            }
            if (hard && spec.family != EnsembleFamily::laguerre) {
                throw DomainError("--edge hard requires --family laguerre");
            }
            const EmpiricalGap g = hard ? empirical_gap_hard(spec, sample_s, trials)
                                        : empirical_gap_soft(spec, sample_s, trials);
            json r;
            r["family"] = family;
            r["edge"] = edge;
            r["beta"] = beta;
            r["N"] = N;
            r["a"] = spec.family == EnsembleFamily::laguerre ? num(sample_a) : json(nullptr);
            r["s"] = num(sample_s);
            r["estimate"] = num(g.estimate);
            r["trials"] = g.trials;
            r["ci_halfwidth"] = num(g.ci_halfwidth);
            try {
                const double c = hard ? gap_hard(beta, sample_s, sample_a, 1.0, Route::fredholm, opts)
                                      : gap_soft(beta, sample_s, 1.0, Route::fredholm, opts);
                r["comparator"] = num(c);
                r["comparator_route"] = "fredholm";
            } catch (const std::exception& e) {
                r["comparator"] = nullptr;
                r["comparator_route"] = std::string("unavailable: ") + e.what();
            }
            r["rng"] = rng_algorithm();
            out << envelope(cfg, json::array({r})).dump() << "\n";
            return 0;
        }
    } catch (const std::logic_error& e) {
        // DomainError, CapabilityError and argument validation.
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const IntegrationError& e) {
        err << "numerical failure: " << e.what() << " at " << fmt15(e.location()) << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace gapprob::cli
