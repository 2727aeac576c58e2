#include "specind/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "specind/budgets.hpp"
#include "specind/certify.hpp"
#include "specind/errors.hpp"
#include "specind/gibbs.hpp"
#include "specind/glauber.hpp"
#include "specind/graph.hpp"
#include "specind/influence.hpp"
#include "specind/io.hpp"
#include "specind/spectral.hpp"
#include "specind/walks.hpp"

namespace specind {

namespace {

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_json(const nlohmann::json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream os(out_path);
    if (!os)
        throw ParseError("cannot open " + out_path + " for writing");
    os << j.dump(2) << "\n";
}

std::size_t env_or(const char* name, std::size_t fallback) {
    const char* v = std::getenv(name);
    if (!v)
        return fallback;
    return static_cast<std::size_t>(std::stoull(v));
}

struct CommonOpts {
    std::string graph_spec;
    std::string graph_file;
    std::string config_path;
    std::string model = "ising";
    double beta = 1.0;
    double gamma = 1.0;
    double lambda = 1.0;
    std::string out;
    std::uint64_t seed = 1;
    Budgets budgets;
};

// Fills unset options from a JSON config file; explicit flags win.
void apply_config(CLI::App* cmd, CommonOpts& o, double* eps, std::string* coverage) {
    if (o.config_path.empty())
        return;
    std::ifstream in(o.config_path);
    if (!in)
        throw ParseError("cannot open config " + o.config_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad config JSON: ") + e.what());
    }
    auto unset = [&](const char* flag) {
        auto* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() == 0;
    };
    auto str = [&](const char* flag, const char* key, std::string& dst) {
        if (unset(flag) && j.contains(key))
            dst = j[key].get<std::string>();
    };
    auto num = [&](const char* flag, const char* key, double& dst) {
        if (unset(flag) && j.contains(key))
            dst = j[key].get<double>();
    };
    str("--graph", "graph", o.graph_spec);
    str("--graph-file", "graph_file", o.graph_file);
    if (cmd->count("--model") == 0) {
        if (j.contains("kind"))
            o.model = j["kind"].get<std::string>();
        else if (j.contains("model"))
            o.model = j["model"].get<std::string>();
    }
    num("--beta", "beta", o.beta);
    num("--gamma", "gamma", o.gamma);
    num("--lambda", "lambda", o.lambda);
    if (cmd->count("--seed") == 0 && j.contains("seed"))
        o.seed = j["seed"].get<std::uint64_t>();
    if (eps && unset("--epsilon") && j.contains("epsilon"))
        *eps = j["epsilon"].get<double>();
    if (coverage && unset("--coverage") && j.contains("coverage"))
        *coverage = j["coverage"].get<std::string>();
}

void add_graph_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--graph", o.graph_spec, "generator spec, e.g. cycle:5 or grid:2x3");
    cmd->add_option("--graph-file", o.graph_file, "edge-list or .json graph file");
}

void add_model_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--model", o.model, "ising | hardcore | general")->capture_default_str();
    cmd->add_option("--beta", o.beta, "edge weight for (+,+)");
    cmd->add_option("--gamma", o.gamma, "edge weight for (-,-)");
    cmd->add_option("--lambda", o.lambda, "vertex weight for +1 (fugacity)");
}

void add_budget_flags(CLI::App* cmd, CommonOpts& o) {
    o.budgets.state_evals = env_or("SPECIND_BUDGET_STATES", o.budgets.state_evals);
    o.budgets.tree_nodes = env_or("SPECIND_BUDGET_NODES", o.budgets.tree_nodes);
    o.budgets.matrix_cells = env_or("SPECIND_BUDGET_CELLS", o.budgets.matrix_cells);
    o.budgets.chain_states = env_or("SPECIND_BUDGET_CHAIN", o.budgets.chain_states);
    cmd->add_option("--budget-states", o.budgets.state_evals, "brute-force state budget");
    cmd->add_option("--budget-nodes", o.budgets.tree_nodes, "walk-tree node budget");
}

Graph resolve_graph(const CommonOpts& o) {
    if (!o.graph_file.empty())
        return load_graph_file(o.graph_file);
    if (!o.graph_spec.empty())
        return make_graph_from_spec(o.graph_spec);
    throw InvalidParams("need --graph or --graph-file");
}

GibbsParams resolve_model(const CommonOpts& o) {
    if (o.model == "ising")
        return GibbsParams::ising(o.beta);
    if (o.model == "hardcore")
        return GibbsParams::hardcore(o.lambda);
    if (o.model == "general")
        return GibbsParams::general(o.beta, o.gamma, o.lambda);
    throw InvalidParams("unknown model \"" + o.model + "\"");
}

Pinning parse_pinning(const Graph& g, const std::string& text) {
    Pinning pin(g.num_vertices());
    if (text.empty())
        return pin;
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto colon = tok.find(':');
        if (colon == std::string::npos)
            throw InvalidParams("pinning entries look like 3:+1 or 3:-1");
        int v = std::stoi(tok.substr(0, colon));
        std::string s = tok.substr(colon + 1);
        if (s == "+1" || s == "1")
            pin.pin(v, 1);
        else if (s == "-1")
            pin.pin(v, -1);
        else
            throw InvalidParams("pinned spin must be +1 or -1, got \"" + s + "\"");
    }
    return pin;
}

Coverage parse_coverage(const std::string& text, std::uint64_t seed) {
    if (text.empty() || text == "exhaustive")
        return Coverage::full();
    if (text.rfind("sampled", 0) == 0) {
        auto colon = text.find(':');
        int m = colon == std::string::npos ? 200 : std::stoi(text.substr(colon + 1));
        return Coverage::sampled(m, seed);
    }
    throw InvalidParams("coverage is 'exhaustive' or 'sampled:M'");
}

int run_spectra(const CommonOpts& o, const std::string& csv_prefix) {
    Graph g = resolve_graph(o);
    auto s = spectral_summary(g, o.budgets);
    nlohmann::json j;
    j["schema"] = "specind-spectra-v1";
    j["graph"] = {{"n", g.num_vertices()}, {"edges", g.num_edges()}};
    j["rho_A"] = s.rho_A;
    j["nu_H"] = s.nu_H;
    j["max_degree"] = s.max_degree;
    j["f1"] = vector_to_json(s.f1);
    if (!csv_prefix.empty()) {
        write_csv_file(csv_prefix + "_adjacency.csv", adjacency_matrix(g));
        write_csv_file(csv_prefix + "_f1.csv", s.f1);
    }
    write_json(j, o.out);
    return 0;
}

int run_thresholds(const CommonOpts& o, std::optional<double> lc, std::optional<double> dc,
                   std::optional<double> interval_k, std::optional<double> interval_delta,
                   std::optional<int> planar, std::optional<int> genus,
                   std::optional<int> genus_degree) {
    nlohmann::json j;
    j["schema"] = "specind-thresholds-v1";
    if (lc)
        j["lambda_c"] = {{"z", *lc}, {"value", lambda_c(*lc)}};
    if (dc)
        j["delta_c"] = {{"lambda", *dc}, {"value", delta_c(*dc)}};
    if (interval_k && interval_delta) {
        auto [a, b] = ising_interval(*interval_k, *interval_delta);
        j["ising_interval"] = {{"k", *interval_k}, {"delta", *interval_delta}, {"value", {a, b}}};
    }
    if (planar)
        j["planar_radius_bound"] = {{"max_degree", *planar},
                                    {"value", surface_radius_bound(*planar)}};
    if (genus && genus_degree)
        j["genus_radius_bound"] = {{"genus", *genus},
                                   {"max_degree", *genus_degree},
                                   {"value", surface_radius_bound(*genus_degree, *genus)}};
    write_json(j, o.out);
    return 0;
}

int run_influence(const CommonOpts& o, const std::string& pin_text, const std::string& route,
                  const std::string& csv, int dump_root) {
    Graph g = resolve_graph(o);
    GibbsParams p = resolve_model(o);
    Pinning pin = parse_pinning(g, pin_text);
    nlohmann::json j;
    j["schema"] = "specind-influence-v1";
    j["pinning"] = pin_text;
    if (route == "brute" || route == "both") {
        auto m = influence_bruteforce(g, p, pin, o.budgets);
        auto s = influence_spectrum(m);
        j["bruteforce"] = {{"matrix", matrix_to_json(m.I)},
                           {"vertices", m.verts},
                           {"theta_max", s.theta_max},
                           {"rho", s.rho},
                           {"flagged_rows", m.flagged_rows}};
        if (!csv.empty())
            write_csv_file(csv, m.I);
    }
    if (route == "saw" || route == "both") {
        auto m = influence_via_saw(g, p, pin, o.budgets);
        auto s = influence_spectrum(m);
        j["saw"] = {{"matrix", matrix_to_json(m.I)},
                    {"vertices", m.verts},
                    {"theta_max", s.theta_max},
                    {"rho", s.rho}};
        if (!csv.empty() && route == "saw")
            write_csv_file(csv, m.I);
    }
    if (dump_root >= 0) {
        auto sw = saw_boundary_and_weights(g, p, pin, dump_root, o.budgets);
        j["saw_tree_dump"] = dump_walk_tree(sw.tree, &sw.sigma, &sw.weight);
    }
    write_json(j, o.out);
    return 0;
}

int run_certify(const CommonOpts& o, double eps, std::optional<double> delta,
                const std::string& coverage_text, bool with_glauber) {
    Graph g = resolve_graph(o);
    GibbsParams p = resolve_model(o);
    if (delta) {
        // an explicit contraction delta pins eps through delta = (1-eps)/rho
        double rho = perron_pair(adjacency_matrix(g)).rho;
        eps = 1.0 - *delta * rho;
        if (eps <= 0.0 || eps >= 1.0)
            throw InvalidParams("--delta of " + std::to_string(*delta) +
                                " leaves no eps in (0,1) at rho = " + std::to_string(rho));
    }
    CertifyOptions opts;
    opts.eps = eps;
    opts.coverage = parse_coverage(coverage_text, o.seed);
    opts.seed = o.seed;
    opts.with_glauber = with_glauber;
    opts.timestamp = iso_timestamp();
    auto j = certify_report(g, p, opts, o.budgets);
    write_json(j, o.out);
    return j["all_hold"].get<bool>() ? 0 : 1;
}

int run_mix(const CommonOpts& o, bool exact, int chains, long long horizon,
            const std::string& csv) {
    Graph g = resolve_graph(o);
    GibbsParams p = resolve_model(o);
    nlohmann::json j;
    j["schema"] = "specind-mix-v1";
    j["seed"] = o.seed;
    if (exact) {
        auto a = transition_matrix(g, p, o.budgets);
        j["exact"] = {{"states", a.states.size()},
                      {"theta_star", a.theta_star},
                      {"gap", a.gap},
                      {"pi_min", a.pi_min},
                      {"t_mix_quarter", a.t_mix_quarter},
                      {"tmix_gap_bound", a.gap > 0.0 ? tmix_from_gap(a.gap, a.pi_min)
                                                     : std::numeric_limits<double>::infinity()}};
        if (!csv.empty()) {
            std::ofstream os(csv);
            os << "t,tv_exact\n" << std::setprecision(17);
            for (std::size_t t = 0; t < a.tv_curve.size(); ++t)
                os << t << "," << a.tv_curve[t] << "\n";
        }
    }
    if (chains > 0) {
        auto e = empirical_mixing(g, p, chains, horizon, o.seed, o.budgets);
        j["empirical"] = {{"chains", e.chains},
                          {"horizon", e.horizon},
                          {"target_exact", e.target_exact},
                          {"final_proxy", e.tv_proxy.empty() ? 0.0 : e.tv_proxy.back()}};
        if (!csv.empty() && !exact) {
            std::ofstream os(csv);
            os << "t,tv_estimate\n" << std::setprecision(17);
            for (std::size_t t = 0; t < e.tv_proxy.size(); ++t)
                os << t << "," << e.tv_proxy[t] << "\n";
        }
    }
    write_json(j, o.out);
    return 0;
}

int run_sweep(const CommonOpts& o, const std::string& coverage_text) {
    Graph g = resolve_graph(o);
    GibbsParams p = resolve_model(o);
    Coverage cov = parse_coverage(coverage_text, o.seed);
    nlohmann::json records = nlohmann::json::array();
    auto res = spectral_independence_eta(g, p, cov, o.budgets, false,
                                         [&](const PinningRecord& rec) {
                                             nlohmann::json r;
                                             std::string pins;
                                             for (int v = 0; v < rec.pin.size(); ++v)
                                                 if (rec.pin.pinned(v))
                                                     pins += std::to_string(v) +
                                                             (rec.pin.spin(v) > 0 ? ":+1," : ":-1,");
                                             if (!pins.empty())
                                                 pins.pop_back();
                                             r["pinning"] = pins;
                                             r["theta_max"] = rec.theta_max;
                                             r["rho"] = rec.rho;
                                             records.push_back(r);
                                         });
    nlohmann::json j;
    j["schema"] = "specind-sweep-v1";
    j["eta"] = res.eta;
    j["max_rho"] = res.max_rho;
    j["coverage"] = res.exhaustive ? "exhaustive" : "sampled";
    j["pinnings"] = res.pinnings_covered;
    j["records"] = records;
    write_json(j, o.out);
    return 0;
}

} // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"spectral-independence certificates for two-spin Gibbs distributions"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string csv_prefix, csv, pin_text, route = "both", coverage = "exhaustive";
    double eps = 0.5;
    bool with_glauber = false;
    bool exact = false;
    int chains = 0, dump_root = -1;
    long long horizon = 1000;
    std::optional<double> lc, dc, interval_k, interval_delta, delta;
    std::optional<int> planar, genus, genus_degree;

    auto* spectra = app.add_subcommand("spectra", "adjacency and non-backtracking spectra");
    add_graph_flags(spectra, o);
    add_budget_flags(spectra, o);
    spectra->add_option("--csv-prefix", csv_prefix, "write A and f1 as CSV with this prefix");

    auto* thresholds = app.add_subcommand("thresholds", "uniqueness thresholds and radius bounds");
    thresholds->add_option("--lambda-c", lc, "evaluate lambda_c(z)");
    thresholds->add_option("--delta-c", dc, "evaluate Delta_c(lambda)");
    thresholds->add_option("--ising-k", interval_k, "M_Ising first argument");
    thresholds->add_option("--ising-delta", interval_delta, "M_Ising second argument");
    thresholds->add_option("--planar", planar, "planar radius bound at this max degree");
    thresholds->add_option("--genus", genus, "Euler genus for the embedded bound");
    thresholds->add_option("--genus-degree", genus_degree, "max degree for the genus bound");

    auto* influence = app.add_subcommand("influence", "pairwise influence matrices");
    add_graph_flags(influence, o);
    add_model_flags(influence, o);
    add_budget_flags(influence, o);
    influence->add_option("--pin", pin_text, "comma list v:+1,w:-1");
    influence->add_option("--route", route, "brute | saw | both")->capture_default_str();
    influence->add_option("--csv", csv, "write the matrix as CSV");
    influence->add_option("--dump-tree", dump_root, "dump the SAW tree of this root");

    auto* certify = app.add_subcommand("certify", "evaluate and verify the spectral bounds");
    add_graph_flags(certify, o);
    add_model_flags(certify, o);
    add_budget_flags(certify, o);
    certify->add_option("--epsilon", eps, "slack parameter of the bounds")->capture_default_str();
    certify->add_option("--delta", delta, "contraction rate; overrides --epsilon via (1-eps)/rho");
    certify->add_option("--coverage", coverage, "exhaustive | sampled:M")->capture_default_str();
    certify->add_flag("--with-glauber", with_glauber, "also compare against the exact chain gap");

    auto* mix = app.add_subcommand("mix", "Glauber dynamics analysis");
    add_graph_flags(mix, o);
    add_model_flags(mix, o);
    add_budget_flags(mix, o);
    mix->add_flag("--exact", exact, "exact transition-matrix analysis");
    mix->add_option("--chains", chains, "number of empirical chains");
    mix->add_option("--horizon", horizon, "empirical chain length")->capture_default_str();
    mix->add_option("--csv", csv, "write the TV curve as CSV");

    auto* sweep = app.add_subcommand("sweep", "per-pinning influence eigenvalue sweep");
    add_graph_flags(sweep, o);
    add_model_flags(sweep, o);
    add_budget_flags(sweep, o);
    sweep->add_option("--coverage", coverage, "exhaustive | sampled:M")->capture_default_str();

    for (auto* cmd : {spectra, influence, certify, mix, sweep, thresholds}) {
        cmd->add_option("--out", o.out, "write the JSON report here (default: stdout)");
        cmd->add_option("--seed", o.seed, "seed for sampled coverage and chains");
        cmd->add_option("--config", o.config_path, "JSON config file; flags override it");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream dummy;
        int code = app.exit(e, dummy, dummy);
        std::cerr << dummy.str();
        return code == 0 ? 0 : 2;
    }

    try {
        if (spectra->parsed()) {
            apply_config(spectra, o, nullptr, nullptr);
            return run_spectra(o, csv_prefix);
        }
        if (thresholds->parsed())
            return run_thresholds(o, lc, dc, interval_k, interval_delta, planar, genus,
                                  genus_degree);
        if (influence->parsed()) {
            apply_config(influence, o, nullptr, nullptr);
            return run_influence(o, pin_text, route, csv, dump_root);
        }
        if (certify->parsed()) {
            apply_config(certify, o, &eps, &coverage);
            return run_certify(o, eps, delta, coverage, with_glauber);
        }
        if (mix->parsed()) {
            apply_config(mix, o, nullptr, nullptr);
            return run_mix(o, exact, chains, horizon, csv);
        }
        if (sweep->parsed()) {
            apply_config(sweep, o, nullptr, &coverage);
            return run_sweep(o, coverage);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace specind
