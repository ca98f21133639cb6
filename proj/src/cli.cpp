#include "unfold/cli.hpp"

#include "unfold/bench.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace unfold {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

LossTag parse_loss(const std::string& s) {
    static const std::map<std::string, LossTag> names = {
        {"sq_centered", LossTag::sq_centered},
        {"sq", LossTag::sq},
        {"sqrt_sq", LossTag::sqrt_sq},
        {"abs", LossTag::abs},
        {"sammon", LossTag::sammon},
        {"cca", LossTag::cca},
        {"nbr_indicator", LossTag::nbr_indicator},
        {"nbr_quadratic", LossTag::nbr_quadratic},
        {"breg_entropy", LossTag::breg_entropy},
        {"breg_exp", LossTag::breg_exp},
        {"breg_sne_row", LossTag::breg_sne_row},
        {"breg_sne_matrix", LossTag::breg_sne_matrix},
        {"margin_hinge", LossTag::margin_hinge},
        {"tsne", LossTag::tsne},
        // evaluation shorthands
        {"sne", LossTag::breg_sne_matrix},
        {"rmvu", LossTag::nbr_quadratic},
        {"expbreg", LossTag::breg_exp},
    };
    const auto it = names.find(s);
    if (it == names.end()) throw invalid_parameter("unknown loss '" + s + "'");
    return it->second;
}

RegTag parse_reg(const std::string& s) {
    static const std::map<std::string, RegTag> names = {
        {"rank_trunc", RegTag::rank_trunc},
        {"none", RegTag::rank_trunc},
        {"trace", RegTag::trace},
        {"neg_trace", RegTag::neg_trace},
        {"partition", RegTag::partition},
        {"partition_smoothed", RegTag::partition_smoothed},
        {"completed_square", RegTag::completed_square},
        {"biconjugate", RegTag::biconjugate},
    };
    const auto it = names.find(s);
    if (it == names.end()) throw invalid_parameter("unknown regularizer '" + s + "'");
    return it->second;
}

MatrixKind parse_kind(const std::string& s) {
    if (s == "data") return MatrixKind::data;
    if (s == "kernel") return MatrixKind::kernel;
    if (s == "edm") return MatrixKind::edm;
    if (s == "adjacency") return MatrixKind::adjacency;
    throw invalid_parameter("unknown matrix kind '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open config '" + path + "'");
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw invalid_input("config '" + path + "': " + e.what());
    }
    if (!cfg.is_object()) throw invalid_input("config '" + path + "' must hold a JSON object");
    return cfg;
}

// Flags beat the config file; the config beats built-in defaults.  Config keys
// may be spelled with underscores (like the summary JSON) or flag-style hyphens.
template <class T>
void overlay(const CLI::Option* opt, const json& cfg, const char* key, T& var) {
    if (opt == nullptr || opt->count() > 0) return;
    std::string alt = key;
    std::replace(alt.begin(), alt.end(), '-', '_');
    if (cfg.contains(key)) var = cfg.at(key).get<T>();
    else if (alt != key && cfg.contains(alt)) var = cfg.at(alt).get<T>();
}

std::string config_list(const json& cfg, const char* key, const std::string& fallback) {
    if (!cfg.contains(key)) return fallback;
    const json& v = cfg.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string out;
        for (const auto& e : v) {
            if (!out.empty()) out += ',';
            out += e.get<std::string>();
        }
        return out;
    }
    throw invalid_input(std::string("config key '") + key + "' must be a string or array");
}

// Options shared by embed and bench, plus their parsed handles so the config
// overlay can tell defaults from explicit flags.
struct Common {
    std::string loss = "sq_centered";
    std::string reg = "neg_trace";
    Index d = 2;
    double alpha = 1.0, beta = 0.1, gamma = 1e-3, sigma = 1.0;
    int k = 6;
    double eps = 0.0;  // > 0 selects the radius rule
    bool no_symmetrize = false;
    int max_iters = 5000;
    std::string step = "sqrt_decay";
    double eta0 = 0.0;
    bool no_momentum = false, no_restart = false, no_center = false;
    double tol = 1e-7;
    int patience = 50;
    double loss_weight = 1.0;
    std::uint64_t seed = 0;
    std::string config_path;
    std::map<std::string, CLI::Option*> opt;
};

void add_common(CLI::App* cmd, Common& c) {
    c.opt["loss"] = cmd->add_option("--loss", c.loss, "loss kind (or sne/rmvu/expbreg)");
    c.opt["reg"] = cmd->add_option("--reg", c.reg, "regularizer kind (or none)");
    c.opt["d"] = cmd->add_option("--d", c.d, "embedding dimension");
    c.opt["alpha"] = cmd->add_option("--alpha", c.alpha, "lower spectral weight");
    c.opt["beta"] = cmd->add_option("--beta", c.beta, "upper spectral weight");
    c.opt["gamma"] = cmd->add_option("--gamma", c.gamma, "smoothing weight");
    c.opt["sigma"] = cmd->add_option("--sigma", c.sigma, "exponential loss scale");
    c.opt["k"] = cmd->add_option("--k", c.k, "neighbors per point");
    c.opt["eps"] = cmd->add_option("--eps", c.eps, "neighbor radius (overrides --k)");
    cmd->add_flag("--no-symmetrize", c.no_symmetrize, "keep the neighbor graph directed");
    c.opt["max-iters"] = cmd->add_option("--max-iters", c.max_iters, "iteration cap");
    c.opt["step"] = cmd->add_option("--step", c.step, "step rule: fixed | sqrt_decay");
    c.opt["eta0"] = cmd->add_option("--eta0", c.eta0, "base step size (0 = automatic)");
    cmd->add_flag("--no-momentum", c.no_momentum, "plain subgradient steps");
    cmd->add_flag("--no-restart", c.no_restart, "keep momentum across objective increases");
    cmd->add_flag("--no-center", c.no_center, "project onto {symmetric, PSD} only");
    c.opt["tol"] = cmd->add_option("--tol", c.tol, "relative stall tolerance");
    c.opt["patience"] = cmd->add_option("--patience", c.patience, "stall window (iterations)");
    c.opt["loss-weight"] = cmd->add_option("--loss-weight", c.loss_weight, "loss scale in the objective");
    c.opt["seed"] = cmd->add_option("--seed", c.seed, "RNG seed");
    cmd->add_option("--config", c.config_path, "JSON config; flags override it");
}

void apply_config(Common& c, const json& cfg) {
    overlay(c.opt["loss"], cfg, "loss", c.loss);
    overlay(c.opt["reg"], cfg, "reg", c.reg);
    overlay(c.opt["d"], cfg, "d", c.d);
    overlay(c.opt["alpha"], cfg, "alpha", c.alpha);
    overlay(c.opt["beta"], cfg, "beta", c.beta);
    overlay(c.opt["gamma"], cfg, "gamma", c.gamma);
    overlay(c.opt["sigma"], cfg, "sigma", c.sigma);
    overlay(c.opt["k"], cfg, "k", c.k);
    overlay(c.opt["eps"], cfg, "eps", c.eps);
    overlay(c.opt["max-iters"], cfg, "max-iters", c.max_iters);
    overlay(c.opt["step"], cfg, "step", c.step);
    overlay(c.opt["eta0"], cfg, "eta0", c.eta0);
    overlay(c.opt["tol"], cfg, "tol", c.tol);
    overlay(c.opt["patience"], cfg, "patience", c.patience);
    overlay(c.opt["loss-weight"], cfg, "loss-weight", c.loss_weight);
    overlay(c.opt["seed"], cfg, "seed", c.seed);
    // positive-sense boolean config keys for the --no-* flags
    if (!c.no_momentum && cfg.contains("momentum")) c.no_momentum = !cfg.at("momentum").get<bool>();
    if (!c.no_restart && cfg.contains("restart")) c.no_restart = !cfg.at("restart").get<bool>();
    if (!c.no_center && cfg.contains("center")) c.no_center = !cfg.at("center").get<bool>();
    if (!c.no_symmetrize && cfg.contains("symmetrize"))
        c.no_symmetrize = !cfg.at("symmetrize").get<bool>();
}

NeighborRule rule_of(const Common& c) {
    return c.eps > 0.0 ? NeighborRule::eps(c.eps) : NeighborRule::knn(c.k);
}

SolverConfig solver_of(const Common& c) {
    SolverConfig cfg;
    cfg.max_iters = c.max_iters;
    if (c.step == "fixed")
        cfg.step_rule = StepRule::fixed;
    else if (c.step == "sqrt_decay")
        cfg.step_rule = StepRule::sqrt_decay;
    else
        throw invalid_parameter("unknown step rule '" + c.step + "'");
    cfg.eta0 = c.eta0;
    cfg.momentum = !c.no_momentum;
    cfg.restart = !c.no_restart;
    cfg.tol_rel = c.tol;
    cfg.patience = c.patience;
    cfg.loss_weight = c.loss_weight;
    cfg.center_iterates = !c.no_center;
    cfg.seed = c.seed;
    return cfg;
}

LossKind loss_of(const Common& c, LossTag tag, const DistanceMatrix& d) {
    switch (tag) {
        case LossTag::breg_exp:
            return LossKind::with_sigma(tag, c.sigma);
        case LossTag::cca:
            return LossKind::cca(CcaWeight::reciprocal, c.eps > 0.0 ? c.eps : 1.0);
        case LossTag::nbr_indicator:
        case LossTag::nbr_quadratic:
        case LossTag::margin_hinge: {
            auto adj = std::make_shared<AdjacencyMatrix>(
                build_adjacency(d, rule_of(c), !c.no_symmetrize));
            return LossKind::with_adjacency(tag, std::move(adj));
        }
        default:
            return LossKind::simple(tag);
    }
}

ojson resolved_common(const Common& c) {
    ojson rule;
    if (c.eps > 0.0)
        rule = {{"rule", "eps"}, {"eps", c.eps}};
    else
        rule = {{"rule", "knn"}, {"k", c.k}};
    rule["symmetrize"] = !c.no_symmetrize;
    return {{"loss", c.loss},
            {"reg", c.reg},
            {"d", c.d},
            {"alpha", c.alpha},
            {"beta", c.beta},
            {"gamma", c.gamma},
            {"sigma", c.sigma},
            {"neighbors", rule},
            {"solver",
             {{"max_iters", c.max_iters},
              {"step", c.step},
              {"eta0", c.eta0},
              {"momentum", !c.no_momentum},
              {"restart", !c.no_restart},
              {"tol", c.tol},
              {"patience", c.patience},
              {"loss_weight", c.loss_weight},
              {"center", !c.no_center}}},
            {"seed", c.seed}};
}

int do_embed(const Common& c, const std::string& input, const std::string& kind_name,
             const std::string& out, std::string summary_path) {
    const MatrixKind kind = parse_kind(kind_name);
    if (kind != MatrixKind::data && kind != MatrixKind::edm)
        throw invalid_parameter("--kind must be data or edm");
    const Matrix raw = load_matrix(input, MatrixKind::data);
    const DistanceMatrix d = kind == MatrixKind::data
                                 ? edm_of_kernel(kernel_of_data(raw))
                                 : DistanceMatrix::validated(raw);

    const LossTag tag = parse_loss(c.loss);
    const LossKind loss = loss_of(c, tag, d);
    RegKind reg = RegKind::make(parse_reg(c.reg));
    reg.alpha = c.alpha;
    reg.beta = c.beta;
    reg.gamma = c.gamma;
    reg.d = c.d;

    const SolverState st = solve(d, loss, reg, solver_of(c));
    const Embedding emb = truncate_embed(st.best_kernel(), c.d);
    save_matrix(out, emb.coords);

    if (summary_path.empty()) summary_path = out + ".summary.json";
    ojson summary;
    summary["command"] = "embed";
    summary["input"] = input;
    summary["kind"] = kind_name;
    summary["out"] = out;
    // record catalog names, not whatever alias the user typed
    Common canon = c;
    canon.loss = loss_tag_name(tag);
    canon.reg = reg_tag_name(reg.tag);
    summary["config"] = resolved_common(canon);
    ojson res;
    res["objective"] = st.best_objective;
    res["iterations"] = st.iterations;
    res["stop"] = st.stop == StopReason::converged ? "converged" : "max_iters";
    res["elapsed_seconds"] = st.elapsed_seconds;
    res["discarded_mass"] = emb.discarded_mass;
    res["kept_eigenvalues"] = std::vector<double>(
        emb.kept_eigenvalues.data(), emb.kept_eigenvalues.data() + emb.kept_eigenvalues.size());
    summary["result"] = std::move(res);
    std::ofstream sf(summary_path);
    if (!sf) throw invalid_input("cannot open '" + summary_path + "' for writing");
    sf << summary.dump(2) << '\n';

    std::cout << "wrote " << out << " (" << emb.coords.rows() << " x " << emb.coords.cols()
              << "), objective " << st.best_objective << ", summary " << summary_path << "\n";
    return 0;
}

int do_validate(const std::string& input, const std::string& kind_name) {
    const MatrixKind kind = parse_kind(kind_name);
    const Matrix m = load_matrix(input, MatrixKind::data);
    const ValidationReport rep = validate(m, kind);
    for (const auto& item : rep.items) {
        std::printf("%-4s %-24s magnitude %.3e  tolerance %.3e%s\n", item.pass ? "ok" : "FAIL",
                    item.name.c_str(), item.magnitude, item.tolerance,
                    item.required ? "" : "  (informational)");
    }
    std::cout << rep.summary() << "\n";
    return rep.ok() ? 0 : 2;
}

int do_generate(const std::string& name, Index t, double noise, std::uint64_t seed,
                const std::string& out) {
    DatasetSpec spec;
    spec.name = dataset_name_parse(name);
    if (spec.name == DatasetName::file)
        throw invalid_parameter("generate needs --name swiss or sin3d");
    spec.t = t;
    spec.noise = noise;
    spec.seed = seed;
    save_matrix(out, generate(spec));
    std::cout << "wrote " << out << " (" << t << " points, " << name << ")\n";
    return 0;
}

int do_bench(const Common& c, const std::string& datasets_arg, const std::string& losses_arg,
             const std::string& regs_arg, Index t, double noise, const std::string& out,
             const std::string& csv, bool redact) {
    BenchParams params;
    params.d = c.d;
    params.alpha = c.alpha;
    params.beta = c.beta;
    params.gamma = c.gamma;
    params.sigma = c.sigma;
    params.neighbor_rule = rule_of(c);
    params.symmetrize_neighbors = !c.no_symmetrize;
    params.solver = solver_of(c);

    std::vector<DatasetSpec> datasets;
    for (const std::string& name : split_list(datasets_arg)) {
        DatasetSpec spec;
        if (name == "swiss" || name == "sin3d") {
            spec.name = dataset_name_parse(name);
            spec.t = t;
            spec.noise = noise;
            spec.seed = c.seed;
        } else {
            spec.name = DatasetName::file;
            spec.path = name;
        }
        datasets.push_back(std::move(spec));
    }
    std::vector<LossTag> losses;
    for (const std::string& name : split_list(losses_arg)) losses.push_back(parse_loss(name));
    std::vector<RegKind> regs;
    for (const std::string& name : split_list(regs_arg)) {
        RegKind r = RegKind::make(parse_reg(name));
        r.alpha = c.alpha;
        r.beta = c.beta;
        r.gamma = c.gamma;
        r.d = c.d;
        regs.push_back(r);
    }

    const BenchReport report = run_table(datasets, losses, regs, params);
    write_report_json(out, report, redact);
    if (!csv.empty()) write_report_csv(csv, report, redact);

    std::cout << "wrote " << out;
    if (!csv.empty()) std::cout << " and " << csv;
    std::cout << "\nmean relative loss by regularizer:\n";
    for (const auto& [reg, mean] : report.means)
        std::printf("  %-20s %.4f\n", reg.c_str(), mean);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"nonlinear dimensionality reduction via regularized kernel learning"};
    app.require_subcommand(1);

    Common ec, bc;
    bc.loss_weight = 10.0;  // evaluation default; embeddings use the plain objective

    auto* embed_cmd = app.add_subcommand("embed", "embed a data or distance CSV");
    std::string e_input, e_kind = "data", e_out, e_summary;
    embed_cmd->add_option("--input", e_input, "CSV to embed")->required();
    embed_cmd->add_option("--kind", e_kind, "input kind: data | edm");
    embed_cmd->add_option("--out", e_out, "embedding CSV path")->required();
    embed_cmd->add_option("--summary", e_summary, "run summary path (default <out>.summary.json)");
    add_common(embed_cmd, ec);

    auto* bench_cmd = app.add_subcommand("bench", "loss x regularizer evaluation sweep");
    std::string b_datasets = "swiss", b_losses = "rmvu,sne,expbreg",
                b_regs = "trace,neg_trace,partition,partition_smoothed,biconjugate,completed_square";
    Index b_t = 300;
    double b_noise = 0.0;
    std::string b_out = "bench_report.json", b_csv;
    bool b_redact = false;
    CLI::Option* b_datasets_opt =
        bench_cmd->add_option("--datasets", b_datasets, "comma list: swiss, sin3d, or CSV paths");
    CLI::Option* b_losses_opt = bench_cmd->add_option("--losses", b_losses, "comma list of losses");
    CLI::Option* b_regs_opt = bench_cmd->add_option("--regs", b_regs, "comma list of regularizers");
    CLI::Option* b_t_opt = bench_cmd->add_option("--t", b_t, "points per generated dataset");
    CLI::Option* b_noise_opt = bench_cmd->add_option("--noise", b_noise, "generator noise std");
    CLI::Option* b_out_opt = bench_cmd->add_option("--out", b_out, "JSON report path");
    CLI::Option* b_csv_opt = bench_cmd->add_option("--csv", b_csv, "CSV mirror path");
    bench_cmd->add_flag("--redact-runtime", b_redact,
                        "zero runtime fields for byte-reproducible reports");
    add_common(bench_cmd, bc);

    auto* validate_cmd = app.add_subcommand("validate", "check a matrix against a kind");
    std::string v_input, v_kind;
    validate_cmd->add_option("--input", v_input, "CSV to check")->required();
    validate_cmd->add_option("--kind", v_kind, "data | kernel | edm | adjacency")->required();

    auto* generate_cmd = app.add_subcommand("generate", "write a synthetic dataset CSV");
    std::string g_name = "swiss", g_out;
    Index g_t = 300;
    double g_noise = 0.0;
    std::uint64_t g_seed = 0;
    generate_cmd->add_option("--name", g_name, "swiss | sin3d");
    generate_cmd->add_option("--t", g_t, "number of points");
    generate_cmd->add_option("--noise", g_noise, "noise std");
    generate_cmd->add_option("--seed", g_seed, "RNG seed");
    generate_cmd->add_option("--out", g_out, "output CSV path")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("unfold");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (embed_cmd->parsed()) {
            if (!ec.config_path.empty()) {
                const json cfg = load_config(ec.config_path);
                apply_config(ec, cfg);
                if (embed_cmd->count("--input") == 0 && cfg.contains("input"))
                    e_input = cfg.at("input").get<std::string>();
                if (embed_cmd->count("--kind") == 0 && cfg.contains("kind"))
                    e_kind = cfg.at("kind").get<std::string>();
                if (embed_cmd->count("--out") == 0 && cfg.contains("out"))
                    e_out = cfg.at("out").get<std::string>();
                if (embed_cmd->count("--summary") == 0 && cfg.contains("summary"))
                    e_summary = cfg.at("summary").get<std::string>();
            }
            return do_embed(ec, e_input, e_kind, e_out, e_summary);
        }
        if (bench_cmd->parsed()) {
            if (!bc.config_path.empty()) {
                const json cfg = load_config(bc.config_path);
                apply_config(bc, cfg);
                if (b_datasets_opt->count() == 0)
                    b_datasets = config_list(cfg, "datasets", b_datasets);
                if (b_losses_opt->count() == 0) b_losses = config_list(cfg, "losses", b_losses);
                if (b_regs_opt->count() == 0) b_regs = config_list(cfg, "regs", b_regs);
                overlay(b_t_opt, cfg, "t", b_t);
                overlay(b_noise_opt, cfg, "noise", b_noise);
                overlay(b_out_opt, cfg, "out", b_out);
                overlay(b_csv_opt, cfg, "csv", b_csv);
                if (!b_redact && cfg.contains("redact-runtime"))
                    b_redact = cfg.at("redact-runtime").get<bool>();
            }
            return do_bench(bc, b_datasets, b_losses, b_regs, b_t, b_noise, b_out, b_csv,
                            b_redact);
        }
        if (validate_cmd->parsed()) return do_validate(v_input, v_kind);
        if (generate_cmd->parsed()) return do_generate(g_name, g_t, g_noise, g_seed, g_out);
    } catch (const diverged_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const numeric_failure& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace unfold
