#include "unfold/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <thread>

namespace unfold {

namespace {

LossKind make_loss(LossTag tag, const BenchParams& p, const DistanceMatrix& d) {
    LossKind kind;
    switch (tag) {
        case LossTag::breg_exp:
            kind = LossKind::with_sigma(tag, p.sigma);
            break;
        case LossTag::cca:
            kind = LossKind::cca(CcaWeight::reciprocal, p.eps);
            break;
        case LossTag::nbr_indicator:
        case LossTag::nbr_quadratic:
        case LossTag::margin_hinge: {
            auto adj = std::make_shared<AdjacencyMatrix>(
                build_adjacency(d, p.neighbor_rule, p.symmetrize_neighbors));
            kind = LossKind::with_adjacency(tag, std::move(adj));
            break;
        }
        default:
            kind = LossKind::simple(tag);
    }
    return kind;
}

int worker_count(std::size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("UNFOLD_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) n = static_cast<unsigned>(v);
    }
    return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

const char* stop_name(StopReason r) {
    switch (r) {
        case StopReason::converged: return "converged";
        case StopReason::max_iters: return "max_iters";
        case StopReason::diverged: return "diverged";
    }
    return "?";
}

nlohmann::ordered_json reg_json(const RegKind& r) {
    return {{"tag", reg_tag_name(r.tag)},
            {"alpha", r.alpha},
            {"beta", r.beta},
            {"gamma", r.gamma},
            {"d", r.d}};
}

void csv_number(std::ofstream& out, double v) {
    if (std::isnan(v)) {
        out << "nan";
        return;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

}  // namespace

BenchCell run_cell(const DatasetSpec& dataset, LossTag loss, const RegKind& reg,
                   const BenchParams& params) {
    const auto t0 = std::chrono::steady_clock::now();

    const Matrix x = generate(dataset);
    const DistanceMatrix d = edm_of_kernel(kernel_of_data(x));
    const LossKind kind = make_loss(loss, params, d);
    if (!kind.supports_subgradient())
        throw invalid_parameter("nbr_indicator cannot be benchmarked; use nbr_quadratic");

    RegKind r = reg;
    r.d = params.d;

    BenchCell cell;
    cell.dataset = dataset_name_str(dataset.name);
    cell.loss = loss_tag_name(loss);
    cell.reg = reg_tag_name(r.tag);

    try {
        const SolverState st = solve(d, kind, r, params.solver);
        if (!st.feasible_ok) throw numeric_failure("solver produced an infeasible iterate");
        if (!st.best_monotone_ok) throw numeric_failure("best objective regressed during solve");
        const Embedding emb = truncate_embed(st.best_kernel(), params.d);
        const DistanceMatrix dhat = edm_of_kernel(kernel_of_data(emb.coords));
        cell.raw_loss = loss_value(kind, dhat, d);
        cell.iterations = st.iterations;
        cell.status = stop_name(st.stop);
        if (r.tag == RegTag::partition_smoothed || r.tag == RegTag::biconjugate ||
            r.tag == RegTag::completed_square) {
            RegKind smoothed = r;
            smoothed.tag = RegTag::partition_smoothed;
            cell.objective_smoothed = objective_value(st.best_kernel(), kind, d, smoothed,
                                                      params.solver.loss_weight);
        }
    } catch (const diverged_error& e) {
        if (!e.state.feasible_ok) throw numeric_failure("solver produced an infeasible iterate");
        if (!e.state.best_monotone_ok) throw numeric_failure("best objective regressed during solve");
        cell.iterations = e.state.iterations;
        cell.status = "diverged";
        // score the best iterate reached before the blow-up so reference
        // columns stay comparable; the status field records the outcome
        if (e.state.best_k.size() > 0 && std::isfinite(e.state.best_objective)) {
            const Embedding emb = truncate_embed(e.state.best_kernel(), params.d);
            const DistanceMatrix dhat = edm_of_kernel(kernel_of_data(emb.coords));
            const double raw = loss_value(kind, dhat, d);
            if (std::isfinite(raw)) cell.raw_loss = raw;
        }
    }
    cell.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return cell;
}

BenchReport run_table(const std::vector<DatasetSpec>& datasets, const std::vector<LossTag>& losses,
                      const std::vector<RegKind>& regs, const BenchParams& params) {
    if (datasets.empty() || losses.empty() || regs.empty())
        throw invalid_parameter("bench needs at least one dataset, loss and regularizer");
    const auto ref_it = std::find_if(regs.begin(), regs.end(),
                                     [](const RegKind& r) { return r.tag == RegTag::neg_trace; });
    if (ref_it == regs.end())
        throw invalid_parameter("bench requires the neg_trace reference regularizer");
    const std::size_t ref_col = static_cast<std::size_t>(ref_it - regs.begin());

    struct Job {
        std::size_t di, li, ri;
    };
    std::vector<Job> jobs;
    for (std::size_t di = 0; di < datasets.size(); ++di)
        for (std::size_t li = 0; li < losses.size(); ++li)
            for (std::size_t ri = 0; ri < regs.size(); ++ri) jobs.push_back({di, li, ri});

    std::vector<BenchCell> cells(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            try {
                cells[j] = run_cell(datasets[jobs[j].di], losses[jobs[j].li], regs[jobs[j].ri],
                                    params);
            } catch (...) {
                errors[j] = std::current_exception();
            }
        }
    };
    const int nworkers = worker_count(jobs.size());
    if (nworkers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nworkers));
        for (int i = 0; i < nworkers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    // normalize each (dataset, loss) row by its reference column
    const std::size_t ncols = regs.size();
    for (std::size_t row = 0; row < jobs.size() / ncols; ++row) {
        BenchCell& ref = cells[row * ncols + ref_col];
        const bool ref_ok = std::isfinite(ref.raw_loss);
        if (ref_ok) ref.relative_loss = 1.0;
        for (std::size_t c = 0; c < ncols; ++c) {
            if (c == ref_col) continue;
            BenchCell& cell = cells[row * ncols + c];
            if (ref_ok && std::isfinite(cell.raw_loss))
                cell.relative_loss = cell.raw_loss / ref.raw_loss;
        }
    }

    BenchReport report;
    report.cells = std::move(cells);
    for (std::size_t c = 0; c < ncols; ++c) {
        double sum = 0.0;
        int n = 0;
        for (std::size_t row = 0; row < jobs.size() / ncols; ++row) {
            const double rel = report.cells[row * ncols + c].relative_loss;
            if (std::isfinite(rel)) {
                sum += rel;
                ++n;
            }
        }
        report.means.emplace_back(reg_tag_name(regs[c].tag),
                                  n ? sum / n : std::numeric_limits<double>::quiet_NaN());
    }

    nlohmann::ordered_json meta;
    meta["params"] = bench_params_json(params);
    meta["datasets"] = nlohmann::ordered_json::array();
    for (const auto& ds : datasets) {
        nlohmann::json j;
        to_json(j, ds);
        meta["datasets"].push_back(nlohmann::ordered_json(j));
    }
    meta["losses"] = nlohmann::ordered_json::array();
    for (LossTag l : losses) meta["losses"].push_back(loss_tag_name(l));
    meta["regs"] = nlohmann::ordered_json::array();
    for (const auto& r : regs) meta["regs"].push_back(reg_json(r));
    report.meta = std::move(meta);
    return report;
}

nlohmann::ordered_json bench_params_json(const BenchParams& p) {
    nlohmann::ordered_json rule;
    if (p.neighbor_rule.kind == NeighborRule::Kind::knn)
        rule = {{"rule", "knn"}, {"k", p.neighbor_rule.k}};
    else
        rule = {{"rule", "eps"}, {"eps", p.neighbor_rule.radius}};
    rule["symmetrize"] = p.symmetrize_neighbors;
    return {{"d", p.d},
            {"alpha", p.alpha},
            {"beta", p.beta},
            {"gamma", p.gamma},
            {"sigma", p.sigma},
            {"eps", p.eps},
            {"neighbors", rule},
            {"solver",
             {{"max_iters", p.solver.max_iters},
              {"step_rule", p.solver.step_rule == StepRule::fixed ? "fixed" : "sqrt_decay"},
              {"eta0", p.solver.eta0},
              {"momentum", p.solver.momentum},
              {"restart", p.solver.restart},
              {"tol_rel", p.solver.tol_rel},
              {"patience", p.solver.patience},
              {"loss_weight", p.solver.loss_weight},
              {"center_iterates", p.solver.center_iterates},
              {"seed", p.solver.seed}}}};
}

nlohmann::ordered_json report_json(const BenchReport& report, bool redact_runtime) {
    nlohmann::ordered_json j;
    j["meta"] = report.meta;
    j["cells"] = nlohmann::ordered_json::array();
    for (const auto& c : report.cells) {
        nlohmann::ordered_json cj;
        cj["dataset"] = c.dataset;
        cj["loss"] = c.loss;
        cj["reg"] = c.reg;
        cj["raw_loss"] = c.raw_loss;
        cj["relative_loss"] = c.relative_loss;
        if (c.objective_smoothed) cj["objective_smoothed"] = *c.objective_smoothed;
        cj["runtime_seconds"] = redact_runtime ? 0.0 : c.runtime_seconds;
        cj["iterations"] = c.iterations;
        cj["status"] = c.status;
        j["cells"].push_back(std::move(cj));
    }
    j["means"] = nlohmann::ordered_json::array();
    for (const auto& [reg, mean] : report.means)
        j["means"].push_back({{"reg", reg}, {"mean_relative_loss", mean}});
    return j;
}

void write_report_json(const std::string& path, const BenchReport& report, bool redact_runtime) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot open '" + path + "' for writing");
    out << report_json(report, redact_runtime).dump(2) << '\n';
    if (!out) throw invalid_input("write failure on '" + path + "'");
}

void write_report_csv(const std::string& path, const BenchReport& report, bool redact_runtime) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot open '" + path + "' for writing");
    out << "dataset,loss,reg,raw_loss,relative_loss,objective_smoothed,runtime_seconds,iterations,status\n";
    for (const auto& c : report.cells) {
        out << c.dataset << ',' << c.loss << ',' << c.reg << ',';
        csv_number(out, c.raw_loss);
        out << ',';
        csv_number(out, c.relative_loss);
        out << ',';
        if (c.objective_smoothed) csv_number(out, *c.objective_smoothed);
        out << ',';
        csv_number(out, redact_runtime ? 0.0 : c.runtime_seconds);
        out << ',' << c.iterations << ',' << c.status << '\n';
    }
    if (!out) throw invalid_input("write failure on '" + path + "'");
}

}  // namespace unfold
