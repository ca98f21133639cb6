#pragma once

#include "unfold/datasets.hpp"
#include "unfold/embed.hpp"
#include "unfold/neighbors.hpp"
#include "unfold/solver.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

// Evaluation sweep: for each dataset x loss row, solve under every
// regularizer, truncate to d dimensions, and report the reconstruction loss
// L(D(X X'), D_target) relative to the trace-maximizing reference column.

namespace unfold {

struct BenchParams {
    Index d = 2;
    double alpha = 1.0;
    double beta = 0.1;
    double gamma = 1e-3;
    double sigma = 1.0;  // scale for the exponential-family losses
    double eps = 1.0;    // cca indicator band, if used
    NeighborRule neighbor_rule = NeighborRule::knn(6);
    bool symmetrize_neighbors = true;
    SolverConfig solver;  // loss_weight defaults to 10 here, not 1

    BenchParams() { solver.loss_weight = 10.0; }
};

struct BenchCell {
    std::string dataset;
    std::string loss;
    std::string reg;
    double raw_loss = std::numeric_limits<double>::quiet_NaN();
    double relative_loss = std::numeric_limits<double>::quiet_NaN();
    // composite objective re-measured with the smoothed partition penalty, so
    // the relaxation columns are comparable; absent for the other columns
    std::optional<double> objective_smoothed;
    double runtime_seconds = 0.0;
    int iterations = 0;
    std::string status;  // converged | max_iters | diverged
};

struct BenchReport {
    nlohmann::ordered_json meta;
    std::vector<BenchCell> cells;
    // per-regularizer mean of the finite relative losses, in column order
    std::vector<std::pair<std::string, double>> means;
};

// Solve one cell end to end. relative_loss is filled by run_table; a lone
// cell reports NaN there.
BenchCell run_cell(const DatasetSpec& dataset, LossTag loss, const RegKind& reg,
                   const BenchParams& params);

// Full sweep. regs must include neg_trace, the normalization reference.
// Cells run in parallel (UNFOLD_THREADS caps the workers); output order and
// content do not depend on scheduling.
BenchReport run_table(const std::vector<DatasetSpec>& datasets, const std::vector<LossTag>& losses,
                      const std::vector<RegKind>& regs, const BenchParams& params);

// Wall-clock runtimes are the only non-reproducible fields; redact_runtime
// zeroes them so two runs of the same config serialize byte-identically.
nlohmann::ordered_json report_json(const BenchReport& report, bool redact_runtime = false);
void write_report_json(const std::string& path, const BenchReport& report,
                       bool redact_runtime = false);
void write_report_csv(const std::string& path, const BenchReport& report,
                      bool redact_runtime = false);

nlohmann::ordered_json bench_params_json(const BenchParams& p);

}  // namespace unfold
