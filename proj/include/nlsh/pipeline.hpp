#pragma once

#include "nlsh/config.hpp"
#include "nlsh/diagnostics.hpp"
#include "nlsh/lyapunov.hpp"
#include "nlsh/run_io.hpp"
#include "nlsh/theory.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlsh {

// Subcommand pipelines shared by the CLI and the tests. A null RunDirectory
// runs the computation without writing anything.

/// Lower kernel bound in the decay inequality: inf G for the nonlocal model.
/// The local model uses 1/|D| (from |u|^4 <= |D| * integral of u^4), with |D|
/// the total quadrature weight of the grid.
double effective_b(const RunConfig& config);

struct BoundsOutcome {
    std::vector<BoundReport> reports;
    bool any_violated() const;
};

/// Lemma 1 envelope, absorbing radius and decay (mu <= 0), the H2 window test
/// and, given snapshots, the dissipation inequality, as toggled in the config.
BoundsOutcome evaluate_bounds(const RunConfig& config, std::span<const SeriesSample> series,
                              std::span<const TimedField> snapshots = {});

std::string bounds_key_value(const BoundsOutcome& outcome);
nlohmann::json bounds_json(const BoundsOutcome& outcome);

/// t,l2,grad_l2,lap_l2 with 17 significant digits.
std::string series_csv(std::span<const SeriesSample> series);
std::vector<SeriesSample> parse_series_csv(std::string_view text);

struct SimulateResult {
    std::vector<SeriesSample> series;
    Field final_state;
    double final_time = 0.0;
    BoundsOutcome bounds;
    std::optional<std::string> aborted;  ///< blow-up message
};

/// Writes series.csv, snapshots/NNNN.sh2d, final.sh2d, bounds.txt,
/// bounds.json and (nonlocal, mu > 0) theory.json.
SimulateResult run_simulate(const RunConfig& config, RunDirectory* dir);

struct LyapunovResult {
    LyapunovReport report;
    int restarts = 0;
};

/// Transient of analysis.lyapunov_transient, then analysis.lyapunov_time of
/// tangent integration with m = analysis.lyapunov_m. Writes lyapunov.csv
/// (t,lambda_1..lambda_m,trace), lyapunov.json, lyapunov.txt, final.sh2d.
LyapunovResult run_lyapunov(const RunConfig& config, RunDirectory* dir);

struct TheoryRow {
    double radius = 0.0;
    double eps_opt = 0.0;
    double bound_nonlocal = 0.0;
    double bound_local = 0.0;
    double gap = 0.0;
};
TheoryRow theory_row(const theory::Inputs& in);
std::string theory_table(const theory::Inputs& in, const TheoryRow& row);
nlohmann::json to_json(const theory::Inputs& in, const TheoryRow& row);

}  // namespace nlsh
