#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "ppborrow/ingest.hpp"
#include "ppborrow/normal_model.hpp"
#include "ppborrow/quadrature.hpp"

namespace ppborrow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitNumericalFailure = 3;

/// Entry point shared by the executable and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Fit one model. CSV goes to config.output_path (or `out`); the summary block
/// goes to `out` when a file was written and to `err` otherwise.
int cmd_fit(const AnalysisConfig& config, std::ostream& out, std::ostream& err);

/// Closed-form limit curves. `kind` is "equal-estimates" (values are c) or
/// "precise-current" (values are d).
void cmd_limit(const std::string& kind, std::span<const double> values, const BetaParams& prior,
               const GridSpec& spec, std::ostream& csv);

/// Write the curves behind figure `which` (1, 2 or 3) into `outdir`; returns
/// the written paths.
std::vector<std::string> cmd_figures(int which, const std::string& outdir, const GridSpec& spec);

/// Print log risk ratio, risk ratio interval and arm summaries.
void cmd_ingest(std::span<const ingest::Study> studies, std::ostream& out);

/// Two-column CSV, 10 significant digits.
void write_curve_csv(std::ostream& os, const std::string& x_name, std::span<const double> xs,
                     std::span<const double> ys);
void write_grid_csv(std::ostream& os, const AlphaPosteriorGrid& grid);

[[nodiscard]] std::string format_number(double v);

}  // namespace ppborrow::cli
