#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppborrow/linear_model.hpp"
#include "ppborrow/types.hpp"

namespace ppborrow::cli {

/// Flat key=value settings; later sources override earlier ones.
using KeyValues = std::map<std::string, std::string, std::less<>>;

/// Parse `key=value` lines. Blank lines and lines starting with '#' are skipped.
[[nodiscard]] KeyValues parse_key_value_text(std::string_view text);
[[nodiscard]] KeyValues read_key_value_file(const std::string& path);

enum class Model { normal, binomial, linear };

struct AnalysisConfig {
  Model model = Model::normal;
  BetaParams prior{1.0, 1.0};
  std::optional<NormalSummary> current_normal;
  std::optional<NormalSummary> historical_normal;
  std::optional<BinomialSummary> current_binomial;
  std::optional<BinomialSummary> historical_binomial;
  std::optional<linear::LinearData<double>> current_linear;
  std::optional<linear::LinearData<double>> historical_linear;
  std::size_t grid_points = 512;
  double tol = 1e-10;
  std::string output_path;  ///< empty: standard output
};

/// Build and validate a config from merged settings. Throws DomainError with a
/// message naming the offending field.
[[nodiscard]] AnalysisConfig make_analysis_config(Model model, const KeyValues& settings, double default_tol);

/// "p,q" -> BetaParams.
[[nodiscard]] BetaParams parse_prior(std::string_view text);
/// Comma-separated reals.
[[nodiscard]] std::vector<double> parse_real_list(std::string_view text);
[[nodiscard]] double parse_real(std::string_view text, std::string_view field);

/// Default tolerance, overridden by the PP_BORROW_TOL environment variable.
[[nodiscard]] double default_tolerance();

/// CSV with a header row; the first column is the response, the rest are
/// covariates.
[[nodiscard]] linear::LinearData<double> read_design_csv(const std::string& path, double sigma);

}  // namespace ppborrow::cli
