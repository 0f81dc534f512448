#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ppborrow/binomial_model.hpp"
#include "ppborrow/ingest.hpp"
#include "ppborrow/linear_model.hpp"
#include "ppborrow/specfun.hpp"

namespace ppborrow::cli {
namespace {

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot write " + path);
  return os;
}

void write_alpha_summary(std::ostream& os, const AlphaPosteriorGrid& grid) {
  const auto s = grid_summaries(grid, 0.95);
  os << "alpha_mean=" << format_number(s.mean) << '\n'
     << "alpha_mode=" << format_number(s.mode) << '\n'
     << "alpha_median=" << format_number(s.median) << '\n'
     << "alpha_ci95=" << format_number(s.lower) << ',' << format_number(s.upper) << '\n';
}

void write_theta_summary(std::ostream& os, const normal::ThetaCurve& curve, const NormalSummary& pooled) {
  const double mass = trapezoid(curve.theta, curve.density);
  std::vector<double> weighted(curve.theta.size());
  for (std::size_t i = 0; i < weighted.size(); ++i) weighted[i] = curve.theta[i] * curve.density[i];
  os << "theta_mean=" << format_number(trapezoid(curve.theta, weighted) / mass) << '\n'
     << "theta_median=" << format_number(trapezoid_quantile(curve.theta, curve.density, 0.5)) << '\n'
     << "theta_ci95=" << format_number(trapezoid_quantile(curve.theta, curve.density, 0.025)) << ','
     << format_number(trapezoid_quantile(curve.theta, curve.density, 0.975)) << '\n'
     << "theta_pooled_mean=" << format_number(pooled.theta_hat()) << '\n'
     << "theta_pooled_sd=" << format_number(pooled.sigma()) << '\n';
}

void write_labelled_grids(std::ostream& os, const std::string& label, std::span<const double> values,
                          const std::vector<AlphaPosteriorGrid>& grids) {
  if (grids.size() == 1) {
    write_grid_csv(os, grids.front());
    return;
  }
  os << label << ",alpha,density\n";
  for (std::size_t g = 0; g < grids.size(); ++g) {
    const auto alphas = grids[g].alphas();
    const auto dens = grids[g].density();
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      os << format_number(values[g]) << ',' << format_number(alphas[i]) << ',' << format_number(dens[i]) << '\n';
    }
  }
}

std::string write_grid_file(const std::filesystem::path& dir, const std::string& name,
                            const AlphaPosteriorGrid& grid) {
  const auto path = (dir / name).string();
  auto os = open_output(path);
  write_grid_csv(os, grid);
  return path;
}

std::string write_theta_file(const std::filesystem::path& dir, const std::string& name,
                             const normal::ThetaCurve& curve) {
  const auto path = (dir / name).string();
  auto os = open_output(path);
  write_curve_csv(os, "theta", curve.theta, curve.density);
  return path;
}

// Registers string-valued options and remembers which were given.
class OptionSet {
 public:
  void add(CLI::App* app, const std::string& key, const std::string& help) {
    auto& slot = values_[key];
    options_.emplace_back(key, app->add_option("--" + key, slot, help));
  }

  [[nodiscard]] KeyValues given() const {
    KeyValues kv;
    for (const auto& [key, opt] : options_) {
      if (opt->count() > 0) kv[key] = values_.at(key);
    }
    return kv;
  }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::pair<std::string, CLI::Option*>> options_;
};

KeyValues merge_settings(const std::string& config_path, const KeyValues& flags) {
  KeyValues merged = config_path.empty() ? KeyValues{} : read_key_value_file(config_path);
  for (const auto& [k, v] : flags) merged[k] = v;
  return merged;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_curve_csv(std::ostream& os, const std::string& x_name, std::span<const double> xs,
                     std::span<const double> ys) {
  os << x_name << ",density\n";
  for (std::size_t i = 0; i < xs.size(); ++i) os << format_number(xs[i]) << ',' << format_number(ys[i]) << '\n';
}

void write_grid_csv(std::ostream& os, const AlphaPosteriorGrid& grid) {
  write_curve_csv(os, "alpha", grid.alphas(), grid.density());
}

int cmd_fit(const AnalysisConfig& config, std::ostream& out, std::ostream& err) {
  const GridSpec spec{config.grid_points, config.tol};
  std::ostringstream csv;
  std::ostringstream summary;
  switch (config.model) {
    case Model::normal: {
      const auto& cur = *config.current_normal;
      const auto& hist = *config.historical_normal;
      const auto grid = normal::alpha_posterior(cur, hist, config.prior, spec);
      write_grid_csv(csv, grid);
      summary << "model=normal\n";
      write_alpha_summary(summary, grid);
      const auto thetas = normal::default_theta_grid(cur, hist, config.grid_points);
      const auto curve = normal::theta_marginal_posterior(thetas, cur, hist, config.prior, config.tol);
      write_theta_summary(summary, curve, normal::complete_pooling_posterior(cur, hist));
      break;
    }
    case Model::binomial: {
      const auto grid = binomial::alpha_posterior_binomial(*config.current_binomial, *config.historical_binomial,
                                                           config.prior, spec);
      write_grid_csv(csv, grid);
      summary << "model=binomial\n";
      write_alpha_summary(summary, grid);
      break;
    }
    case Model::linear: {
      const auto cur = linear::ols_estimate(*config.current_linear);
      const auto hist = linear::ols_estimate(*config.historical_linear);
      if (cur.dim() != hist.dim()) throw DomainError("current and historical designs differ in column count");
      const double sigma = config.current_linear->sigma();
      const auto grid = linear::alpha_posterior_linear(cur, hist, sigma, config.prior, spec);
      write_grid_csv(csv, grid);
      summary << "model=linear\n";
      summary << "relative_precision_c=" << format_number(linear::relative_precision_c(cur, hist).value()) << '\n';
      write_alpha_summary(summary, grid);
      break;
    }
  }
  if (config.output_path.empty()) {
    out << csv.str();
    err << summary.str();
  } else {
    auto os = open_output(config.output_path);
    os << csv.str();
    out << summary.str();
  }
  return kExitOk;
}

void cmd_limit(const std::string& kind, std::span<const double> values, const BetaParams& prior,
               const GridSpec& spec, std::ostream& csv) {
  if (values.empty()) throw DomainError("no parameter values given");
  std::vector<AlphaPosteriorGrid> grids;
  if (kind == "equal-estimates") {
    for (double c : values) grids.push_back(normal::equal_estimates_grid(RelativeVariance(c), prior, spec));
    write_labelled_grids(csv, "c", values, grids);
  } else if (kind == "precise-current") {
    for (double d : values) {
      if (!(d >= 0.0)) throw DomainError("d must be nonnegative");
      grids.push_back(normal::precise_current_grid(d, prior, spec));
    }
    write_labelled_grids(csv, "d", values, grids);
  } else {
    throw DomainError("unknown limit kind '" + kind + "'");
  }
}

std::vector<std::string> cmd_figures(int which, const std::string& outdir, const GridSpec& spec) {
  if (which < 1 || which > 3) throw DomainError("unknown figure " + std::to_string(which) + " (expected 1, 2 or 3)");
  const std::filesystem::path dir(outdir);
  std::filesystem::create_directories(dir);
  const BetaParams prior(1.0, 1.0);
  std::vector<std::string> written;

  if (which == 1) {
    const auto cur = ingest::current_rounded_summary();
    const auto hist = ingest::historical_rounded_summary();
    written.push_back(write_grid_file(dir, "fig1_alpha_observed.csv", normal::alpha_posterior(cur, hist, prior, spec)));
    written.push_back(
        write_grid_file(dir, "fig1_alpha_best_case.csv", normal::beta_grid(normal::alpha_limit_beta(prior), spec)));
    const auto thetas = normal::default_theta_grid(cur, hist, spec.points);
    written.push_back(write_theta_file(dir, "fig1_theta_observed.csv",
                                       normal::theta_marginal_posterior(thetas, cur, hist, prior, spec.tol)));
    written.push_back(write_theta_file(dir, "fig1_theta_best_case.csv",
                                       normal::theta_best_case_posterior(thetas, cur, hist, prior, spec.tol)));
    written.push_back(write_theta_file(dir, "fig1_theta_pooled.csv",
                                       normal::normal_curve(thetas, normal::complete_pooling_posterior(cur, hist))));
  } else if (which == 2) {
    for (int d = 0; d <= 3; ++d) {
      written.push_back(write_grid_file(dir, "fig2_d" + std::to_string(d) + ".csv",
                                        normal::precise_current_grid(d, prior, spec)));
    }
  } else {
    const auto hist = ingest::arm_summary(ingest::louie2011().counts, ingest::Arm::A);
    const auto cur = ingest::arm_summary(ingest::cornely2012().counts, ingest::Arm::A);
    written.push_back(
        write_grid_file(dir, "fig3_observed.csv", binomial::alpha_posterior_binomial(cur, hist, prior, spec)));
    for (int c : {1, 10, 100}) {
      const auto mirrored = binomial::mirrored_data(hist, c);
      written.push_back(write_grid_file(dir, "fig3_c" + std::to_string(c) + ".csv",
                                        binomial::alpha_posterior_binomial(mirrored, hist, prior, spec)));
    }
    written.push_back(
        write_grid_file(dir, "fig3_c_inf.csv", normal::beta_grid(normal::alpha_limit_beta(prior), spec)));
  }
  return written;
}

void cmd_ingest(std::span<const ingest::Study> studies, std::ostream& out) {
  for (const auto& study : studies) {
    const auto summary = ingest::log_risk_ratio_summary(study.counts);
    const auto ci = ingest::risk_ratio_ci(summary, 0.95);
    const auto a = ingest::arm_summary(study.counts, ingest::Arm::A);
    const auto b = ingest::arm_summary(study.counts, ingest::Arm::B);
    out << "study=" << study.name << '\n'
        << "logRR=" << format_fixed(summary.theta_hat(), 4) << " se=" << format_fixed(summary.sigma(), 4)
        << " RR=" << format_fixed(ci.rr, 2) << " (" << format_fixed(ci.lower, 2) << ", " << format_fixed(ci.upper, 2)
        << ")\n"
        << "armA x=" << a.x() << " n=" << a.n() << " risk=" << format_fixed(a.proportion(), 4) << '\n'
        << "armB x=" << b.x() << " n=" << b.n() << " risk=" << format_fixed(b.proportion(), 4) << '\n';
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normalized power prior posteriors for the power parameter alpha", "ppborrow"};
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "Marginal posterior of alpha for one model");
  fit->require_subcommand(1);
  std::map<std::string, OptionSet> fit_options;
  std::map<std::string, std::string> config_paths;
  std::map<std::string, CLI::App*> fit_models;
  for (const char* name : {"normal", "binomial", "linear"}) {
    auto* sub = fit->add_subcommand(name, std::string("Fit the ") + name + " model");
    auto& opts = fit_options[name];
    sub->add_option("--config", config_paths[name], "key=value settings file (flags override it)");
    opts.add(sub, "prior", "Beta prior on alpha as p,q (default 1,1)");
    opts.add(sub, "grid-points", "Number of alpha grid points (default 512)");
    opts.add(sub, "tol", "Quadrature tolerance (default 1e-10, or PP_BORROW_TOL)");
    opts.add(sub, "output", "Write the CSV here instead of standard output");
    fit_models[name] = sub;
  }
  for (const char* key : {"theta-hat", "sigma", "theta0-hat", "sigma0"}) fit_options["normal"].add(fit_models["normal"], key, "");
  for (const char* key : {"x", "n", "x0", "n0"}) fit_options["binomial"].add(fit_models["binomial"], key, "");
  fit_options["linear"].add(fit_models["linear"], "design", "Current data CSV: y,x1,...,xk with a header row");
  fit_options["linear"].add(fit_models["linear"], "design0", "Historical data CSV, same layout");
  fit_options["linear"].add(fit_models["linear"], "sigma", "Known error standard deviation");

  // limit
  auto* limit = app.add_subcommand("limit", "Closed-form limiting posteriors of alpha");
  limit->require_subcommand(1);
  std::string limit_prior = "1,1";
  std::string limit_values;
  std::string limit_output;
  std::size_t limit_points = 512;
  auto* equal = limit->add_subcommand("equal-estimates", "Equal estimates, relative variance c");
  equal->add_option("--c", limit_values, "Relative variance(s), comma separated")->required();
  auto* precise = limit->add_subcommand("precise-current", "Current standard error -> 0, standardized difference d");
  precise->add_option("--d", limit_values, "Standardized difference(s), comma separated")->required();
  for (auto* sub : {equal, precise}) {
    sub->add_option("--prior", limit_prior, "Beta prior on alpha as p,q");
    sub->add_option("--output", limit_output, "Write the CSV here instead of standard output");
    sub->add_option("--grid-points", limit_points, "Number of alpha grid points");
  }

  // figures
  auto* figures = app.add_subcommand("figures", "Write the curves behind figure 1, 2 or 3");
  int figure_id = 0;
  std::string outdir = ".";
  std::size_t figure_points = 512;
  figures->add_option("which", figure_id, "Figure number")->required();
  figures->add_option("--outdir", outdir, "Directory for the CSV files");
  figures->add_option("--grid-points", figure_points, "Number of grid points per curve");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Summaries of two-arm trial counts");
  std::vector<std::string> presets;
  std::vector<std::string> rows;
  std::string csv_path;
  std::optional<std::int64_t> events_a, n_a, events_b, n_b;
  std::string study_name = "study";
  ingest_cmd->add_option("--preset", presets, "Built-in trial: cornely or louie");
  ingest_cmd->add_option("--row", rows, "study,events_a,n_a,events_b,n_b");
  ingest_cmd->add_option("--csv", csv_path, "File of study,events_a,n_a,events_b,n_b rows");
  ingest_cmd->add_option("--events-a", events_a);
  ingest_cmd->add_option("--n-a", n_a);
  ingest_cmd->add_option("--events-b", events_b);
  ingest_cmd->add_option("--n-b", n_b);
  ingest_cmd->add_option("--name", study_name);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }

  try {
    if (fit->parsed()) {
      for (const auto& [name, sub] : fit_models) {
        if (!sub->parsed()) continue;
        const Model model = name == "normal" ? Model::normal : name == "binomial" ? Model::binomial : Model::linear;
        const auto settings = merge_settings(config_paths[name], fit_options[name].given());
        return cmd_fit(make_analysis_config(model, settings, default_tolerance()), out, err);
      }
    }
    if (limit->parsed()) {
      const GridSpec spec{limit_points, default_tolerance()};
      const auto values = parse_real_list(limit_values);
      const std::string kind = equal->parsed() ? "equal-estimates" : "precise-current";
      if (limit_output.empty()) {
        cmd_limit(kind, values, parse_prior(limit_prior), spec, out);
      } else {
        auto os = open_output(limit_output);
        cmd_limit(kind, values, parse_prior(limit_prior), spec, os);
      }
      return kExitOk;
    }
    if (figures->parsed()) {
      for (const auto& path : cmd_figures(figure_id, outdir, GridSpec{figure_points, default_tolerance()})) {
        out << path << '\n';
      }
      return kExitOk;
    }
    if (ingest_cmd->parsed()) {
      std::vector<ingest::Study> studies;
      for (const auto& p : presets) studies.push_back(ingest::preset(p));
      for (const auto& r : rows) studies.push_back(ingest::parse_counts_row(r));
      if (!csv_path.empty()) {
        std::ifstream in(csv_path);
        if (!in) throw DomainError("cannot read " + csv_path);
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
          if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
          if (first && line.rfind("study", 0) == 0) {
            first = false;
            continue;
          }
          first = false;
          studies.push_back(ingest::parse_counts_row(line));
        }
      }
      if (events_a || n_a || events_b || n_b) {
        if (!(events_a && n_a && events_b && n_b)) {
          throw DomainError("--events-a, --n-a, --events-b and --n-b must be given together");
        }
        studies.push_back({study_name, ingest::TwoArmCounts(*events_a, *n_a, *events_b, *n_b)});
      }
      if (studies.empty()) throw DomainError("no counts given (use --preset, --row, --csv or the count flags)");
      cmd_ingest(studies, out);
      return kExitOk;
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  }
  return kExitInvalidInput;
}

}  // namespace ppborrow::cli
