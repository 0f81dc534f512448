#include "cli/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ppborrow/quadrature.hpp"

namespace ppborrow::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

const std::string& require(const KeyValues& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw DomainError("missing required option --" + key);
  return it->second;
}

std::int64_t parse_count(std::string_view text, std::string_view field) {
  const double v = parse_real(text, field);
  if (v != std::floor(v) || v < 0) throw DomainError(std::string(field) + " must be a nonnegative integer");
  return static_cast<std::int64_t>(v);
}

}  // namespace

KeyValues parse_key_value_text(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DomainError("config line " + std::to_string(line_no) + " is not key=value");
    }
    kv[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
  }
  return kv;
}

KeyValues read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_key_value_text(buffer.str());
}

double parse_real(std::string_view text, std::string_view field) {
  const std::string s(trim(text));
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw DomainError(std::string(field) + " is not a number: '" + s + "'");
  }
  return v;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (auto field : split(text, ',')) out.push_back(parse_real(field, "list value"));
  return out;
}

BetaParams parse_prior(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw DomainError("prior must be given as p,q");
  return {parse_real(parts[0], "prior p"), parse_real(parts[1], "prior q")};
}

double default_tolerance() {
  if (const char* env = std::getenv("PP_BORROW_TOL"); env != nullptr && *env != '\0') {
    const double tol = parse_real(env, "PP_BORROW_TOL");
    if (!(tol > 0.0)) throw DomainError("PP_BORROW_TOL must be positive");
    return tol;
  }
  return kDefaultTolerance;
}

AnalysisConfig make_analysis_config(Model model, const KeyValues& settings, double default_tol) {
  AnalysisConfig config;
  config.model = model;
  config.tol = default_tol;
  if (const auto it = settings.find("prior"); it != settings.end()) config.prior = parse_prior(it->second);
  if (const auto it = settings.find("grid-points"); it != settings.end()) {
    const double points = parse_real(it->second, "grid-points");
    if (!(points >= 16) || points != std::floor(points)) throw DomainError("grid-points must be an integer >= 16");
    config.grid_points = static_cast<std::size_t>(points);
  }
  if (const auto it = settings.find("tol"); it != settings.end()) {
    config.tol = parse_real(it->second, "tol");
    if (!(config.tol > 0.0)) throw DomainError("tol must be positive");
  }
  if (const auto it = settings.find("output"); it != settings.end()) config.output_path = it->second;

  switch (model) {
    case Model::normal:
      config.current_normal.emplace(parse_real(require(settings, "theta-hat"), "theta-hat"),
                                    parse_real(require(settings, "sigma"), "sigma"));
      try {
        config.historical_normal.emplace(parse_real(require(settings, "theta0-hat"), "theta0-hat"),
                                         parse_real(require(settings, "sigma0"), "sigma0"));
      } catch (const DomainError& e) {
        const std::string msg = e.what();
        if (msg == "sigma must be positive") throw DomainError("sigma0 must be positive");
        throw;
      }
      break;
    case Model::binomial:
      config.current_binomial.emplace(parse_count(require(settings, "x"), "x"), parse_count(require(settings, "n"), "n"));
      config.historical_binomial.emplace(parse_count(require(settings, "x0"), "x0"),
                                         parse_count(require(settings, "n0"), "n0"));
      break;
    case Model::linear: {
      const double sigma = parse_real(require(settings, "sigma"), "sigma");
      if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
      config.current_linear.emplace(read_design_csv(require(settings, "design"), sigma));
      config.historical_linear.emplace(read_design_csv(require(settings, "design0"), sigma));
      break;
    }
  }
  return config;
}

linear::LinearData<double> read_design_csv(const std::string& path, double sigma) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read design file " + path);
  std::string line;
  if (!std::getline(in, line)) throw DomainError("design file " + path + " is empty");
  const std::size_t columns = split(line, ',').size();
  if (columns < 2) throw DomainError("design file needs a response column and at least one covariate");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != columns) {
      throw DomainError("design file " + path + " row " + std::to_string(rows.size() + 2) + " has the wrong width");
    }
    std::vector<double> row;
    for (auto f : fields) row.push_back(parse_real(f, "design entry"));
    rows.push_back(std::move(row));
  }
  linear::Matrix<double> X(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(columns - 1));
  linear::Vector<double> y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    y(r) = rows[i][0];
    for (std::size_t j = 1; j < columns; ++j) X(r, static_cast<Eigen::Index>(j - 1)) = rows[i][j];
  }
  return {std::move(X), std::move(y), sigma};
}

}  // namespace ppborrow::cli
