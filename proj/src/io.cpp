#include "bayup/io.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bayup::io {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      throw std::invalid_argument("unknown key \"" + key + "\" in " + where);
}

const json& require_key(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key))
    throw std::invalid_argument("missing key \"" + key + "\" in " + where);
  return obj.at(key);
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string coverage_csv(const CoverageReport& report) {
  std::ostringstream out;
  out << "percentile,proportion\n";
  for (int p = 1; p <= 99; ++p)
    out << p << ',' << format_double(report.proportions[p - 1]) << '\n';
  out << "# tail_below_5=" << format_double(report.tail_below_5) << '\n';
  out << "# tail_above_95=" << format_double(report.tail_above_95) << '\n';
  out << "# mad=" << format_double(report.mean_abs_deviation) << '\n';
  out << "# seed=" << report.seed << '\n';
  out << "# num_trials=" << report.num_trials << '\n';
  if (!report.label.empty()) out << "# label=" << report.label << '\n';
  return out.str();
}

CoverageReport parse_coverage_csv(const std::string& text) {
  CoverageReport report;
  report.proportions.assign(99, 0.0);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "percentile,proportion")
    throw std::invalid_argument("coverage CSV: bad header");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "tail_below_5") report.tail_below_5 = std::stod(value);
      else if (key == "tail_above_95") report.tail_above_95 = std::stod(value);
      else if (key == "mad") report.mean_abs_deviation = std::stod(value);
      else if (key == "seed") report.seed = std::stoull(value);
      else if (key == "num_trials") report.num_trials = std::stoll(value);
      else if (key == "label") report.label = value;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("coverage CSV: bad row");
    const int p = std::stoi(line.substr(0, comma));
    if (p < 1 || p > 99) throw std::invalid_argument("coverage CSV: percentile out of range");
    double v;
    const std::string cell = line.substr(comma + 1);
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{}) throw std::invalid_argument("coverage CSV: bad proportion");
    report.proportions[p - 1] = v;
    ++rows;
  }
  if (rows != 99) throw std::invalid_argument("coverage CSV: expected 99 data rows");
  return report;
}

std::string fisher_table_csv(const Model& model, const ParameterGrid& grid) {
  std::ostringstream out;
  out << "theta,h_analytic,h_oracle,rel_err\n";
  for (int i = 0; i < grid.num_points; ++i) {
    const double theta = grid.point(i);
    const double analytic = analytic_fisher_at(model, theta);
    const double oracle = numeric_fisher_oracle(model, theta);
    const double rel =
        std::abs(analytic - oracle) / std::max(std::abs(analytic), 1e-300);
    out << format_double(theta) << ',' << format_double(analytic) << ','
        << format_double(oracle) << ',' << format_double(rel) << '\n';
  }
  return out.str();
}

std::string posterior_csv(const ParameterGrid& grid, const std::vector<double>& prior,
                          const PosteriorCurve& post) {
  std::ostringstream out;
  out << "theta,prior,density,cdf\n";
  for (int i = 0; i < grid.num_points; ++i)
    out << format_double(grid.point(i)) << ',' << format_double(prior[i]) << ','
        << format_double(post.density[i]) << ',' << format_double(post.cdf[i]) << '\n';
  return out.str();
}

std::string coverage_svg(const std::vector<CoverageReport>& reports,
                         const std::string& title) {
  constexpr int width = 640, height = 520, margin = 60;
  const int plot_w = width - 2 * margin;
  const int plot_h = height - 2 * margin;
  auto px = [&](double p) { return margin + p / 100.0 * plot_w; };
  auto py = [&](double frac) { return height - margin - frac * plot_h; };
  static const char* colors[] = {"#2ca02c", "#1f77b4", "#d62728", "#ff00ff",
                                 "#ff7f0e", "#9467bd"};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
  // axes
  out << "<line x1=\"" << margin << "\" y1=\"" << py(0.0) << "\" x2=\""
      << margin + plot_w << "\" y2=\"" << py(0.0) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << py(0.0) << "\" x2=\"" << margin
      << "\" y2=\"" << py(1.0) << "\" stroke=\"black\"/>\n";
  for (int p = 0; p <= 100; p += 20) {
    out << "<text x=\"" << px(p) << "\" y=\"" << py(0.0) + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << p
        << "</text>\n";
    out << "<text x=\"" << margin - 8 << "\" y=\"" << py(p / 100.0) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << p / 100.0 << "</text>\n";
  }
  // unit diagonal
  out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0.0) << "\" x2=\"" << px(100)
      << "\" y2=\"" << py(1.0) << "\" stroke=\"black\" stroke-dasharray=\"3,4\"/>\n";
  for (std::size_t k = 0; k < reports.size(); ++k) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[k % 6]
        << "\" stroke-width=\"1.5\" points=\"";
    out << px(0) << ',' << py(0.0) << ' ';
    for (int p = 1; p <= 99; ++p)
      out << px(p) << ',' << py(reports[k].proportions[p - 1]) << ' ';
    out << px(100) << ',' << py(1.0) << "\"/>\n";
    const double ly = margin + 16.0 * (k + 1);
    out << "<line x1=\"" << margin + 10 << "\" y1=\"" << ly << "\" x2=\"" << margin + 34
        << "\" y2=\"" << ly << "\" stroke=\"" << colors[k % 6]
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << margin + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << reports[k].label
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

Model parse_model(const json& spec) {
  if (!spec.is_object()) throw std::invalid_argument("model spec must be an object");
  const std::string kind = require_key(spec, "kind", "model spec").get<std::string>();
  if (kind == "gaussian") {
    reject_unknown_keys(spec, {"kind", "transform", "sigma"}, "gaussian model spec");
    const json& tr = require_key(spec, "transform", "gaussian model spec");
    const std::string tkind = require_key(tr, "kind", "transform spec").get<std::string>();
    Transform transform;
    if (tkind == "identity") {
      reject_unknown_keys(tr, {"kind"}, "transform spec");
      transform = Transform::make_identity();
    } else if (tkind == "cube") {
      reject_unknown_keys(tr, {"kind"}, "transform spec");
      transform = Transform::make_cube();
    } else if (tkind == "power") {
      reject_unknown_keys(tr, {"kind", "exponent"}, "transform spec");
      transform = Transform::make_power(require_key(tr, "exponent", "transform spec").get<int>());
    } else if (tkind == "poly") {
      reject_unknown_keys(tr, {"kind", "coefficients"}, "transform spec");
      transform = Transform::make_poly(
          require_key(tr, "coefficients", "transform spec").get<std::vector<double>>());
    } else {
      throw std::invalid_argument("unknown transform kind \"" + tkind + "\"");
    }
    return GaussianTransformModel(transform,
                                  require_key(spec, "sigma", "gaussian model spec").get<double>());
  }
  if (kind == "binomial") {
    reject_unknown_keys(spec, {"kind", "n"}, "binomial model spec");
    return BinomialModel(require_key(spec, "n", "binomial model spec").get<long long>());
  }
  if (kind == "negbinomial") {
    reject_unknown_keys(spec, {"kind", "r"}, "negbinomial model spec");
    return NegativeBinomialModel(
        require_key(spec, "r", "negbinomial model spec").get<long long>());
  }
  throw std::invalid_argument("unknown model kind \"" + kind + "\"");
}

GridSpec parse_grid_spec(const json& spec, const GridSpec& defaults) {
  reject_unknown_keys(spec, {"lower", "upper", "num_points"}, "grid spec");
  GridSpec out = defaults;
  if (spec.contains("lower")) out.lower = spec.at("lower").get<double>();
  if (spec.contains("upper")) out.upper = spec.at("upper").get<double>();
  if (spec.contains("num_points")) out.num_points = spec.at("num_points").get<int>();
  if (out.num_points < 101) throw std::invalid_argument("grid needs at least 101 points");
  return out;
}

namespace {

PriorStrategy parse_prior(const json& spec) {
  if (spec.is_string()) {
    if (spec.get<std::string>() == "combined") return PriorStrategy::combined_jeffreys();
    throw std::invalid_argument("prior must be \"combined\" or {\"model\": ...}");
  }
  reject_unknown_keys(spec, {"model"}, "prior spec");
  return PriorStrategy::from_model(parse_model(require_key(spec, "model", "prior spec")));
}

TrueThetaRule parse_true_theta(const json& spec) {
  TrueThetaRule rule;
  const std::string kind = require_key(spec, "kind", "true_theta spec").get<std::string>();
  if (kind == "fixed") {
    reject_unknown_keys(spec, {"kind", "value"}, "true_theta spec");
    rule.kind = TrueThetaRule::Kind::fixed;
    rule.value = require_key(spec, "value", "true_theta spec").get<double>();
  } else if (kind == "uniform") {
    reject_unknown_keys(spec, {"kind", "low", "high"}, "true_theta spec");
    rule.kind = TrueThetaRule::Kind::uniform;
    rule.low = require_key(spec, "low", "true_theta spec").get<double>();
    rule.high = require_key(spec, "high", "true_theta spec").get<double>();
  } else if (kind == "grid") {
    reject_unknown_keys(spec, {"kind", "low", "high", "num_values", "trials_per_value"},
                        "true_theta spec");
    rule.kind = TrueThetaRule::Kind::value_grid;
    rule.low = require_key(spec, "low", "true_theta spec").get<double>();
    rule.high = require_key(spec, "high", "true_theta spec").get<double>();
    rule.num_values = require_key(spec, "num_values", "true_theta spec").get<int>();
    rule.trials_per_value =
        require_key(spec, "trials_per_value", "true_theta spec").get<long long>();
  } else {
    throw std::invalid_argument("unknown true_theta kind \"" + kind + "\"");
  }
  return rule;
}

}  // namespace

CoverageConfig parse_coverage_config(const json& config) {
  reject_unknown_keys(config,
                      {"experiments", "prior", "true_theta", "trials", "seed", "grid",
                       "threads", "label"},
                      "coverage config");
  CoverageConfig out;
  for (const auto& spec : require_key(config, "experiments", "coverage config"))
    out.experiments.push_back(parse_model(spec));
  out.prior = parse_prior(require_key(config, "prior", "coverage config"));
  out.true_theta = parse_true_theta(require_key(config, "true_theta", "coverage config"));
  if (config.contains("trials")) out.num_trials = config.at("trials").get<long long>();
  if (config.contains("seed")) out.seed = config.at("seed").get<std::uint64_t>();
  if (config.contains("grid")) out.grid = parse_grid_spec(config.at("grid"), out.grid);
  if (config.contains("threads")) out.threads = config.at("threads").get<int>();
  if (config.contains("label")) out.label = config.at("label").get<std::string>();
  return out;
}

PosteriorRequest parse_posterior_config(const json& config) {
  reject_unknown_keys(config, {"experiments", "prior", "grid"}, "posterior config");
  PosteriorRequest out;
  for (const auto& entry : require_key(config, "experiments", "posterior config")) {
    reject_unknown_keys(entry, {"model", "observation"}, "posterior experiment");
    Model model = parse_model(require_key(entry, "model", "posterior experiment"));
    const json& obs = require_key(entry, "observation", "posterior experiment");
    Observation observation = is_bernoulli_model(model)
                                  ? Observation::count_value(obs.get<long long>())
                                  : Observation::real_value(obs.get<double>());
    out.experiments.emplace_back(std::move(model), observation);
  }
  if (out.experiments.empty())
    throw std::invalid_argument("posterior config: experiments must be nonempty");
  out.prior = config.contains("prior") ? parse_prior(config.at("prior"))
                                       : PriorStrategy::combined_jeffreys();
  if (config.contains("grid")) {
    out.grid = parse_grid_spec(config.at("grid"), out.grid);
    out.has_grid = true;
  }
  return out;
}

FisherTableRequest parse_fisher_table_config(const json& config) {
  reject_unknown_keys(config, {"model", "grid"}, "fisher-table config");
  Model model = parse_model(require_key(config, "model", "fisher-table config"));
  GridSpec defaults;
  if (is_bernoulli_model(model)) {
    defaults.lower = 0.01;
    defaults.upper = 0.99;
  }
  defaults.num_points = 101;
  GridSpec grid = config.contains("grid") ? parse_grid_spec(config.at("grid"), defaults)
                                          : defaults;
  return {std::move(model), grid};
}

}  // namespace bayup::io
