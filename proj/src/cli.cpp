#include "treecorr/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <variant>

#include "treecorr/chebyshev.hpp"
#include "treecorr/correlation.hpp"
#include "treecorr/errors.hpp"
#include "treecorr/gaussian.hpp"
#include "treecorr/graph.hpp"
#include "treecorr/local_rules.hpp"
#include "treecorr/parallel.hpp"
#include "treecorr/spectrum.hpp"
#include "treecorr/walks.hpp"

namespace treecorr::cli {

namespace {

using Json = nlohmann::ordered_json;
using Cell = std::variant<long long, double, std::string, bool>;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6g", x);
  return buffer;
}

std::string format_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

Json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_double(v);
          // Round to the 6 significant digits used everywhere else.
          return std::stod(format_double(v));
        } else {
          return v;
        }
      },
      cell);
}

// A report is either a flat record (fields only) or a table (columns/rows,
// with fields as run metadata in JSON).
struct Report {
  std::string schema;
  std::vector<std::pair<std::string, Cell>> fields;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void field(std::string name, Cell value) { fields.emplace_back(std::move(name), std::move(value)); }
  void row(std::vector<Cell> values) { rows.push_back(std::move(values)); }
};

void emit(const Report& report, const std::string& format, std::ostream& out) {
  if (format == "json") {
    Json doc;
    doc["schema"] = report.schema;
    for (const auto& [name, value] : report.fields) doc[name] = cell_json(value);
    if (!report.columns.empty()) {
      Json rows = Json::array();
      for (const auto& r : report.rows) {
        Json obj;
        for (std::size_t i = 0; i < report.columns.size(); ++i) obj[report.columns[i]] = cell_json(r[i]);
        rows.push_back(std::move(obj));
      }
      doc["rows"] = std::move(rows);
    }
    out << doc.dump(2) << '\n';
    return;
  }
  auto join = [&out](const auto& items, auto&& show) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out << ',';
      out << show(items[i]);
    }
    out << '\n';
  };
  if (report.columns.empty()) {
    join(report.fields, [](const auto& f) { return f.first; });
    join(report.fields, [](const auto& f) { return format_cell(f.second); });
    return;
  }
  join(report.columns, [](const std::string& c) { return c; });
  for (const auto& r : report.rows) join(r, [](const Cell& c) { return format_cell(c); });
}

// Flags shared by every subcommand plus the union of per-module flags.
struct RunConfig {
  std::string format = "csv";
  std::string output_path;
  std::string input_path;
  unsigned threads = 0;
  int d = 3;
  int r = 1;
  int k = 1;
  int k_max = 0;
  int n = 0;
  int min_girth = 3;
  int attempts = 1000;
  int grid_size = 20000;
  int points = 101;
  int moments = -1;
  int radius = -1;
  int n_copies = 1;
  int max_iters = 100000;
  double tol = 1e-8;
  double ramanujan_tol = 1e-6;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  std::string rule;
  std::string measure = "delta:1";
  std::string kernel;
  bool exact = false;
  bool asymptote = false;
  bool summary = false;
};

double parse_number(const std::string& text, const std::string& context) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == text.size() && !text.empty(), context + ": cannot parse number \"" + text + "\"");
  return value;
}

std::vector<std::string> split(const std::string& text, char delimiter) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, delimiter)) parts.push_back(item);
  return parts;
}

// delta:X | atoms:x1@w1,x2@w2,... | km | uniform
MeasureOnInterval parse_measure(const std::string& text, int d, int grid_size) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "delta") {
    return point_masses({parse_number(body, "measure delta")}, {1.0});
  }
  if (kind == "atoms") {
    std::vector<double> nodes;
    std::vector<double> weights;
    for (const auto& atom : split(body, ',')) {
      const auto at = atom.find('@');
      require(at != std::string::npos, "measure atoms: expected x@w, got \"" + atom + "\"");
      nodes.push_back(parse_number(atom.substr(0, at), "measure atoms"));
      weights.push_back(parse_number(atom.substr(at + 1), "measure atoms"));
    }
    return point_masses(std::move(nodes), std::move(weights));
  }
  if (kind == "km") return km_measure_normalized(d, grid_size);
  if (kind == "uniform") {
    require(grid_size >= 1, "measure uniform: grid size must be positive");
    std::vector<double> nodes(static_cast<std::size_t>(grid_size));
    std::vector<double> weights(nodes.size(), 1.0 / grid_size);
    for (int i = 0; i < grid_size; ++i) nodes[i] = -1.0 + (2.0 * i + 1.0) / grid_size;
    auto m = point_masses(std::move(nodes), std::move(weights));
    m.kind = MeasureOnInterval::Kind::gridded_density;
    return m;
  }
  throw PreconditionError("unknown measure \"" + text + "\" (delta:X, atoms:x@w,..., km, uniform)");
}

LocalRule make_rule(const RunConfig& config) {
  if (config.rule == "ballsum") return rule_ballsum(config.r);
  if (config.rule == "minlabel") return rule_minlabel();
  throw PreconditionError("unknown rule \"" + config.rule + "\" (ballsum, minlabel)");
}

FiniteRegularGraph load_graph(const RunConfig& config) {
  require(!config.input_path.empty(), "missing --input edge list (use - for stdin)");
  if (config.input_path == "-") return read_edge_list(std::cin);
  std::ifstream in(config.input_path);
  require(static_cast<bool>(in), "cannot open " + config.input_path);
  return read_edge_list(in);
}

void require_degree(int d) { require(d >= 3, "--d must be at least 3"); }

int cmd_corr(const RunConfig& c, Report& report) {
  require_degree(c.d);
  require(c.k >= 0, "--k must be nonnegative");
  const auto rule = make_rule(c);
  const auto est = mc_correlation(rule, c.d, c.k, c.samples, c.seed);
  report.schema = "treecorr.corr";
  report.field("rule", rule.name);
  report.field("d", static_cast<long long>(c.d));
  report.field("r", static_cast<long long>(rule.radius));
  report.field("k", static_cast<long long>(c.k));
  report.field("estimate", est.estimate);
  report.field("se", est.standard_error);
  report.field("samples", static_cast<long long>(est.samples));
  report.field("seed", static_cast<long long>(est.seed));
  report.field("bound", corr_bound(c.d, c.k));
  if (rule.name == "ballsum") report.field("exact", format_rational(ballsum_corr_exact(c.d, c.r, c.k)));
  return kExitOk;
}

int cmd_bound(const RunConfig& c, Report& report) {
  require_degree(c.d);
  const int first = c.k_max > 0 ? 1 : c.k;
  const int last = c.k_max > 0 ? c.k_max : c.k;
  require(first >= 0, "--k must be nonnegative");
  report.schema = "treecorr.bound";
  report.field("d", static_cast<long long>(c.d));
  if (c.rule.empty()) {
    report.columns = {"k", "bound"};
    for (int k = first; k <= last; ++k) report.row({static_cast<long long>(k), corr_bound(c.d, k)});
    return kExitOk;
  }
  const auto rule = make_rule(c);
  report.field("rule", rule.name);
  report.field("r", static_cast<long long>(rule.radius));
  report.columns = {"k", "estimate", "se", "bound", "margin", "passed"};
  bool all_passed = true;
  for (int k = first; k <= last; ++k) {
    const auto check = bound_check(rule, c.d, k, c.samples, mix_seed(c.seed, static_cast<std::uint64_t>(k)));
    all_passed = all_passed && check.passed;
    report.row({static_cast<long long>(k), check.measured.estimate, check.measured.standard_error,
                check.bound, check.margin, check.passed});
  }
  return all_passed ? kExitOk : kExitCheckFailed;
}

int cmd_ballsum(const RunConfig& c, Report& report) {
  require_degree(c.d);
  require(c.r >= 0 && c.k >= 0, "--r and --k must be nonnegative");
  const Rational exact = ballsum_corr_exact(c.d, c.r, c.k);
  report.schema = "treecorr.ballsum";
  report.field("d", static_cast<long long>(c.d));
  report.field("r", static_cast<long long>(c.r));
  report.field("k", static_cast<long long>(c.k));
  report.field("exact", format_rational(exact));
  if (c.exact) return kExitOk;
  report.field("value", to_double(exact));
  if (c.k >= 1) report.field("limit", ballsum_limit(c.d, c.k));
  report.field("bound", corr_bound(c.d, c.k));
  const auto est = mc_correlation(rule_ballsum(c.r), c.d, c.k, c.samples, c.seed);
  report.field("estimate", est.estimate);
  report.field("se", est.standard_error);
  return kExitOk;
}

int cmd_seq(const RunConfig& c, Report& report) {
  require_degree(c.d);
  const int max_k = c.k_max > 0 ? c.k_max : 10;
  const auto eta = parse_measure(c.measure, c.d, c.grid_size);
  const auto seq = corr_sequence_from_measure(c.d, eta, max_k);
  const auto checks = bound_check_sequence(seq);
  report.schema = "treecorr.seq";
  report.field("d", static_cast<long long>(c.d));
  report.field("measure", c.measure);
  report.columns = {"k", "x_k", "bound"};
  bool ok = true;
  for (const auto& check : checks) {
    ok = ok && check.passed;
    report.row({static_cast<long long>(check.k), check.measured.estimate, check.bound});
  }
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_kesten_mckay(const RunConfig& c, Report& report) {
  require_degree(c.d);
  report.schema = "treecorr.kesten-mckay";
  report.field("d", static_cast<long long>(c.d));
  report.field("grid_size", static_cast<long long>(c.grid_size));
  const auto measure = km_measure(c.d, c.grid_size);
  report.field("mass", measure.total_mass());
  if (c.moments >= 0) {
    report.columns = {"k", "moment", "closed_walks"};
    for (int k = 0; k <= c.moments; k += 2) {
      const Rational walks = return_prob(c.d, k) * Rational(ipow(BigInt(c.d), static_cast<unsigned>(k)));
      report.row({static_cast<long long>(k),
                  measure.integrate([k](double t) { return std::pow(t, k); }), format_rational(walks)});
    }
    return kExitOk;
  }
  require(c.points >= 2, "--points must be at least 2");
  const double edge = 2.0 * std::sqrt(c.d - 1.0);
  report.columns = {"t", "density"};
  for (int i = 0; i < c.points; ++i) {
    const double t = -edge + 2.0 * edge * i / (c.points - 1);
    report.row({t, km_density(c.d, t)});
  }
  return kExitOk;
}

int cmd_walks(const RunConfig& c, Report& report) {
  require(c.d >= 3, "--d must be at least 3");
  const int max_k = c.k_max > 0 ? c.k_max : 10;
  report.schema = "treecorr.walks";
  report.field("d", static_cast<long long>(c.d));
  if (c.asymptote) {
    const auto table = asymptote_check(c.d, max_k);
    report.field("target", table.target);
    report.columns = {"k", "return_probability", "root"};
    for (const auto& row : table.rows) {
      report.row({static_cast<long long>(2 * row.k), row.return_probability, row.root});
    }
    return kExitOk;
  }
  require(max_k <= kExactWalkLimit, "--k-max above the exact walk limit");
  const int radius = std::max(0, c.radius);
  report.field("radius", static_cast<long long>(radius));
  report.columns = {"k", "probability", "value", "root"};
  for (int k = 0; k <= max_k; ++k) {
    const Rational p = hit_ball_prob(c.d, k, radius);
    const double value = to_double(p);
    const double root = k == 0 ? 1.0 : (p == 0 ? 0.0 : std::exp(log_of(p) / k));
    report.row({static_cast<long long>(k), format_rational(p), value, root});
  }
  return kExitOk;
}

int cmd_spectrum(const RunConfig& c, Report& report) {
  const auto graph = load_graph(c);
  RhoOptions options;
  options.max_iters = c.max_iters;
  options.tol = c.tol;
  options.seed = c.seed;
  const auto spectral = is_ramanujan(graph, c.ramanujan_tol, options);
  report.schema = "treecorr.spectral-report";
  report.field("d", static_cast<long long>(spectral.d));
  report.field("n", static_cast<long long>(spectral.n));
  report.field("rho_estimate", spectral.rho_estimate);
  report.field("ramanujan_threshold", spectral.ramanujan_threshold);
  report.field("is_ramanujan", spectral.is_ramanujan);
  report.field("iterations", static_cast<long long>(spectral.iterations));
  report.field("residual", spectral.residual);
  report.field("converged", spectral.converged);
  return spectral.converged ? kExitOk : kExitCheckFailed;
}

int cmd_rho_subsets(const RunConfig& c, Report& report) {
  const auto graph = load_graph(c);
  const int max_k = c.k_max > 0 ? c.k_max : 40;
  const auto subsets = rho_via_subsets(graph, max_k);
  RhoOptions options;
  options.seed = c.seed;
  const auto rho = rho_estimate(graph, options);
  report.schema = "treecorr.rho-subsets";
  report.field("n", static_cast<long long>(graph.n()));
  report.field("d", static_cast<long long>(graph.d()));
  report.field("k_max", static_cast<long long>(max_k));
  report.field("rho_via_subsets", subsets.value);
  report.field("best_subset", static_cast<long long>(subsets.best_subset));
  report.field("best_k", static_cast<long long>(subsets.best_k));
  report.field("rho_estimate", rho.value);
  return subsets.value <= rho.value + 1e-6 ? kExitOk : kExitCheckFailed;
}

int cmd_gaussian(const RunConfig& c, Report& report) {
  require_degree(c.d);
  require(c.k >= 0 && c.r >= 0, "--k and --r must be nonnegative");
  const TreePatch patch(c.d, c.k, c.r);
  DistanceKernel kernel;
  const std::string kernel_text = c.kernel.empty() ? "measure:" + c.measure : c.kernel;
  if (kernel_text.rfind("values:", 0) == 0) {
    std::vector<double> values;
    for (const auto& part : split(kernel_text.substr(7), ',')) values.push_back(parse_number(part, "kernel values"));
    kernel = make_kernel(c.d, std::move(values));
  } else if (kernel_text.rfind("measure:", 0) == 0) {
    const auto eta = parse_measure(kernel_text.substr(8), c.d, c.grid_size);
    kernel = kernel_from_sequence(corr_sequence_from_measure(c.d, eta, patch.diameter()));
  } else {
    throw PreconditionError("unknown kernel \"" + kernel_text + "\" (values:p0,p1,... or measure:<measure>)");
  }
  require(c.samples >= 1, "--samples must be positive");
  const auto samples = sample_gaussian(kernel, patch, c.samples, c.seed);
  report.schema = c.summary ? "treecorr.gaussian-summary" : "treecorr.gaussian-samples";
  report.field("d", static_cast<long long>(c.d));
  report.field("k", static_cast<long long>(c.k));
  report.field("r", static_cast<long long>(c.r));
  report.field("vertices", static_cast<long long>(patch.size()));
  report.field("samples", static_cast<long long>(c.samples));
  report.field("seed", static_cast<long long>(c.seed));
  if (c.summary) {
    const auto cov = empirical_covariance(samples);
    const auto gram = gram_matrix(kernel, patch);
    report.field("kernel_vw", gram(0, patch.w()));
    report.field("empirical_vw", cov(0, patch.w()));
    report.field("max_abs_deviation", (cov - gram).cwiseAbs().maxCoeff());
    return kExitOk;
  }
  for (int i = 0; i < patch.size(); ++i) report.columns.push_back("x" + std::to_string(i));
  for (Eigen::Index s = 0; s < samples.rows(); ++s) {
    std::vector<Cell> row;
    for (Eigen::Index i = 0; i < samples.cols(); ++i) row.emplace_back(samples(s, i));
    report.row(std::move(row));
  }
  return kExitOk;
}

int cmd_gen_graph(const RunConfig& c, std::ostream& out) {
  GenerationOptions options;
  options.max_attempts = c.attempts;
  const auto graph = random_regular_graph(c.n, c.d, c.min_girth, c.seed, options);
  if (c.format == "json") {
    Json doc;
    doc["schema"] = "treecorr.graph";
    doc["n"] = graph.n();
    doc["d"] = graph.d();
    doc["girth"] = girth(graph);
    Json edges = Json::array();
    for (const auto& [u, v] : graph.edges()) edges.push_back({u, v});
    doc["edges"] = std::move(edges);
    out << doc.dump() << '\n';
  } else {
    write_edge_list(out, graph);
  }
  return kExitOk;
}

int cmd_girth(const RunConfig& c, Report& report) {
  const auto graph = load_graph(c);
  const int g = girth(graph);
  report.schema = "treecorr.girth";
  report.field("girth", g == kInfiniteGirth ? Cell{std::string("inf")} : Cell{static_cast<long long>(g)});
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"treecorr: correlation decay of local rules on regular trees"};
  app.require_subcommand(1, 1);
  RunConfig c;

  auto common = [&c](CLI::App* sub) {
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", c.output_path, "Write the report to this path");
    sub->add_option("--threads", c.threads, "Worker threads (default: available parallelism)");
  };
  auto mc_flags = [&c](CLI::App* sub) {
    sub->add_option("--samples", c.samples, "Monte Carlo samples");
    sub->add_option("--seed", c.seed, "Random seed");
  };

  std::vector<std::pair<CLI::App*, std::function<int(Report&)>>> commands;
  CLI::App* gen_graph = nullptr;

  {
    auto* sub = app.add_subcommand("corr", "Monte Carlo correlation of a rule at distance k");
    common(sub);
    mc_flags(sub);
    sub->add_option("--rule", c.rule, "ballsum or minlabel")->required();
    sub->add_option("--d", c.d);
    sub->add_option("--r", c.r, "Ball-sum radius");
    sub->add_option("--k", c.k);
    commands.emplace_back(sub, [&c](Report& r) { return cmd_corr(c, r); });
  }
  {
    auto* sub = app.add_subcommand("bound", "Correlation bound, optionally checked against a rule");
    common(sub);
    mc_flags(sub);
    sub->add_option("--d", c.d);
    sub->add_option("--k", c.k);
    sub->add_option("--k-max", c.k_max, "Emit k = 1..k_max");
    sub->add_option("--rule", c.rule, "ballsum or minlabel");
    sub->add_option("--r", c.r, "Ball-sum radius");
    commands.emplace_back(sub, [&c](Report& r) { return cmd_bound(c, r); });
  }
  {
    auto* sub = app.add_subcommand("ballsum", "Exact ball-sum correlation");
    common(sub);
    mc_flags(sub);
    sub->add_option("--d", c.d);
    sub->add_option("--r", c.r);
    sub->add_option("--k", c.k);
    sub->add_flag("--exact", c.exact, "Exact rational only, no simulation");
    commands.emplace_back(sub, [&c](Report& r) { return cmd_ballsum(c, r); });
  }
  {
    auto* sub = app.add_subcommand("seq", "Correlation sequence of a spectral measure on [-1,1]");
    common(sub);
    sub->add_option("--d", c.d);
    sub->add_option("--k-max", c.k_max, "Largest distance (default 10)");
    sub->add_option("--measure", c.measure, "delta:X | atoms:x@w,... | km | uniform");
    sub->add_option("--grid-size", c.grid_size);
    commands.emplace_back(sub, [&c](Report& r) { return cmd_seq(c, r); });
  }
  {
    auto* sub = app.add_subcommand("kesten-mckay", "Kesten-McKay density or moments");
    common(sub);
    sub->add_option("--d", c.d);
    sub->add_option("--grid-size", c.grid_size, "Quadrature nodes");
    sub->add_option("--points", c.points, "Density table points");
    sub->add_option("--moments", c.moments, "Emit even moments up to this order instead");
    commands.emplace_back(sub, [&c](Report& r) { return cmd_kesten_mckay(c, r); });
  }
  {
    auto* sub = app.add_subcommand("walks", "Random-walk return/ball probabilities on T_d");
    common(sub);
    sub->add_option("--d", c.d);
    sub->add_option("--k-max", c.k_max, "Largest walk length (default 10)");
    sub->add_option("--radius", c.radius, "Ball radius R (default 0: return to root)");
    sub->add_flag("--asymptote", c.asymptote, "Table of r_2k^(1/2k) for k = 1..k_max");
    commands.emplace_back(sub, [&c](Report& r) { return cmd_walks(c, r); });
  }
  {
    auto* sub = app.add_subcommand("spectrum", "Spectral radius on mean-zero vectors and Ramanujan test");
    common(sub);
    sub->add_option("--input", c.input_path, "Edge list (- for stdin)")->required();
    sub->add_option("--max-iters", c.max_iters);
    sub->add_option("--tol", c.tol);
    sub->add_option("--ramanujan-tol", c.ramanujan_tol);
    sub->add_option("--seed", c.seed);
    commands.emplace_back(sub, [&c](Report& r) { return cmd_spectrum(c, r); });
  }
  {
    auto* sub = app.add_subcommand("rho-subsets", "Spectral radius from walk return to subsets");
    common(sub);
    sub->add_option("--input", c.input_path, "Edge list (- for stdin)")->required();
    sub->add_option("--k-max", c.k_max, "Largest walk length (default 40)");
    sub->add_option("--seed", c.seed);
    commands.emplace_back(sub, [&c](Report& r) { return cmd_rho_subsets(c, r); });
  }
  {
    auto* sub = app.add_subcommand("gaussian", "Gaussian samples with a distance kernel on a tree patch");
    common(sub);
    mc_flags(sub);
    sub->add_option("--d", c.d);
    sub->add_option("--k", c.k, "Distance between the patch centres");
    sub->add_option("--r", c.r, "Patch ball radius");
    sub->add_option("--kernel", c.kernel, "values:p0,p1,... or measure:<measure>");
    sub->add_option("--measure", c.measure, "Shorthand for --kernel measure:<measure>");
    sub->add_option("--grid-size", c.grid_size);
    sub->add_flag("--summary", c.summary, "Covariance summary instead of raw samples");
    commands.emplace_back(sub, [&c](Report& r) { return cmd_gaussian(c, r); });
  }
  {
    gen_graph = app.add_subcommand("gen-graph", "Random d-regular graph with a girth floor");
    common(gen_graph);
    gen_graph->add_option("--n", c.n)->required();
    gen_graph->add_option("--d", c.d);
    gen_graph->add_option("--min-girth", c.min_girth);
    gen_graph->add_option("--seed", c.seed);
    gen_graph->add_option("--attempts", c.attempts);
  }
  {
    auto* sub = app.add_subcommand("girth", "Girth of an edge-list graph");
    common(sub);
    sub->add_option("--input", c.input_path, "Edge list (- for stdin)")->required();
    commands.emplace_back(sub, [&c](Report& r) { return cmd_girth(c, r); });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (c.threads > 0) set_worker_count(c.threads);

  std::ofstream file;
  if (!c.output_path.empty()) {
    file.open(c.output_path);
    if (!file) {
      err << "error: cannot open " << c.output_path << " for writing\n";
      return kExitUsage;
    }
  }
  std::ostream& sink = c.output_path.empty() ? out : file;

  try {
    if (gen_graph->parsed()) return cmd_gen_graph(c, sink);
    for (auto& [sub, handler] : commands) {
      if (!sub->parsed()) continue;
      Report report;
      const int code = handler(report);
      emit(report, c.format, sink);
      if (code == kExitCheckFailed) err << "check failed: see report\n";
      return code;
    }
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GenerationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DegenerateVarianceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NotPsdError& e) {
    err << "error: " << e.what() << " (min eigenvalue " << format_double(e.min_eigenvalue()) << ")\n";
    return kExitUsage;
  }
  err << "error: no subcommand\n";
  return kExitUsage;
}

}  // namespace treecorr::cli
