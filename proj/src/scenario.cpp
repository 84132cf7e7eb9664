#include "qwalk/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qwalk {

namespace {

using nlohmann::json;

constexpr double kStepGuard = 0.1;
constexpr double kWeightSlack = 1e-10;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Collects violations so one pass reports everything wrong with a config.
struct Validator {
  std::vector<SchemaViolation> violations;
  bool unit_flavored = false;

  void add(const std::string& path, const std::string& reason) {
    violations.push_back({path, reason});
  }
  void add_unit(const std::string& path, const std::string& reason) {
    unit_flavored = true;
    violations.push_back({path, reason});
  }
  bool ok() const { return violations.empty(); }

  [[noreturn]] void raise() const {
    if (unit_flavored) {
      std::ostringstream msg;
      msg << "config uses units or non-numeric quantities:";
      for (const auto& v : violations) {
        msg << "\n  " << v.path << ": " << v.reason;
      }
      throw Error(Errc::unit_error, msg.str());
    }
    throw SchemaError(violations);
  }
};

void check_keys(Validator& v, const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      v.add(path + "." + item.key(), "unknown key");
    }
  }
}

bool looks_like_number_with_unit(const std::string& s) {
  std::size_t pos = 0;
  bool had_digit = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
  while (pos < s.size() &&
         (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
          s[pos] == 'e' || s[pos] == 'E' || s[pos] == '+' || s[pos] == '-')) {
    had_digit = had_digit || std::isdigit(static_cast<unsigned char>(s[pos]));
    ++pos;
  }
  return had_digit && pos < s.size();
}

std::optional<double> require_number(Validator& v, const json& j,
                                     const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string() &&
      looks_like_number_with_unit(j.get<std::string>())) {
    v.add_unit(path, "'" + j.get<std::string>() +
                         "': write plain SI numbers, units are not parsed");
  } else {
    v.add(path, "expected a number");
  }
  return std::nullopt;
}

struct EdgeParam {
  double value = std::numeric_limits<double>::quiet_NaN();
  std::string symbol;
};

EdgeParam parse_edge_param(Validator& v, const json& j,
                           const std::string& path) {
  EdgeParam p;
  if (j.is_number()) {
    p.value = j.get<double>();
  } else if (j.is_string()) {
    p.symbol = j.get<std::string>();
    if (p.symbol.empty()) v.add(path, "rate symbol must be nonempty");
  } else {
    v.add(path, "expected a number or a rate-symbol string");
  }
  return p;
}

std::optional<ReactionGraph> parse_graph(Validator& v, const json& j) {
  const std::size_t entry_violations = v.violations.size();
  if (!j.is_object()) {
    v.add("graph", "expected an object");
    return std::nullopt;
  }
  if (j.contains("builtin")) {
    check_keys(v, j, "graph", {"builtin"});
    if (!j["builtin"].is_string()) {
      v.add("graph.builtin", "expected a builtin graph name");
      return std::nullopt;
    }
    try {
      return builtin_graph(j["builtin"].get<std::string>());
    } catch (const Error& e) {
      v.add("graph.builtin", e.what());
      return std::nullopt;
    }
  }

  check_keys(v, j, "graph", {"n_sites", "nodes", "edges"});
  if (!j.contains("n_sites") || !j["n_sites"].is_number_integer() ||
      j["n_sites"].get<int>() < 1) {
    v.add("graph.n_sites", "expected a positive integer");
    return std::nullopt;
  }
  int n_sites = j["n_sites"].get<int>();

  std::vector<Node> nodes;
  if (j.contains("nodes")) {
    if (!j["nodes"].is_array()) {
      v.add("graph.nodes", "expected an array");
      return std::nullopt;
    }
    int idx = 0;
    for (const json& nj : j["nodes"]) {
      std::string path = "graph.nodes[" + std::to_string(idx++) + "]";
      if (!nj.is_object()) {
        v.add(path, "expected an object");
        continue;
      }
      check_keys(v, nj, path, {"site", "name"});
      Node node;
      if (nj.contains("site") && nj["site"].is_number_integer()) {
        node.site = nj["site"].get<int>();
      } else {
        v.add(path + ".site", "expected an integer site");
      }
      if (nj.contains("name") && nj["name"].is_string()) {
        node.name = nj["name"].get<std::string>();
      }
      nodes.push_back(std::move(node));
    }
  }

  std::vector<Edge> edges;
  if (!j.contains("edges") || !j["edges"].is_array()) {
    v.add("graph.edges", "expected an array of edges");
    return std::nullopt;
  }
  int idx = 0;
  for (const json& ej : j["edges"]) {
    std::string path = "graph.edges[" + std::to_string(idx++) + "]";
    if (!ej.is_object() || !ej.contains("kind") || !ej["kind"].is_string()) {
      v.add(path, "expected an object with a 'kind'");
      continue;
    }
    std::string kind = ej["kind"].get<std::string>();
    auto site_field = [&](const char* key) {
      if (!ej.contains(key) || !ej[key].is_number_integer()) {
        v.add(path + "." + key, "expected an integer site");
        return 0;
      }
      return ej[key].get<int>();
    };
    if (kind == "damping") {
      check_keys(v, ej, path, {"kind", "from", "to", "rate"});
      DampingEdge e;
      e.from = site_field("from");
      e.to = site_field("to");
      if (ej.contains("rate")) {
        EdgeParam p = parse_edge_param(v, ej["rate"], path + ".rate");
        e.rate = p.value;
        e.symbol = p.symbol;
      } else {
        v.add(path + ".rate", "missing rate");
      }
      edges.emplace_back(e);
    } else if (kind == "dephasing") {
      check_keys(v, ej, path, {"kind", "j", "k", "rate"});
      DephasingEdge e;
      e.j = site_field("j");
      e.k = site_field("k");
      if (ej.contains("rate")) {
        EdgeParam p = parse_edge_param(v, ej["rate"], path + ".rate");
        e.rate = p.value;
        e.symbol = p.symbol;
      } else {
        v.add(path + ".rate", "missing rate");
      }
      edges.emplace_back(e);
    } else if (kind == "coherent") {
      check_keys(v, ej, path,
                 {"kind", "j", "k", "omega_j", "omega_k", "coupling"});
      CoherentEdge e;
      e.j = site_field("j");
      e.k = site_field("k");
      for (auto [key, value, symbol] :
           {std::tuple{"omega_j", &e.omega_j, &e.omega_j_symbol},
            std::tuple{"omega_k", &e.omega_k, &e.omega_k_symbol},
            std::tuple{"coupling", &e.coupling, &e.coupling_symbol}}) {
        if (!ej.contains(key)) {
          v.add(path + "." + key, "missing parameter");
          continue;
        }
        EdgeParam p = parse_edge_param(v, ej[key], path + "." + key);
        *value = p.value;
        *symbol = p.symbol;
      }
      edges.emplace_back(e);
    } else {
      v.add(path + ".kind",
            "unknown edge kind '" + kind +
                "'; expected damping, dephasing, or coherent");
    }
  }
  if (v.violations.size() != entry_violations) return std::nullopt;

  try {
    return ReactionGraph(n_sites, std::move(nodes), std::move(edges));
  } catch (const Error& e) {
    v.add("graph", e.what());
    return std::nullopt;
  }
}

std::optional<DensityOperator> parse_initial(Validator& v, const json& j,
                                             const Basis& basis) {
  const Eigen::Index dim = static_cast<Eigen::Index>(basis.size());
  if (!j.is_object()) {
    v.add("initial", "expected an object");
    return std::nullopt;
  }
  check_keys(v, j, "initial", {"state", "mixture", "matrix"});
  int given = int(j.contains("state")) + int(j.contains("mixture")) +
              int(j.contains("matrix"));
  if (given != 1) {
    v.add("initial", "give exactly one of state, mixture, matrix");
    return std::nullopt;
  }

  if (j.contains("state")) {
    if (!j["state"].is_string()) {
      v.add("initial.state", "expected a basis-label name");
      return std::nullopt;
    }
    try {
      Eigen::Index idx =
          resolve_label(basis, BasisLabel::Named(j["state"].get<std::string>()));
      Matrix m = Matrix::Zero(dim, dim);
      m(idx, idx) = 1.0;
      return DensityOperator(std::move(m), basis, TraceClass::normalized);
    } catch (const Error& e) {
      v.add("initial.state", e.what());
      return std::nullopt;
    }
  }

  if (j.contains("mixture")) {
    const json& mixture = j["mixture"];
    if (!mixture.is_object() || mixture.empty()) {
      v.add("initial.mixture", "expected a nonempty label->weight object");
      return std::nullopt;
    }
    Matrix m = Matrix::Zero(dim, dim);
    double sum = 0.0;
    bool resolved = true;
    for (const auto& item : mixture.items()) {
      std::string path = "initial.mixture." + item.key();
      auto weight = require_number(v, item.value(), path);
      if (!weight) {
        resolved = false;
        continue;
      }
      if (*weight < 0.0) {
        v.add(path, "weights must be nonnegative");
        resolved = false;
        continue;
      }
      try {
        Eigen::Index idx = resolve_label(basis, BasisLabel::Named(item.key()));
        m(idx, idx) += *weight;
        sum += *weight;
      } catch (const Error& e) {
        v.add(path, e.what());
        resolved = false;
      }
    }
    if (resolved && std::abs(sum - 1.0) > kWeightSlack) {
      v.add("initial.mixture",
            "weights sum to " + fmt17(sum) + ", expected 1");
      resolved = false;
    }
    if (!resolved) return std::nullopt;
    return DensityOperator(std::move(m), basis, TraceClass::normalized);
  }

  const json& mj = j["matrix"];
  if (!mj.is_object() || !mj.contains("re")) {
    v.add("initial.matrix", "expected an object with 're' (and optional 'im')");
    return std::nullopt;
  }
  check_keys(v, mj, "initial.matrix", {"re", "im"});
  auto parse_part = [&](const char* key, Eigen::MatrixXd& out) {
    if (!mj.contains(key)) {
      out = Eigen::MatrixXd::Zero(dim, dim);
      return true;
    }
    const json& part = mj[key];
    if (!part.is_array() || static_cast<Eigen::Index>(part.size()) != dim) {
      v.add(std::string("initial.matrix.") + key,
            "expected " + std::to_string(dim) + " rows");
      return false;
    }
    out.resize(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      const json& row = part[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
        v.add(std::string("initial.matrix.") + key + "[" + std::to_string(r) +
                  "]",
              "expected " + std::to_string(dim) + " entries");
        return false;
      }
      for (Eigen::Index c = 0; c < dim; ++c) {
        const json& cell = row[static_cast<std::size_t>(c)];
        if (!cell.is_number()) {
          v.add(std::string("initial.matrix.") + key + "[" +
                    std::to_string(r) + "][" + std::to_string(c) + "]",
                "expected a number");
          return false;
        }
        out(r, c) = cell.get<double>();
      }
    }
    return true;
  };
  Eigen::MatrixXd re, im;
  if (!parse_part("re", re) || !parse_part("im", im)) return std::nullopt;
  Matrix m = re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
  try {
    return DensityOperator(std::move(m), basis, TraceClass::normalized);
  } catch (const Error& e) {
    v.add("initial.matrix", e.what());
    return std::nullopt;
  }
}

std::optional<IntegrationPlan> parse_integration(Validator& v, const json& j) {
  if (!j.is_object()) {
    v.add("integration", "expected an object");
    return std::nullopt;
  }
  check_keys(v, j, "integration", {"method", "t_final", "dt", "samples"});
  IntegrationPlan plan;
  if (!j.contains("method") || !j["method"].is_string()) {
    v.add("integration.method", "expected 'exact' or 'stepwise'");
    return std::nullopt;
  }
  std::string method = j["method"].get<std::string>();
  if (method == "exact") {
    plan.method = IntegrationMethod::exact;
  } else if (method == "stepwise") {
    plan.method = IntegrationMethod::stepwise;
  } else {
    v.add("integration.method",
          "unknown method '" + method + "'; expected exact or stepwise");
    return std::nullopt;
  }

  bool good = true;
  if (j.contains("t_final")) {
    auto t = require_number(v, j["t_final"], "integration.t_final");
    if (t && *t > 0.0 && std::isfinite(*t)) {
      plan.t_final = *t;
    } else {
      if (t) v.add("integration.t_final", "expected a positive duration");
      good = false;
    }
  } else {
    v.add("integration.t_final", "missing");
    good = false;
  }

  if (j.contains("samples")) {
    if (j["samples"].is_number_integer() && j["samples"].get<int>() >= 2) {
      plan.samples = j["samples"].get<int>();
    } else {
      v.add("integration.samples", "expected an integer >= 2");
      good = false;
    }
  } else {
    v.add("integration.samples", "missing");
    good = false;
  }

  if (plan.method == IntegrationMethod::stepwise) {
    if (j.contains("dt")) {
      auto dt = require_number(v, j["dt"], "integration.dt");
      if (dt && *dt > 0.0 && std::isfinite(*dt)) {
        plan.dt = *dt;
      } else {
        if (dt) v.add("integration.dt", "expected a positive step");
        good = false;
      }
    } else {
      v.add("integration.dt", "stepwise integration needs dt");
      good = false;
    }
  } else if (j.contains("dt")) {
    v.add("integration.dt", "dt is only valid with method 'stepwise'");
    good = false;
  }
  if (!good) return std::nullopt;
  return plan;
}

std::vector<OutputKind> parse_outputs(Validator& v, const json& j) {
  std::vector<OutputKind> outputs;
  if (!j.is_array() || j.empty()) {
    v.add("outputs", "expected a nonempty array");
    return outputs;
  }
  std::set<std::string> seen;
  int idx = 0;
  for (const json& oj : j) {
    std::string path = "outputs[" + std::to_string(idx++) + "]";
    if (!oj.is_string()) {
      v.add(path, "expected an output name");
      continue;
    }
    std::string name = oj.get<std::string>();
    if (!seen.insert(name).second) {
      v.add(path, "duplicate output '" + name + "'");
      continue;
    }
    if (name == "timeseries") {
      outputs.push_back(OutputKind::timeseries);
    } else if (name == "rates_report") {
      outputs.push_back(OutputKind::rates_report);
    } else if (name == "consistency_report") {
      outputs.push_back(OutputKind::consistency_report);
    } else {
      v.add(path, "unknown output '" + name +
                      "'; expected timeseries, rates_report, or "
                      "consistency_report");
    }
  }
  return outputs;
}

void atomic_write(const std::filesystem::path& path,
                  const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(Errc::numeric_failure,
                  "cannot open '" + tmp.string() + "' for writing");
    }
    out << contents;
    if (!out.good()) {
      throw Error(Errc::numeric_failure,
                  "short write to '" + tmp.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::syntax_error, e.what());
  }

  Validator v;
  if (!root.is_object()) {
    v.add("(root)", "expected an object");
    v.raise();
  }
  check_keys(v, root, "(root)",
             {"schema_version", "graph", "rates", "initial", "integration",
              "outputs", "measured_rate"});

  if (!root.contains("schema_version") ||
      !root["schema_version"].is_number_integer()) {
    v.add("schema_version", "missing or not an integer");
  } else if (root["schema_version"].get<int>() != kSchemaVersion) {
    v.add("schema_version",
          "unsupported version " +
              std::to_string(root["schema_version"].get<int>()) +
              "; this build reads version " + std::to_string(kSchemaVersion));
  }

  std::map<std::string, double> rates;
  if (root.contains("rates")) {
    if (!root["rates"].is_object()) {
      v.add("rates", "expected an object of name->value");
    } else {
      for (const auto& item : root["rates"].items()) {
        auto value = require_number(v, item.value(), "rates." + item.key());
        if (value) {
          if (!std::isfinite(*value)) {
            v.add("rates." + item.key(), "must be finite");
          } else {
            rates[item.key()] = *value;
          }
        }
      }
    }
  }

  std::optional<ReactionGraph> graph;
  if (root.contains("graph")) {
    graph = parse_graph(v, root["graph"]);
  } else {
    v.add("graph", "missing");
  }
  if (graph) {
    try {
      graph = bind_rates(*graph, rates);
    } catch (const Error& e) {
      v.add("rates", e.what());
      graph.reset();
    }
  }

  std::optional<double> measured;
  if (root.contains("measured_rate")) {
    auto m = require_number(v, root["measured_rate"], "measured_rate");
    if (m) {
      if (*m >= 0.0 && std::isfinite(*m)) {
        measured = *m;
      } else {
        v.add("measured_rate", "expected a nonnegative rate");
      }
    }
  }

  std::optional<DensityOperator> initial;
  if (root.contains("initial")) {
    if (graph) {
      initial = parse_initial(v, root["initial"], graph_basis(*graph));
    }
  } else {
    v.add("initial", "missing");
  }

  std::optional<IntegrationPlan> plan;
  if (root.contains("integration")) {
    plan = parse_integration(v, root["integration"]);
  } else {
    v.add("integration", "missing");
  }
  if (plan && graph && plan->method == IntegrationMethod::stepwise) {
    double product = graph->max_rate() * plan->dt;
    if (product > kStepGuard) {
      v.add("integration.dt",
            "step-size guard: max rate * dt = " + fmt17(product) +
                " exceeds " + fmt17(kStepGuard));
    }
  }

  std::vector<OutputKind> outputs;
  if (root.contains("outputs")) {
    outputs = parse_outputs(v, root["outputs"]);
  } else {
    v.add("outputs", "missing");
  }
  bool wants_reports = false;
  for (OutputKind kind : outputs) {
    if (kind == OutputKind::consistency_report && !measured) {
      v.add("measured_rate", "consistency_report needs a measured rate");
    }
    if (kind == OutputKind::rates_report ||
        kind == OutputKind::consistency_report) {
      wants_reports = true;
    }
  }
  if (wants_reports && (!rates.count("kS") || !rates.count("kT"))) {
    v.add("rates", "operator reports need kS and kT bindings");
  }

  if (!v.ok()) v.raise();

  return ScenarioConfig{kSchemaVersion, std::move(*graph),  std::move(rates),
                        std::move(*initial), *plan, std::move(outputs),
                        measured};
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::syntax_error, "cannot read '" + path.string() + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string timeseries_csv(const TimeSeries& series) {
  if (series.snapshots.empty()) {
    throw Error(Errc::invalid_argument, "empty time series");
  }
  const Eigen::Index dim = series.snapshots.front().dim();
  std::ostringstream out;
  out << "t";
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i; j < dim; ++j) {
      out << ",re_rho_" << (i + 1) << "_" << (j + 1) << ",im_rho_" << (i + 1)
          << "_" << (j + 1);
    }
  }
  out << ",trace,min_eig,herm_defect\n";
  for (std::size_t s = 0; s < series.snapshots.size(); ++s) {
    const Matrix& m = series.snapshots[s].matrix();
    out << fmt17(series.times[s]);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = i; j < dim; ++j) {
        out << "," << fmt17(m(i, j).real()) << "," << fmt17(m(i, j).imag());
      }
    }
    const SampleDiagnostics& d = series.diagnostics[s];
    out << "," << fmt17(d.trace) << "," << fmt17(d.min_eigenvalue) << ","
        << fmt17(d.hermiticity_defect) << "\n";
  }
  return out.str();
}

void write_timeseries_csv(const std::filesystem::path& path,
                          const TimeSeries& series) {
  atomic_write(path, timeseries_csv(series));
}

ConsistencyReport compare_operators(double ks, double kt, double q_extra,
                                    std::optional<double> measured_rate) {
  return maeda_consistency_check(measured_rate, ks, kt, q_extra);
}

std::string report_text(const ConsistencyReport& report) {
  std::ostringstream out;
  out << "singlet-triplet dephasing rates from recombination\n";
  out << "kS = " << fmt17(report.ks) << " 1/s, kT = " << fmt17(report.kt)
      << " 1/s, q = " << fmt17(report.q_extra) << " 1/s\n";
  if (report.measured_rate) {
    out << "measured dephasing rate = " << fmt17(*report.measured_rate)
        << " 1/s; operators must lie at or below it\n";
  }
  out << "\n";
  out << std::left << std::setw(16) << "operator" << std::setw(12) << "trace"
      << std::setw(26) << "st_rate (1/s)" << "verdict\n";
  for (const OperatorRateEntry& e : report.entries) {
    std::string verdict = "-";
    if (e.consistent.has_value()) {
      verdict = *e.consistent ? "ok" : "INCONSISTENT";
    }
    out << std::left << std::setw(16) << e.display << std::setw(12)
        << (e.trace_preserving ? "preserving" : "decreasing") << std::setw(26)
        << fmt17(e.st_rate) << verdict << "\n";
  }
  return out.str();
}

std::string report_json(const ConsistencyReport& report) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kS"] = report.ks;
  j["kT"] = report.kt;
  j["q"] = report.q_extra;
  if (report.measured_rate) {
    j["measured_rate"] = *report.measured_rate;
  } else {
    j["measured_rate"] = nullptr;
  }
  j["operators"] = json::array();
  for (const OperatorRateEntry& e : report.entries) {
    json oj;
    oj["name"] = e.name;
    oj["display"] = e.display;
    oj["st_dephasing_rate"] = e.st_rate;
    oj["trace"] = e.trace_preserving ? "preserving" : "decreasing";
    if (e.consistent.has_value()) {
      oj["consistent"] = *e.consistent;
    } else {
      oj["consistent"] = nullptr;
    }
    j["operators"].push_back(std::move(oj));
  }
  return j.dump(2) + "\n";
}

RunResult run(const ScenarioConfig& config, const RunOptions& options) {
  Generator generator = total_generator(config.graph);

  TimeSeries series;
  if (config.integration.method == IntegrationMethod::exact) {
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(config.integration.samples));
    for (int i = 0; i < config.integration.samples; ++i) {
      times.push_back(config.integration.t_final * i /
                      (config.integration.samples - 1));
    }
    series = propagate_exact_series(generator, config.initial, times);
  } else {
    const ReactionGraph& graph = config.graph;
    StepwiseOptions opts;
    opts.max_rate = graph.max_rate();
    opts.guard = kStepGuard;
    opts.samples = config.integration.samples;
    series = propagate_stepwise(
        [&graph](double dt) { return step_map(graph, dt, kStepGuard); },
        config.initial, config.integration.t_final, config.integration.dt,
        opts);
  }

  RunResult result{std::move(series), std::nullopt, std::nullopt, {}};

  std::filesystem::create_directories(options.output_dir);
  auto out_path = [&options](const std::string& suffix) {
    return options.output_dir / (options.stem + suffix);
  };

  auto report_for = [&config]() {
    double ks = config.rates.at("kS");
    double kt = config.rates.at("kT");
    double q = config.rates.count("q") ? config.rates.at("q") : 0.0;
    return compare_operators(ks, kt, q, config.measured_rate);
  };

  for (OutputKind kind : config.outputs) {
    switch (kind) {
      case OutputKind::timeseries: {
        std::filesystem::path p = out_path("_timeseries.csv");
        write_timeseries_csv(p, result.series);
        result.written.push_back(p);
        break;
      }
      case OutputKind::rates_report: {
        result.rates_report = report_for();
        std::filesystem::path txt = out_path("_rates_report.txt");
        std::filesystem::path js = out_path("_rates_report.json");
        atomic_write(txt, report_text(*result.rates_report));
        atomic_write(js, report_json(*result.rates_report));
        result.written.push_back(txt);
        result.written.push_back(js);
        break;
      }
      case OutputKind::consistency_report: {
        result.consistency_report = report_for();
        std::filesystem::path txt = out_path("_consistency_report.txt");
        std::filesystem::path js = out_path("_consistency_report.json");
        atomic_write(txt, report_text(*result.consistency_report));
        atomic_write(js, report_json(*result.consistency_report));
        result.written.push_back(txt);
        result.written.push_back(js);
        break;
      }
    }
  }
  return result;
}

}  // namespace qwalk
