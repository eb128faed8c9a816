#include "qext/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qext/applications.hpp"
#include "qext/cost.hpp"
#include "qext/io.hpp"
#include "qext/majorization.hpp"
#include "qext/measures.hpp"

namespace qext::cli {

namespace {

using io::json;
using Value = std::variant<double, long long, bool, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
};

struct Report {
  std::vector<std::pair<std::string, Value>> fields;
  std::vector<Table> tables;
  std::optional<json> extra;  // attached verbatim under "result" in json output

  void add(std::string key, Value v) { fields.emplace_back(std::move(key), std::move(v)); }
};

class InvariantFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

double round_sig(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x;
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return std::stod(os.str());
}

std::string text(const Value& v, int digits) {
  std::ostringstream os;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>)
          os << std::setprecision(digits) << x;
        else if constexpr (std::is_same_v<T, bool>)
          os << (x ? "true" : "false");
        else
          os << x;
      },
      v);
  return os.str();
}

json to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>)
          return std::isfinite(x) ? json(round_sig(x, 12)) : json(nullptr);
        else
          return json(x);
      },
      v);
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void emit(const Report& rep, const json& config, const std::vector<std::string>& command_line,
          const std::string& format, std::ostream& out) {
  if (format == "json") {
    json result = json::object();
    for (const auto& [k, v] : rep.fields) result[k] = to_json(v);
    for (const auto& t : rep.tables) {
      json rows = json::array();
      for (const auto& r : t.rows) {
        json row = json::object();
        for (std::size_t c = 0; c < t.columns.size(); ++c) row[t.columns[c]] = to_json(r[c]);
        rows.push_back(std::move(row));
      }
      result[t.name] = std::move(rows);
    }
    if (rep.extra)
      for (auto it = rep.extra->begin(); it != rep.extra->end(); ++it) result[it.key()] = it.value();
    json doc = {{"config", config}, {"command_line", command_line}, {"result", result}};
    out << doc.dump(2) << "\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> cfg;
  flatten(config, "", cfg);
  for (const auto& [k, v] : cfg) out << "# " << k << " = " << v << "\n";
  out << "# command_line =";
  for (const auto& a : command_line) out << " " << a;
  out << "\n";
  if (format == "csv") {
    out << "key,value\n";
    for (const auto& [k, v] : rep.fields) out << csv_cell(k) << "," << csv_cell(text(v, 6)) << "\n";
    for (const auto& t : rep.tables) {
      out << "# table " << t.name << "\n";
      for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << csv_cell(t.columns[c]);
      out << "\n";
      for (const auto& r : t.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << csv_cell(text(r[c], 6));
        out << "\n";
      }
    }
    return;
  }
  std::size_t width = 0;
  for (const auto& f : rep.fields) width = std::max(width, f.first.size());
  for (const auto& [k, v] : rep.fields) out << std::left << std::setw(int(width) + 2) << k << text(v, 6) << "\n";
  for (const auto& t : rep.tables) {
    out << "\n[" << t.name << "]\n";
    std::vector<std::size_t> w(t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) w[c] = t.columns[c].size();
    for (const auto& r : t.rows)
      for (std::size_t c = 0; c < r.size(); ++c) w[c] = std::max(w[c], text(r[c], 6).size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << std::left << std::setw(int(w[c]) + 2) << t.columns[c];
    out << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t c = 0; c < r.size(); ++c) out << std::left << std::setw(int(w[c]) + 2) << text(r[c], 6);
      out << "\n";
    }
  }
}

std::string vector_text(const RVectord& v) {
  std::ostringstream os;
  os << "(" << std::setprecision(6);
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

// Shortest of 15 or 17 significant digits that parses back to x.
std::string number_text(double x) {
  for (int digits : {15, 17}) {
    std::ostringstream os;
    os << std::setprecision(digits) << x;
    if (digits == 17 || std::stod(os.str()) == x) return os.str();
  }
  return {};
}

// Optimizer settings after merging defaults, the config file and flags.
struct OptimizerFlags {
  std::string config_file;
  std::optional<int> restarts, max_ensemble_size, max_iterations;
  std::optional<double> step_tolerance;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "INI file with an [optimizer] section");
    cmd->add_option("--restarts", restarts, "Seeded optimizer restarts");
    cmd->add_option("--max-ensemble-size", max_ensemble_size, "Largest ensemble size (0 = rank^2)");
    cmd->add_option("--max-iterations", max_iterations, "Compass sweeps per ensemble size");
    cmd->add_option("--step-tolerance", step_tolerance, "Stop once the rotation step falls below this");
    cmd->add_option("--seed", seed, "Random seed");
  }

  OptimizerConfig resolve() const {
    OptimizerConfig cfg;
    if (!config_file.empty()) {
      boost::property_tree::ptree tree;
      try {
        boost::property_tree::ini_parser::read_ini(config_file, tree);
      } catch (const boost::property_tree::ini_parser_error& e) {
        throw io::SchemaError(std::string("config file: ") + e.what());
      }
      for (const auto& [key, node] : tree) {
        if (key != "optimizer") throw io::SchemaError("config file: unknown section [" + key + "]");
        for (const auto& [name, value] : node) {
          try {
            if (name == "restarts") cfg.restarts = value.get_value<int>();
            else if (name == "max_ensemble_size") cfg.max_ensemble_size = value.get_value<int>();
            else if (name == "max_iterations") cfg.max_iterations = value.get_value<int>();
            else if (name == "step_tolerance") cfg.step_tolerance = value.get_value<double>();
            else if (name == "seed") cfg.seed = value.get_value<std::uint64_t>();
            else throw io::SchemaError("config file [optimizer]: unknown key '" + name + "'");
          } catch (const boost::property_tree::ptree_error&) {
            throw io::SchemaError("config file [optimizer]: bad value for '" + name + "': " + value.data());
          }
        }
      }
    }
    if (restarts) cfg.restarts = *restarts;
    if (max_ensemble_size) cfg.max_ensemble_size = *max_ensemble_size;
    if (max_iterations) cfg.max_iterations = *max_iterations;
    if (step_tolerance) cfg.step_tolerance = *step_tolerance;
    if (seed) cfg.seed = *seed;
    return cfg;
  }
};

json optimizer_json(const OptimizerConfig& cfg, int rank) {
  return {{"restarts", cfg.restarts},
          {"max_ensemble_size", cfg.max_ensemble_size > 0 ? cfg.max_ensemble_size : rank * rank},
          {"max_iterations", cfg.max_iterations},
          {"step_tolerance", cfg.step_tolerance},
          {"seed", cfg.seed}};
}

std::vector<std::string> optimizer_args(const OptimizerConfig& cfg, int rank) {
  return {"--restarts", std::to_string(cfg.restarts), "--max-ensemble-size",
          std::to_string(cfg.max_ensemble_size > 0 ? cfg.max_ensemble_size : rank * rank), "--max-iterations",
          std::to_string(cfg.max_iterations), "--step-tolerance", number_text(cfg.step_tolerance), "--seed",
          std::to_string(cfg.seed)};
}

void append(std::vector<std::string>& a, const std::vector<std::string>& b) { a.insert(a.end(), b.begin(), b.end()); }

// Closed forms for mixed two-qubit inputs.
std::optional<double> two_qubit_closed_form(const DensityMatrixd& rho, const std::string& id) {
  if (rho.dim_a() != 2 || rho.dim_b() != 2) return std::nullopt;
  const double c = wootters_concurrence(rho);
  const double low = 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - c * c)));
  if (id == "concurrence") return c;
  if (id == "geometric" || id == "e_k:2") return low;
  if (id == "entropy") return binary_entropy(low);
  if (id == "e_k:1") return 1.0;
  return std::nullopt;
}

void require_bipartite(const io::StateFile& f) {
  if (!f.bipartite()) throw ArgumentError("this command needs a bipartite state (dims [dA,dB])");
}

json state_config(const std::string& path, const io::StateFile& f) {
  return {{"path", path}, {"kind", io::to_string(f.kind)}, {"dims", f.dims}};
}

// Shared state for one invocation.
struct Context {
  std::string format = "table";
  std::ostream& out;
  std::ostream& err;
};

int cmd_measure(Context& ctx, const std::string& state_path, const std::string& measure_id) {
  const auto f = io::load_state(state_path);
  require_bipartite(f);
  const PureMeasure m = find_measure(measure_id);
  Report rep;
  rep.add("measure", m.id());
  if (f.pure) {
    const SchmidtVectord v = schmidt_vector(*f.pure);
    rep.add("value", m.evaluate(v));
    rep.add("method", std::string("Schmidt vector"));
    rep.add("schmidt_vector", vector_text(v.entries()));
  } else {
    const DensityMatrixd rho = f.density();
    if (rho.rank() == 1) {
      const Support sup = support_of(rho);
      const SchmidtVectord v = schmidt_vector(PureStated::normalized(rho.dim_a(), rho.dim_b(), sup.vectors.col(0)));
      rep.add("value", m.evaluate(v));
      rep.add("method", std::string("Schmidt vector of the pure input"));
    } else if (auto cf = two_qubit_closed_form(rho, m.id())) {
      rep.add("value", *cf);
      rep.add("method", std::string("two-qubit closed form (Wootters concurrence)"));
      rep.add("concurrence", wootters_concurrence(rho));
    } else {
      throw ArgumentError("no closed form for measure '" + m.id() +
                          "' on this mixed state; use `extend` or `roof` for an optimizer estimate");
    }
  }
  rep.add("concave_f", m.flags().concave_f);
  rep.add("convex_on_spectra", m.flags().convex_on_spectra);
  rep.add("subadditive", m.flags().subadditive);
  json config = {{"command", "measure"}, {"state", state_config(state_path, f)}, {"measure", m.id()},
                 {"format", ctx.format}};
  emit(rep, config, {"measure", "--state", state_path, "--measure", m.id(), "--format", ctx.format}, ctx.format,
       ctx.out);
  return kOk;
}

int cmd_estimate(Context& ctx, bool extension, const std::string& state_path, const std::string& measure_id,
                 const OptimizerFlags& flags, const std::string& ensemble_out) {
  const auto f = io::load_state(state_path);
  require_bipartite(f);
  const PureMeasure m = find_measure(measure_id);
  const DensityMatrixd rho = f.density();
  const OptimizerConfig cfg = flags.resolve();
  const int rank = rho.rank();
  const EstimateResult res = extension ? extension_measure(rho, m, cfg) : convex_roof(rho, m, cfg);
  const double check = extension ? extension_objective(res.best_ensemble, m) : roof_objective(res.best_ensemble, m);
  if (std::abs(check - res.value) > 1e-12)
    throw InvariantFailure("reported value differs from the objective of the reported ensemble by " +
                           std::to_string(std::abs(check - res.value)));
  const double recon = trace_distance(res.best_ensemble.density(), rho);
  if (recon > 1e-8) throw InvariantFailure("best ensemble does not reconstruct rho (" + std::to_string(recon) + ")");

  Report rep;
  rep.add("measure", m.id());
  rep.add("estimator", std::string(extension ? "extension (upper bound)" : "convex roof (upper bound)"));
  rep.add("value", res.value);
  if (auto cf = two_qubit_closed_form(rho, m.id())) {
    rep.add("closed_form", *cf);
    rep.add("excess", res.value - *cf);
  }
  rep.add("rank", static_cast<long long>(rank));
  rep.add("converged", res.converged);
  rep.add("evaluations", static_cast<long long>(res.evaluations));
  rep.add("best_restart", static_cast<long long>(res.best_restart));
  rep.add("ensemble_size", static_cast<long long>(res.best_ensemble.size()));
  rep.add("reconstruction_error", recon);
  if (extension) rep.add("average_schmidt", vector_text(average_schmidt(res.best_ensemble).entries()));
  if (!ensemble_out.empty()) {
    std::ofstream os(ensemble_out);
    if (!os) throw io::SchemaError("cannot write ensemble file '" + ensemble_out + "'");
    os << io::state_json(res.best_ensemble, std::string("best ") + (extension ? "extension" : "roof") + " ensemble for " +
                                                state_path + ", measure " + m.id())
              .dump(2)
       << "\n";
    rep.add("ensemble_out", ensemble_out);
  }
  const char* name = extension ? "extend" : "roof";
  json config = {{"command", name},       {"state", state_config(state_path, f)}, {"measure", m.id()},
                 {"optimizer", optimizer_json(cfg, rank)}, {"format", ctx.format}};
  if (!flags.config_file.empty()) config["config_file"] = flags.config_file;
  std::vector<std::string> line = {name, "--state", state_path, "--measure", m.id()};
  append(line, optimizer_args(cfg, rank));
  append(line, {"--format", ctx.format});
  emit(rep, config, line, ctx.format, ctx.out);
  return kOk;
}

int cmd_convert(Context& ctx, const std::string& source_path, const std::string& target_path) {
  const auto src = io::load_state(source_path);
  const auto tgt = io::load_state(target_path);
  require_bipartite(src);
  require_bipartite(tgt);
  if (!src.pure) throw ArgumentError("convert-check: the source must be a pure state");
  const SchmidtVectord x = schmidt_vector(*src.pure);
  std::optional<SchmidtVectord> y;
  std::string criterion;
  if (tgt.pure) {
    y = schmidt_vector(*tgt.pure);
    criterion = "deterministic (Nielsen majorization)";
  } else if (tgt.ensemble) {
    y = average_schmidt(*tgt.ensemble);
    criterion = "to ensemble (Jonathan-Plenio majorization by the average Schmidt vector)";
  } else {
    throw ArgumentError("convert-check: the target must be a pure state or an ensemble");
  }
  const bool ok = majorizes(x, *y);
  Report rep;
  rep.add("criterion", criterion);
  rep.add("convertible", ok);
  rep.add("source_schmidt", vector_text(x.entries()));
  rep.add("target_schmidt", vector_text(y->entries()));
  Table t{"partial_sums", {"k", "source", "target", "slack"}, {}};
  const int n = std::max(x.size(), y->size());
  for (int k = 1; k <= n; ++k)
    t.rows.push_back({static_cast<long long>(k), x.partial_sum(k), y->partial_sum(k), y->partial_sum(k) - x.partial_sum(k)});
  rep.tables.push_back(std::move(t));
  json config = {{"command", "convert-check"},
                 {"source", state_config(source_path, src)},
                 {"target", state_config(target_path, tgt)},
                 {"format", ctx.format}};
  emit(rep, config,
       {"convert-check", "--source", source_path, "--target", target_path, "--format", ctx.format}, ctx.format,
       ctx.out);
  return kOk;
}

int cmd_cost(Context& ctx, const std::string& state_path, double eps, int grid, std::uint64_t seed) {
  const auto f = io::load_state(state_path);
  require_bipartite(f);
  if (!f.pure) throw ArgumentError("cost: only pure states are supported");
  const SchmidtVectord v = schmidt_vector(*f.pure);
  CostResult c{};
  try {
    c = one_shot_cost(v);
  } catch (const ValidationError& e) {
    throw InvariantFailure(e.what());
  }
  const int d = std::min(f.pure->dim_a(), f.pure->dim_b());
  Report rep;
  rep.add("r_min", static_cast<long long>(c.r_min));
  rep.add("log_cost", c.log_cost);
  rep.add("r_min_formula", static_cast<long long>(one_shot_r_min_formula(v)));
  rep.add("entropy", entropy_of_entanglement(v));
  rep.add("smoothed_cost_upper", smoothed_cost_pure_upper(*f.pure, eps, grid, seed));
  if (d >= 2) rep.add("eof_continuity_bound", eof_continuity_bound(eps, d));
  json config = {{"command", "cost"}, {"state", state_config(state_path, f)}, {"eps", eps}, {"grid", grid},
                 {"seed", seed},      {"format", ctx.format}};
  emit(rep, config,
       {"cost", "--state", state_path, "--eps", number_text(eps), "--grid", std::to_string(grid), "--seed",
        std::to_string(seed), "--format", ctx.format},
       ctx.format, ctx.out);
  return kOk;
}

int cmd_example_sepp(Context& ctx, int grid) {
  const PureStated psi = max_entangled(3, 4, 4);
  const Ensembled ens = example_ensemble();
  const SeppReport s = sepp_feasible(3, ens, grid);
  Report rep;
  Table t{"states", {"state", "schmidt_vector", "robustness", "schmidt_number"}, {}};
  auto row = [&](const char* name, const PureStated& p) {
    const SchmidtVectord v = schmidt_vector(p);
    t.rows.push_back({std::string(name), vector_text(v.entries()), robustness_pure(v), static_cast<long long>(schmidt_rank(v))});
  };
  row("psi", psi);
  row("phi1", ens.members()[0].state);
  row("phi2", ens.members()[1].state);
  t.rows.push_back({std::string("rho = 1/4 phi1 + 3/4 phi2"), vector_text(average_schmidt(ens).entries()),
                    s.r_target_upper, static_cast<long long>(s.schmidt_target)});
  rep.tables.push_back(std::move(t));
  const auto span = min_schmidt_rank_in_span({ens.members()[0].state, ens.members()[1].state}, grid);
  rep.add("R(psi)", s.r_source);
  rep.add("R(rho) upper (weighted)", s.r_target_upper);
  rep.add("R(rho) upper (max member)", s.r_target_max);
  rep.add("sepp_feasible", s.sepp_feasible);
  rep.add("schmidt_source", static_cast<long long>(s.schmidt_source));
  rep.add("schmidt_target", static_cast<long long>(s.schmidt_target));
  rep.add("schmidt_certificate_margin", s.schmidt_margin);
  rep.add("span_min_rank", static_cast<long long>(span.min_rank));
  rep.add("span_mesh_margin", span.margin);
  rep.add("verdict", s.verdict);
  json config = {{"command", "example-sepp"}, {"grid", grid}, {"format", ctx.format}};
  emit(rep, config, {"example-sepp", "--grid", std::to_string(grid), "--format", ctx.format}, ctx.format, ctx.out);
  return kOk;
}

int cmd_monogamy(Context& ctx, const std::string& state_path, double tol_eq, double tol_zero,
                 const OptimizerFlags& flags) {
  const auto f = io::load_state(state_path);
  if (!f.tripartite) throw ArgumentError("monogamy: the state must have dims [2,2,d]");
  const OptimizerConfig cfg = flags.resolve();
  const MonogamyReport m = monogamy_check(*f.tripartite, tol_eq, tol_zero, cfg);
  Report rep;
  rep.add("C_A|BC", m.c_a_bc);
  rep.add("C_AB", m.c_ab);
  rep.add("C_AC", m.c_ac);
  rep.add("C_AC_method", std::string(m.c_ac_exact ? "Wootters closed form" : "convex roof estimate (upper bound)"));
  rep.add("C_AC_converged", m.c_ac_converged);
  rep.add("verdict", to_string(m.verdict));
  rep.add("ckw_gap (CKW cross-check, not a monogamy claim)", m.ckw_gap);
  const int dc = f.tripartite->dim_c();
  json config = {{"command", "monogamy"}, {"state", state_config(state_path, f)}, {"tol_eq", tol_eq},
                 {"tol_zero", tol_zero},  {"format", ctx.format}};
  if (dc != 2) config["optimizer"] = optimizer_json(cfg, 2 * dc);
  std::vector<std::string> line = {"monogamy",        "--state", state_path, "--tol-eq", number_text(tol_eq),
                                   "--tol-zero", number_text(tol_zero)};
  if (dc != 2) append(line, optimizer_args(cfg, f.tripartite->marginal(Party::B).rank()));
  append(line, {"--format", ctx.format});
  emit(rep, config, line, ctx.format, ctx.out);
  return (m.verdict == MonogamyVerdict::Fail && m.c_ac_exact) ? kInvariantFailure : kOk;
}

int cmd_verify(Context& ctx, bool quick, std::uint64_t seed) {
  verify::Options opt;
  opt.quick = quick;
  opt.seed = seed;
  const auto checks = verify::run_all(opt);
  Report rep;
  Table t{"checks", {"module", "check", "class", "status", "measured", "bound", "note"}, {}};
  int hard_failures = 0, soft_failures = 0;
  for (const auto& c : checks) {
    const std::string cls = c.informational ? "report" : (c.hard ? "hard" : "soft");
    const std::string status = c.informational ? "INFO" : (c.passed ? "PASS" : "FAIL");
    if (!c.informational && !c.passed) (c.hard ? hard_failures : soft_failures)++;
    t.rows.push_back({c.module, c.name, cls, status, c.measured, c.bound, c.note});
  }
  rep.add("checks", static_cast<long long>(checks.size()));
  rep.add("hard_failures", static_cast<long long>(hard_failures));
  rep.add("soft_failures", static_cast<long long>(soft_failures));
  rep.tables.push_back(std::move(t));
  json config = {{"command", "verify"},        {"quick", quick}, {"seed", seed},
                 {"optimizer", optimizer_json(opt.optimizer, 0)}, {"format", ctx.format}};
  config["optimizer"]["max_ensemble_size"] = "rank^2";
  std::vector<std::string> line = {"verify", "--seed", std::to_string(seed), "--format", ctx.format};
  if (quick) line.push_back("--quick");
  emit(rep, config, line, ctx.format, ctx.out);
  return hard_failures > 0 ? kInvariantFailure : kOk;
}

int cmd_random(Context& ctx, const std::vector<int>& dims, int rank, std::uint64_t seed, const std::string& out_path) {
  if (dims.size() != 2) throw ArgumentError("random: --dims takes two local dimensions");
  std::vector<std::string> line = {"random", "--dims", std::to_string(dims[0]), std::to_string(dims[1]), "--rank",
                                   std::to_string(rank), "--seed", std::to_string(seed)};
  std::string joined;
  for (const auto& a : line) joined += (joined.empty() ? "" : " ") + a;
  const std::string comment = "generated by: qext " + joined;
  const json state = rank == 0 ? io::state_json(random_pure<double>(dims[0], dims[1], seed), comment)
                               : io::state_json(random_density<double>(dims[0], dims[1], rank, seed), comment);
  if (out_path.empty()) {
    ctx.out << state.dump(2) << "\n";
    return kOk;
  }
  std::ofstream os(out_path);
  if (!os) throw io::SchemaError("cannot write '" + out_path + "'");
  os << state.dump(2) << "\n";
  Report rep;
  rep.add("written", out_path);
  rep.add("kind", std::string(rank == 0 ? "pure" : "mixed"));
  json config = {{"command", "random"}, {"dims", dims}, {"rank", rank}, {"seed", seed}, {"out", out_path},
                 {"format", ctx.format}};
  append(line, {"--out", out_path, "--format", ctx.format});
  emit(rep, config, line, ctx.format, ctx.out);
  return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement measures from pure-state measures: extension and convex-roof estimators"};
  app.require_subcommand(1);
  Context ctx{"table", out, err};
  const std::map<std::string, std::string> formats{{"table", "table"}, {"csv", "csv"}, {"json", "json"}};

  std::string state, measure_id, source, target, ensemble_out, out_path;
  OptimizerFlags opt_extend, opt_roof, opt_mono;
  double eps = 0.1, tol_eq = 1e-3, tol_zero = 5e-2;
  int grid = 2000, sepp_grid = 1000, rank = 0;
  std::uint64_t seed = 1, verify_seed = 7;
  bool quick = false;
  std::vector<int> dims;

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", ctx.format, "Output format")->transform(CLI::CheckedTransformer(formats));
  };

  auto* measure = app.add_subcommand("measure", "Evaluate a measure on a pure state or by closed form");
  measure->add_option("--state", state, "State file")->required();
  measure->add_option("--measure", measure_id, "Measure id")->required();
  add_format(measure);

  auto* extend = app.add_subcommand("extend", "Estimate the extension measure by decomposition search");
  extend->add_option("--state", state, "State file")->required();
  extend->add_option("--measure", measure_id, "Measure id")->required();
  extend->add_option("--ensemble-out", ensemble_out, "Write the best ensemble as a state file");
  opt_extend.attach(extend);
  add_format(extend);

  auto* roof = app.add_subcommand("roof", "Estimate the convex roof by decomposition search");
  roof->add_option("--state", state, "State file")->required();
  roof->add_option("--measure", measure_id, "Measure id")->required();
  roof->add_option("--ensemble-out", ensemble_out, "Write the best ensemble as a state file");
  opt_roof.attach(roof);
  add_format(roof);

  auto* convert = app.add_subcommand("convert-check", "LOCC convertibility of a pure state by majorization");
  convert->add_option("--source", source, "Pure source state file")->required();
  convert->add_option("--target", target, "Pure or ensemble target file")->required();
  add_format(convert);

  auto* cost = app.add_subcommand("cost", "One-shot and smoothed entanglement cost of a pure state");
  cost->add_option("--state", state, "State file")->required();
  cost->add_option("--eps", eps, "Smoothing radius in trace distance")->check(CLI::Range(0.0, 1.0));
  cost->add_option("--grid", grid, "Smoothing candidates")->check(CLI::PositiveNumber);
  cost->add_option("--seed", seed, "Seed for random candidates");
  add_format(cost);

  auto* sepp = app.add_subcommand("example-sepp", "Reproduce the SEPP-versus-LOCC Schmidt number example");
  sepp->add_option("--grid", sepp_grid, "Span-search mesh size")->check(CLI::PositiveNumber);
  add_format(sepp);

  auto* mono = app.add_subcommand("monogamy", "Concurrence monogamy check on a pure 2x2xd state");
  mono->add_option("--state", state, "State file with dims [2,2,d]")->required();
  mono->add_option("--tol-eq", tol_eq, "Tolerance for C_A|BC = C_AB");
  mono->add_option("--tol-zero", tol_zero, "Tolerance for C_AC = 0");
  opt_mono.attach(mono);
  add_format(mono);

  auto* verify = app.add_subcommand("verify", "Run the property suites of every module");
  verify->add_flag("--quick", quick, "Smaller sample counts");
  verify->add_option("--seed", verify_seed, "Suite seed");
  add_format(verify);

  auto* random = app.add_subcommand("random", "Write a seeded random state file");
  random->add_option("--dims", dims, "Local dimensions dA dB")->required()->expected(2);
  random->add_option("--rank", rank, "Mixed-state rank (0 = pure)");
  random->add_option("--seed", seed, "Seed");
  random->add_option("--out", out_path, "Output file (stdout when omitted)");
  add_format(random);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*measure) return cmd_measure(ctx, state, measure_id);
    if (*extend) return cmd_estimate(ctx, true, state, measure_id, opt_extend, ensemble_out);
    if (*roof) return cmd_estimate(ctx, false, state, measure_id, opt_roof, ensemble_out);
    if (*convert) return cmd_convert(ctx, source, target);
    if (*cost) return cmd_cost(ctx, state, eps, grid, seed);
    if (*sepp) return cmd_example_sepp(ctx, sepp_grid);
    if (*mono) return cmd_monogamy(ctx, state, tol_eq, tol_zero, opt_mono);
    if (*verify) return cmd_verify(ctx, quick, verify_seed);
    if (*random) return cmd_random(ctx, dims, rank, seed, out_path);
  } catch (const InvariantFailure& e) {
    err << "invariant failure: " << e.what() << "\n";
    return kInvariantFailure;
  } catch (const io::SchemaError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ValidationError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ArgumentError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

} // namespace qext::cli
