#include "qext/io.hpp"

#include <fstream>
#include <sstream>

namespace qext::io {

std::string to_string(StateKind k) {
  switch (k) {
  case StateKind::Pure: return "pure";
  case StateKind::Mixed: return "mixed";
  case StateKind::Ensemble: return "ensemble";
  case StateKind::TripartitePure: return "pure (tripartite)";
  case StateKind::TripartiteMixed: return "mixed (tripartite)";
  }
  return "?";
}

namespace {

std::complex<double> parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw SchemaError(where + ": expected a number or a [re, im] pair");
}

CVectord parse_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array");
  CVectord v(Eigen::Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[Eigen::Index(i)] = parse_complex(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

CMatrixd parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + ": expected a non-empty array of rows");
  const std::size_t n = j.size();
  const auto size = static_cast<Eigen::Index>(n);
  CMatrixd m(size, size);
  for (std::size_t r = 0; r < n; ++r) {
    const std::string row = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != n)
      throw SchemaError(row + ": expected " + std::to_string(n) + " entries (square matrix)");
    for (std::size_t c = 0; c < n; ++c)
      m(Eigen::Index(r), Eigen::Index(c)) = parse_complex(j[r][c], row + "[" + std::to_string(c) + "]");
  }
  return m;
}

void require_length(Eigen::Index got, Eigen::Index want, const std::string& where) {
  if (got != want)
    throw SchemaError(where + ": length " + std::to_string(got) + " does not match dims product " +
                      std::to_string(want));
}

} // namespace

StateFile parse_state(const json& j) {
  if (!j.is_object()) throw SchemaError("state file: top level must be an object");
  if (!j.contains("dims") || !j["dims"].is_array()) throw SchemaError("state file: missing \"dims\" array");
  if (!j.contains("kind") || !j["kind"].is_string()) throw SchemaError("state file: missing \"kind\" string");
  StateFile f{StateKind::Pure, {}, {}, {}, {}, {}, {}};
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer() || d.get<int>() < 1) throw SchemaError("state file: dims must be positive integers");
    f.dims.push_back(d.get<int>());
  }
  if (j.contains("comment") && j["comment"].is_string()) f.comment = j["comment"].get<std::string>();
  const std::string kind = j["kind"].get<std::string>();
  Eigen::Index total = 1;
  for (int d : f.dims) total *= d;

  if (f.dims.size() == 3) {
    if (f.dims[0] != 2 || f.dims[1] != 2) throw SchemaError("state file: tripartite dims must be [2,2,d]");
    if (kind == "pure") {
      if (!j.contains("vector")) throw SchemaError("state file: pure state needs \"vector\"");
      CVectord v = parse_vector(j["vector"], "vector");
      require_length(v.size(), total, "vector");
      f.kind = StateKind::TripartitePure;
      f.tripartite.emplace(f.dims[2], std::move(v));
    } else if (kind == "mixed") {
      if (!j.contains("matrix")) throw SchemaError("state file: mixed state needs \"matrix\"");
      CMatrixd m = parse_matrix(j["matrix"], "matrix");
      require_length(m.rows(), total, "matrix");
      f.kind = StateKind::TripartiteMixed;
      f.tripartite.emplace(f.dims[2], std::move(m));
    } else {
      throw SchemaError("state file: tripartite kind must be \"pure\" or \"mixed\"");
    }
    return f;
  }
  if (f.dims.size() != 2) throw SchemaError("state file: dims must have 2 or 3 entries");
  const int da = f.dims[0], db = f.dims[1];
  if (kind == "pure") {
    if (!j.contains("vector")) throw SchemaError("state file: pure state needs \"vector\"");
    CVectord v = parse_vector(j["vector"], "vector");
    require_length(v.size(), total, "vector");
    f.kind = StateKind::Pure;
    f.pure.emplace(da, db, std::move(v));
  } else if (kind == "mixed") {
    if (!j.contains("matrix")) throw SchemaError("state file: mixed state needs \"matrix\"");
    CMatrixd m = parse_matrix(j["matrix"], "matrix");
    require_length(m.rows(), total, "matrix");
    f.kind = StateKind::Mixed;
    f.mixed.emplace(da, db, std::move(m));
  } else if (kind == "ensemble") {
    if (!j.contains("members") || !j["members"].is_array() || j["members"].empty())
      throw SchemaError("state file: ensemble needs a non-empty \"members\" array");
    std::vector<EnsembleMember<double>> members;
    for (std::size_t i = 0; i < j["members"].size(); ++i) {
      const auto& m = j["members"][i];
      const std::string where = "members[" + std::to_string(i) + "]";
      if (!m.is_object() || !m.contains("weight") || !m["weight"].is_number() || !m.contains("vector"))
        throw SchemaError(where + ": expected {\"weight\": p, \"vector\": [...]}");
      CVectord v = parse_vector(m["vector"], where + ".vector");
      require_length(v.size(), total, where + ".vector");
      members.push_back({m["weight"].get<double>(), PureStated(da, db, std::move(v))});
    }
    f.kind = StateKind::Ensemble;
    f.ensemble.emplace(std::move(members));
  } else {
    throw SchemaError("state file: unknown kind \"" + kind + "\" (expected pure, mixed or ensemble)");
  }
  return f;
}

StateFile load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open state file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError("state file '" + path + "': " + e.what());
  }
  try {
    return parse_state(j);
  } catch (const SchemaError& e) {
    throw SchemaError("'" + path + "': " + e.what());
  }
}

DensityMatrixd StateFile::density() const {
  if (pure) return pure->projector();
  if (mixed) return *mixed;
  if (ensemble) return ensemble->density();
  throw SchemaError("tripartite state where a bipartite state is required");
}

json complex_vector_json(const CVectord& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

json complex_matrix_json(const CMatrixd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(complex_vector_json(m.row(r).transpose()));
  return out;
}

namespace {

json header(int da, int db, const char* kind, const std::string& comment) {
  json j;
  if (!comment.empty()) j["comment"] = comment;
  j["dims"] = {da, db};
  j["kind"] = kind;
  return j;
}

} // namespace

json state_json(const PureStated& psi, const std::string& comment) {
  json j = header(psi.dim_a(), psi.dim_b(), "pure", comment);
  j["vector"] = complex_vector_json(psi.amplitudes());
  return j;
}

json state_json(const DensityMatrixd& rho, const std::string& comment) {
  json j = header(rho.dim_a(), rho.dim_b(), "mixed", comment);
  j["matrix"] = complex_matrix_json(rho.matrix());
  return j;
}

json state_json(const Ensembled& ens, const std::string& comment) {
  json j = header(ens.dim_a(), ens.dim_b(), "ensemble", comment);
  j["members"] = json::array();
  for (const auto& m : ens.members())
    j["members"].push_back({{"weight", m.weight}, {"vector", complex_vector_json(m.state.amplitudes())}});
  return j;
}

} // namespace qext::io
