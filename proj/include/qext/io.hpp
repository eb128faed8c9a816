#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qext/applications.hpp"
#include "qext/ensemble.hpp"
#include "qext/state.hpp"

namespace qext::io {

using json = nlohmann::json;

/// Raised for unreadable files and schema violations.
class SchemaError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class StateKind { Pure, Mixed, Ensemble, TripartitePure, TripartiteMixed };
std::string to_string(StateKind k);

/// One parsed state file. Exactly the member matching `kind` is set.
struct StateFile {
  StateKind kind;
  std::vector<int> dims;
  std::string comment;
  std::optional<PureStated> pure;
  std::optional<DensityMatrixd> mixed;
  std::optional<Ensembled> ensemble;
  std::optional<TripartiteState> tripartite;

  bool bipartite() const { return dims.size() == 2; }
  /// ψψ†, ρ, or Σ p_i ψ_i ψ_i† for bipartite files.
  DensityMatrixd density() const;
};

/// Schema:
///   {"dims":[dA,dB],"kind":"pure","vector":[[re,im],...]}
///   {"dims":[dA,dB],"kind":"mixed","matrix":[[[re,im],...],...]}
///   {"dims":[dA,dB],"kind":"ensemble","members":[{"weight":p,"vector":[...]},...]}
/// with "dims":[2,2,d] selecting a tripartite state. Plain numbers are accepted
/// as real entries, and an optional "comment" string is preserved.
/// Invariant violations surface as ValidationError, shape problems as SchemaError.
StateFile parse_state(const json& j);
StateFile load_state(const std::string& path);

json complex_vector_json(const CVectord& v);
json complex_matrix_json(const CMatrixd& m);
json state_json(const PureStated& psi, const std::string& comment = {});
json state_json(const DensityMatrixd& rho, const std::string& comment = {});
json state_json(const Ensembled& ens, const std::string& comment = {});

} // namespace qext::io
