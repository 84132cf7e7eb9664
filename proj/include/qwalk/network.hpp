#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qwalk/generators.hpp"

namespace qwalk {

/// Directed population transfer from -> to. rate in 1/s; a NaN rate with a
/// nonempty symbol is a placeholder bound later via bind_rates.
struct DampingEdge {
  int from = 0;
  int to = 0;
  double rate = std::numeric_limits<double>::quiet_NaN();
  std::string symbol;
};

/// Directed coherence decay; the projector acts on the second index k.
struct DephasingEdge {
  int j = 0;
  int k = 0;
  double rate = std::numeric_limits<double>::quiet_NaN();
  std::string symbol;
};

/// Undirected coherent coupling with per-site energies (rad/s).
struct CoherentEdge {
  int j = 0;
  int k = 0;
  double omega_j = std::numeric_limits<double>::quiet_NaN();
  double omega_k = std::numeric_limits<double>::quiet_NaN();
  double coupling = std::numeric_limits<double>::quiet_NaN();
  std::string omega_j_symbol;
  std::string omega_k_symbol;
  std::string coupling_symbol;
};

using Edge = std::variant<DampingEdge, DephasingEdge, CoherentEdge>;

struct Node {
  int site = 0;  // 1-based
  std::string name;
};

/// Labelled reaction network. Immutable after construction; construction
/// validates endpoints, duplicate edges, rate signs, and per-site energy
/// consistency across coherent edges.
class ReactionGraph {
 public:
  ReactionGraph(int n_sites, std::vector<Node> nodes, std::vector<Edge> edges);

  int n_sites() const { return n_sites_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Largest bound damping/dephasing rate; 0 for purely coherent graphs.
  double max_rate() const;

  /// True when some edge still carries an unbound symbolic rate.
  bool has_unbound_rates() const;

 private:
  int n_sites_ = 0;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
};

enum class BuiltinGraph {
  standard_rp,             // four sites, two recombination channels
  lumped_products,         // three sites, both channels drain into site 2
  experiment_rp,           // standard_rp + coherent 1<->3 + extra dephasing
  symmetric_dephasing_rp,  // dephasing (3,1) and (1,3) at one shared rate
};

/// Canonical graphs with symbolic rate placeholders (kS, kT, q, wS, wT,
/// Omega) to be bound by the caller.
ReactionGraph builtin_graph(BuiltinGraph which);
/// Lookup by config-facing name: "StandardRP", "LumpedProducts",
/// "ExperimentRP", "SymmetricDephasingRP".
ReactionGraph builtin_graph(const std::string& name);

/// Resolves symbolic rates against named bindings. Unbound symbols throw.
ReactionGraph bind_rates(const ReactionGraph& graph,
                         const std::map<std::string, double>& bindings);

/// Site/name basis induced by the graph's nodes.
Basis graph_basis(const ReactionGraph& graph);

/// Sum of per-edge generators, ordered damping, dephasing, coherent.
/// An edgeless graph yields the zero generator and a note in `warnings`.
Generator total_generator(const ReactionGraph& graph,
                          std::vector<std::string>* warnings = nullptr);

/// One-step map: composition of per-edge maps, earlier-declared edges
/// acting first. Rate-to-probability conversions (rate * dt) are appended
/// to `log` when given. Refuses steps with max_rate * dt > guard.
KrausMap step_map(const ReactionGraph& graph, double dt, double guard = 0.1,
                  std::vector<std::string>* log = nullptr);

}  // namespace qwalk
