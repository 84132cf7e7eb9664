#include "qwalk/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

namespace qwalk {

namespace {

bool bound(double rate) { return !std::isnan(rate); }

void check_endpoint(int site, int n_sites, const char* what) {
  if (site < 1 || site > n_sites) {
    std::ostringstream msg;
    msg << what << " endpoint " << site << " outside 1.." << n_sites;
    throw Error(Errc::bad_indices, msg.str());
  }
}

void check_edge_rate(double rate, const std::string& symbol,
                     const char* what) {
  if (bound(rate) && rate < 0.0) {
    std::ostringstream msg;
    msg << what << " rate must be nonnegative, got " << rate;
    throw Error(Errc::bad_rates, msg.str());
  }
  if (!bound(rate) && symbol.empty()) {
    std::ostringstream msg;
    msg << what << " edge has neither a value nor a rate symbol";
    throw Error(Errc::bad_rates, msg.str());
  }
}

std::string require_bound(double rate, const std::string& symbol) {
  if (!bound(rate)) {
    throw Error(Errc::bad_rates,
                "rate symbol '" + symbol + "' is unbound; bind_rates first");
  }
  return symbol;
}

}  // namespace

ReactionGraph::ReactionGraph(int n_sites, std::vector<Node> nodes,
                             std::vector<Edge> edges)
    : n_sites_(n_sites), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  if (n_sites_ < 1) {
    throw Error(Errc::invalid_argument, "graph needs at least one site");
  }
  if (nodes_.empty()) {
    for (int s = 1; s <= n_sites_; ++s) {
      nodes_.push_back({s, "psi" + std::to_string(s)});
    }
  }
  std::set<int> seen_sites;
  std::set<std::string> seen_names;
  for (const Node& node : nodes_) {
    check_endpoint(node.site, n_sites_, "node");
    if (!seen_sites.insert(node.site).second) {
      throw Error(Errc::bad_indices,
                  "duplicate node for site " + std::to_string(node.site));
    }
    if (!node.name.empty() && !seen_names.insert(node.name).second) {
      throw Error(Errc::bad_indices, "duplicate node name '" + node.name + "'");
    }
  }
  if (static_cast<int>(nodes_.size()) != n_sites_) {
    throw Error(Errc::bad_indices,
                "graph declares " + std::to_string(n_sites_) +
                    " sites but lists " + std::to_string(nodes_.size()) +
                    " nodes");
  }
  std::sort(nodes_.begin(), nodes_.end(),
            [](const Node& a, const Node& b) { return a.site < b.site; });

  std::set<std::tuple<int, int, int>> seen_edges;  // (kind, a, b)
  std::map<int, double> site_energy;
  for (const Edge& edge : edges_) {
    if (const auto* d = std::get_if<DampingEdge>(&edge)) {
      check_endpoint(d->from, n_sites_, "damping");
      check_endpoint(d->to, n_sites_, "damping");
      if (d->from == d->to) {
        throw Error(Errc::bad_indices, "damping edge needs distinct sites");
      }
      check_edge_rate(d->rate, d->symbol, "damping");
      if (!seen_edges.insert({0, d->from, d->to}).second) {
        throw Error(Errc::bad_indices,
                    "duplicate damping edge " + std::to_string(d->from) +
                        "->" + std::to_string(d->to));
      }
    } else if (const auto* s = std::get_if<DephasingEdge>(&edge)) {
      check_endpoint(s->j, n_sites_, "dephasing");
      check_endpoint(s->k, n_sites_, "dephasing");
      if (s->j == s->k) {
        throw Error(Errc::bad_indices, "dephasing edge needs distinct sites");
      }
      check_edge_rate(s->rate, s->symbol, "dephasing");
      if (!seen_edges.insert({1, s->j, s->k}).second) {
        throw Error(Errc::bad_indices,
                    "duplicate dephasing edge (" + std::to_string(s->j) +
                        ", " + std::to_string(s->k) + ")");
      }
    } else if (const auto* c = std::get_if<CoherentEdge>(&edge)) {
      check_endpoint(c->j, n_sites_, "coherent");
      check_endpoint(c->k, n_sites_, "coherent");
      if (c->j == c->k) {
        throw Error(Errc::bad_indices, "coherent edge needs distinct sites");
      }
      int a = std::min(c->j, c->k), b = std::max(c->j, c->k);
      if (!seen_edges.insert({2, a, b}).second) {
        throw Error(Errc::bad_indices,
                    "duplicate coherent edge (" + std::to_string(a) + ", " +
                        std::to_string(b) + ")");
      }
      for (auto [value, symbol] :
           {std::pair{c->omega_j, &c->omega_j_symbol},
            std::pair{c->omega_k, &c->omega_k_symbol},
            std::pair{c->coupling, &c->coupling_symbol}}) {
        if (!bound(value) && symbol->empty()) {
          throw Error(Errc::bad_rates,
                      "coherent edge parameter has neither a value nor a "
                      "symbol");
        }
        if (bound(value) && !std::isfinite(value)) {
          throw Error(Errc::bad_rates,
                      "coherent edge parameter must be finite");
        }
      }
      // Site energies come from the coupling Hamiltonians; two coherent
      // edges sharing a site must agree on its energy.
      for (auto [site, omega] : {std::pair{c->j, c->omega_j},
                                 std::pair{c->k, c->omega_k}}) {
        if (!bound(omega)) continue;
        auto [it, inserted] = site_energy.emplace(site, omega);
        if (!inserted && it->second != omega) {
          std::ostringstream msg;
          msg << "coherent edges disagree on site " << site
              << " energy: " << it->second << " vs " << omega
              << "; use one energy per site";
          throw Error(Errc::invalid_argument, msg.str());
        }
      }
    }
  }
}

double ReactionGraph::max_rate() const {
  double m = 0.0;
  for (const Edge& edge : edges_) {
    if (const auto* d = std::get_if<DampingEdge>(&edge)) {
      if (bound(d->rate)) m = std::max(m, d->rate);
    } else if (const auto* s = std::get_if<DephasingEdge>(&edge)) {
      if (bound(s->rate)) m = std::max(m, s->rate);
    }
  }
  return m;
}

bool ReactionGraph::has_unbound_rates() const {
  for (const Edge& edge : edges_) {
    if (const auto* d = std::get_if<DampingEdge>(&edge)) {
      if (!bound(d->rate)) return true;
    } else if (const auto* s = std::get_if<DephasingEdge>(&edge)) {
      if (!bound(s->rate)) return true;
    } else if (const auto* c = std::get_if<CoherentEdge>(&edge)) {
      if (!bound(c->omega_j) || !bound(c->omega_k) || !bound(c->coupling)) {
        return true;
      }
    }
  }
  return false;
}

ReactionGraph builtin_graph(BuiltinGraph which) {
  auto damping = [](int from, int to, std::string symbol) {
    DampingEdge e;
    e.from = from;
    e.to = to;
    e.symbol = std::move(symbol);
    return Edge(e);
  };
  auto deph = [](int j, int k, std::string symbol) {
    DephasingEdge e;
    e.j = j;
    e.k = k;
    e.symbol = std::move(symbol);
    return Edge(e);
  };
  switch (which) {
    case BuiltinGraph::standard_rp:
      return ReactionGraph(
          4, {{1, "S"}, {2, "P_S"}, {3, "T"}, {4, "P_T"}},
          {damping(1, 2, "kS"), damping(3, 4, "kT")});
    case BuiltinGraph::lumped_products:
      return ReactionGraph(3, {{1, "S"}, {2, "P"}, {3, "T"}},
                           {damping(1, 2, "kS"), damping(3, 2, "kT")});
    case BuiltinGraph::experiment_rp: {
      CoherentEdge c;
      c.j = 1;
      c.k = 3;
      c.omega_j_symbol = "wS";
      c.omega_k_symbol = "wT";
      c.coupling_symbol = "Omega";
      return ReactionGraph(
          4, {{1, "S"}, {2, "P_S"}, {3, "T"}, {4, "P_T"}},
          {damping(1, 2, "kS"), damping(3, 4, "kT"), Edge(c),
           deph(3, 1, "q")});
    }
    case BuiltinGraph::symmetric_dephasing_rp:
      return ReactionGraph(4, {{1, "S"}, {2, "P_S"}, {3, "T"}, {4, "P_T"}},
                           {deph(3, 1, "q"), deph(1, 3, "q")});
  }
  throw Error(Errc::unknown_name, "unhandled builtin graph");
}

ReactionGraph builtin_graph(const std::string& name) {
  if (name == "StandardRP") return builtin_graph(BuiltinGraph::standard_rp);
  if (name == "LumpedProducts") {
    return builtin_graph(BuiltinGraph::lumped_products);
  }
  if (name == "ExperimentRP") return builtin_graph(BuiltinGraph::experiment_rp);
  if (name == "SymmetricDephasingRP") {
    return builtin_graph(BuiltinGraph::symmetric_dephasing_rp);
  }
  throw Error(Errc::unknown_name,
              "unknown builtin graph '" + name +
                  "'; expected StandardRP, LumpedProducts, ExperimentRP, or "
                  "SymmetricDephasingRP");
}

ReactionGraph bind_rates(const ReactionGraph& graph,
                         const std::map<std::string, double>& bindings) {
  auto lookup = [&bindings](double current, const std::string& symbol) {
    if (symbol.empty()) return current;
    auto it = bindings.find(symbol);
    if (it != bindings.end()) return it->second;
    if (bound(current)) return current;
    throw Error(Errc::bad_rates, "no binding for rate symbol '" + symbol +
                                     "'");
  };
  std::vector<Edge> edges = graph.edges();
  for (Edge& edge : edges) {
    if (auto* d = std::get_if<DampingEdge>(&edge)) {
      d->rate = lookup(d->rate, d->symbol);
    } else if (auto* s = std::get_if<DephasingEdge>(&edge)) {
      s->rate = lookup(s->rate, s->symbol);
    } else if (auto* c = std::get_if<CoherentEdge>(&edge)) {
      c->omega_j = lookup(c->omega_j, c->omega_j_symbol);
      c->omega_k = lookup(c->omega_k, c->omega_k_symbol);
      c->coupling = lookup(c->coupling, c->coupling_symbol);
    }
  }
  return ReactionGraph(graph.n_sites(), graph.nodes(), std::move(edges));
}

Basis graph_basis(const ReactionGraph& graph) {
  Basis basis;
  basis.reserve(graph.nodes().size());
  for (const Node& node : graph.nodes()) {
    BasisLabel label;
    label.site = node.site;
    label.name = node.name;
    basis.push_back(std::move(label));
  }
  return basis;
}

Generator total_generator(const ReactionGraph& graph,
                          std::vector<std::string>* warnings) {
  const Eigen::Index dim = graph.n_sites();
  Generator total = Generator::zero(dim);
  if (graph.edges().empty()) {
    if (warnings) warnings->push_back("graph has no edges; zero generator");
    return total;
  }
  for (const Edge& edge : graph.edges()) {
    if (const auto* d = std::get_if<DampingEdge>(&edge)) {
      require_bound(d->rate, d->symbol);
      total += Generator::amplitude_damping(d->to, d->from, d->rate, dim);
    }
  }
  for (const Edge& edge : graph.edges()) {
    if (const auto* s = std::get_if<DephasingEdge>(&edge)) {
      require_bound(s->rate, s->symbol);
      total += Generator::dephasing(s->j, s->k, s->rate, dim);
    }
  }
  for (const Edge& edge : graph.edges()) {
    if (const auto* c = std::get_if<CoherentEdge>(&edge)) {
      require_bound(c->omega_j, c->omega_j_symbol);
      require_bound(c->omega_k, c->omega_k_symbol);
      require_bound(c->coupling, c->coupling_symbol);
      total += Generator::unitary(c->j, c->k, c->omega_j, c->omega_k,
                                  c->coupling, dim);
    }
  }
  return total;
}

KrausMap step_map(const ReactionGraph& graph, double dt, double guard,
                  std::vector<std::string>* log) {
  if (dt < 0.0) {
    throw Error(Errc::invalid_argument, "step must be nonnegative");
  }
  if (graph.max_rate() * dt > guard) {
    std::ostringstream msg;
    msg << "step too large: max rate * dt = " << graph.max_rate() * dt
        << " exceeds guard " << guard;
    throw Error(Errc::step_too_large, msg.str());
  }
  const Eigen::Index dim = graph.n_sites();
  auto note = [log](const std::string& s) {
    if (log) log->push_back(s);
  };
  std::optional<KrausMap> map;
  auto absorb = [&map](KrausMap edge_map) {
    // Earlier-declared edges act first.
    map = map ? compose(std::move(edge_map), *map) : std::move(edge_map);
  };
  for (const Edge& edge : graph.edges()) {
    if (const auto* d = std::get_if<DampingEdge>(&edge)) {
      require_bound(d->rate, d->symbol);
      double gamma = d->rate * dt;
      std::ostringstream s;
      s << "damping " << d->from << "->" << d->to << ": gamma = rate*dt = "
        << gamma;
      note(s.str());
      absorb(amplitude_damping(d->to, d->from, gamma, dim, dt));
    } else if (const auto* ph = std::get_if<DephasingEdge>(&edge)) {
      require_bound(ph->rate, ph->symbol);
      double mu = ph->rate * dt;
      std::ostringstream s;
      s << "dephasing (" << ph->j << ", " << ph->k << "): mu = rate*dt = "
        << mu;
      note(s.str());
      absorb(dephasing(ph->j, ph->k, mu, dim, dt));
    } else if (const auto* c = std::get_if<CoherentEdge>(&edge)) {
      require_bound(c->omega_j, c->omega_j_symbol);
      require_bound(c->omega_k, c->omega_k_symbol);
      require_bound(c->coupling, c->coupling_symbol);
      absorb(unitary_map(c->j, c->k, c->omega_j, c->omega_k, c->coupling, dt,
                         dim));
    }
  }
  if (!map) return KrausMap::identity(dim);
  return *map;
}

}  // namespace qwalk
