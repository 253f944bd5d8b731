#pragma once

// Finite simple graphs, edge subsets, the family of start-anchored connected
// edge subsets, decreasing subfamilies, growth sequences and the lifted
// (oriented-edge) directed graph.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace orrw {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hard limit on |E| for anything that stores edge subsets as masks.
inline constexpr int kMaxEdges = 63;
/// Enumeration of all start-anchored connected subsets is exponential in |E|.
inline constexpr int kMaxEnumerationEdges = 20;

class EdgeSubset {
 public:
  using Mask = std::uint64_t;

  constexpr EdgeSubset() = default;
  constexpr explicit EdgeSubset(Mask m) : mask_(m) {}

  static constexpr EdgeSubset single(int e) { return EdgeSubset(Mask{1} << e); }
  static EdgeSubset of(std::initializer_list<int> edges) {
    EdgeSubset s;
    for (int e : edges) s = s.with(e);
    return s;
  }
  static constexpr EdgeSubset first_n(int n) {
    return EdgeSubset(n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1);
  }

  constexpr Mask mask() const { return mask_; }
  constexpr bool contains(int e) const { return (mask_ >> e) & 1U; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr EdgeSubset with(int e) const { return EdgeSubset(mask_ | (Mask{1} << e)); }
  constexpr EdgeSubset without(int e) const { return EdgeSubset(mask_ & ~(Mask{1} << e)); }
  constexpr bool subset_of(EdgeSubset o) const { return (mask_ & ~o.mask_) == 0; }

  std::vector<int> edges() const {
    std::vector<int> out;
    for (Mask m = mask_; m; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  friend constexpr EdgeSubset operator|(EdgeSubset a, EdgeSubset b) { return EdgeSubset(a.mask_ | b.mask_); }
  friend constexpr EdgeSubset operator&(EdgeSubset a, EdgeSubset b) { return EdgeSubset(a.mask_ & b.mask_); }
  friend constexpr auto operator<=>(EdgeSubset a, EdgeSubset b) = default;

 private:
  Mask mask_ = 0;
};

/// Oriented edge (e, sigma). sigma = +1 runs from the lower-ordered endpoint to
/// the higher-ordered one; sigma = -1 the other way.
struct ArcState {
  int edge = 0;
  int sigma = 1;
  friend constexpr bool operator==(ArcState, ArcState) = default;
};

class FiniteGraph {
 public:
  int num_vertices() const { return static_cast<int>(labels_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int start() const { return 0; }

  const std::string& label(int v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<int> find_vertex(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Endpoints ordered by vertex index (first < second).
  std::pair<int, int> endpoints(int e) const { return edges_.at(e); }
  const std::vector<int>& incident_edges(int v) const { return incident_.at(v); }
  int degree(int v) const { return static_cast<int>(incident_.at(v).size()); }

  int other_end(int e, int v) const {
    const auto [a, b] = edges_.at(e);
    return a == v ? b : a;
  }

  bool incident(int e, int v) const {
    const auto [a, b] = edges_.at(e);
    return a == v || b == v;
  }

  bool adjacent_edges(int e, int f) const {
    const auto [a, b] = edges_.at(e);
    return e != f && (incident(f, a) || incident(f, b));
  }

  std::optional<int> edge_between(int u, int v) const {
    for (int e : incident_.at(u))
      if (other_end(e, u) == v) return e;
    return std::nullopt;
  }

  EdgeSubset all_edges() const { return EdgeSubset::first_n(num_edges()); }

  /// Vertex indicator of the endpoints of `s`.
  std::vector<bool> vertices_of(EdgeSubset s) const {
    std::vector<bool> in(labels_.size(), false);
    for (int e : s.edges()) {
      in[edges_[e].first] = true;
      in[edges_[e].second] = true;
    }
    return in;
  }

  /// Number of edges of `s` incident to v.
  int degree_in(int v, EdgeSubset s) const {
    int k = 0;
    for (int e : incident_[v]) k += s.contains(e) ? 1 : 0;
    return k;
  }

  std::string edge_name(int e) const {
    const auto [a, b] = edges_.at(e);
    return labels_[a] + "-" + labels_[b];
  }

  std::string subset_name(EdgeSubset s) const {
    std::string out = "{";
    bool first = true;
    for (int e : s.edges()) {
      if (!first) out += ' ';
      out += edge_name(e);
      first = false;
    }
    return out + "}";
  }

 private:
  friend FiniteGraph build_graph(const std::vector<std::pair<std::string, std::string>>&, std::string_view);

  std::vector<std::string> labels_;
  std::map<std::string, int> index_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> incident_;
};

/// True iff the edges of `s` form a connected subgraph (empty set counts as
/// not connected).
inline bool is_connected_subset(const FiniteGraph& g, EdgeSubset s) {
  if (s.empty()) return false;
  const int root = g.endpoints(s.edges().front()).first;
  std::vector<bool> seen(g.num_vertices(), false);
  std::vector<int> stack{root};
  seen[root] = true;
  EdgeSubset reached;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int e : g.incident_edges(v)) {
      if (!s.contains(e)) continue;
      reached = reached.with(e);
      const int w = g.other_end(e, v);
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return reached == s;
}

/// Validates and builds a graph. Vertices are numbered in order of first
/// appearance, with `start` moved to index 0.
inline FiniteGraph build_graph(const std::vector<std::pair<std::string, std::string>>& edge_pairs,
                               std::string_view start) {
  if (edge_pairs.size() < 2) throw GraphError("graph needs at least 2 edges");
  if (static_cast<int>(edge_pairs.size()) > kMaxEdges)
    throw GraphError("graph has more than " + std::to_string(kMaxEdges) + " edges");

  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& [a, b] : edge_pairs) {
    for (const auto& l : {a, b}) {
      if (l.empty()) throw GraphError("empty vertex label");
      if (seen.insert(l).second) order.push_back(l);
    }
  }
  auto it = std::find(order.begin(), order.end(), std::string(start));
  if (it == order.end()) throw GraphError("start vertex '" + std::string(start) + "' is not in the graph");
  std::rotate(order.begin(), it, it + 1);

  FiniteGraph g;
  g.labels_ = order;
  for (int i = 0; i < static_cast<int>(order.size()); ++i) g.index_[order[i]] = i;
  g.incident_.assign(order.size(), {});

  std::set<std::pair<int, int>> pairs;
  for (const auto& [la, lb] : edge_pairs) {
    int a = g.index_[la];
    int b = g.index_[lb];
    if (a == b) throw GraphError("loop at vertex '" + la + "'");
    if (a > b) std::swap(a, b);
    if (!pairs.insert({a, b}).second) throw GraphError("parallel edge " + la + "-" + lb);
    const int e = static_cast<int>(g.edges_.size());
    g.edges_.push_back({a, b});
    g.incident_[a].push_back(e);
    g.incident_[b].push_back(e);
  }
  if (!is_connected_subset(g, g.all_edges())) throw GraphError("graph is disconnected");
  return g;
}

/// Parses whitespace-separated label pairs, one edge per line. Blank lines and
/// lines starting with '#' are skipped.
inline std::vector<std::pair<std::string, std::string>> parse_edge_list(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a >> b) || (ls >> extra))
      throw GraphError("line " + std::to_string(lineno) + ": expected exactly two vertex labels");
    out.emplace_back(a, b);
  }
  return out;
}

inline FiniteGraph read_graph_file(const std::string& path, std::string_view start) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file '" + path + "'");
  return build_graph(parse_edge_list(in), start);
}

/// Membership in the family of connected edge subsets touching the start vertex.
inline bool in_S(const FiniteGraph& g, EdgeSubset s) {
  if (s.empty() || !s.subset_of(g.all_edges())) return false;
  if (g.degree_in(g.start(), s) == 0) return false;
  return is_connected_subset(g, s);
}

/// All connected edge subsets with an edge at the start vertex, in ascending
/// mask order.
inline std::vector<EdgeSubset> enumerate_S(const FiniteGraph& g) {
  const int b = g.num_edges();
  if (b > kMaxEnumerationEdges)
    throw GraphError("subset enumeration is limited to " + std::to_string(kMaxEnumerationEdges) + " edges");
  std::vector<EdgeSubset> out;
  const EdgeSubset::Mask top = EdgeSubset::Mask{1} << b;
  for (EdgeSubset::Mask m = 1; m < top; ++m)
    if (in_S(g, EdgeSubset(m))) out.push_back(EdgeSubset(m));
  return out;
}

/// Checks downward closure within the family of start-anchored connected
/// subsets. Throws on an empty family or a member outside that family.
inline bool is_decreasing(const std::vector<EdgeSubset>& members, const FiniteGraph& g) {
  if (members.empty()) throw GraphError("decreasing family must be non-empty");
  std::set<EdgeSubset> set(members.begin(), members.end());
  for (EdgeSubset m : set)
    if (!in_S(g, m)) throw GraphError("family member " + g.subset_name(m) + " is not an anchored connected subset");
  // Any two nested members of S are joined by a chain in S that adds one
  // edge at a time, so one-edge removals suffice.
  for (EdgeSubset m : set) {
    for (int e : m.edges()) {
      const EdgeSubset smaller = m.without(e);
      if (in_S(g, smaller) && !set.count(smaller)) return false;
    }
  }
  return true;
}

/// Non-empty downward-closed subfamily of S; the stopping rule of a walk is
/// "traversed set leaves the family".
class DecreasingFamily {
 public:
  /// Validates; throws GraphError if not decreasing.
  static DecreasingFamily make(const FiniteGraph& g, std::vector<EdgeSubset> members) {
    if (!is_decreasing(members, g)) throw GraphError("edge-subset family is not closed downward");
    DecreasingFamily f;
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    f.members_ = std::move(members);
    f.full_ = std::binary_search(f.members_.begin(), f.members_.end(), g.all_edges());
    return f;
  }

  bool contains(EdgeSubset s) const { return std::binary_search(members_.begin(), members_.end(), s); }
  const std::vector<EdgeSubset>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  /// True when the full edge set is a member: the stopping time is then infinite.
  bool unstoppable() const { return full_; }

 private:
  std::vector<EdgeSubset> members_;
  bool full_ = false;
};

/// S minus the full edge set; leaving it is the edge cover time.
inline DecreasingFamily cover_family(const FiniteGraph& g) {
  auto all = enumerate_S(g);
  std::erase(all, g.all_edges());
  return DecreasingFamily::make(g, std::move(all));
}

inline DecreasingFamily full_family(const FiniteGraph& g) { return DecreasingFamily::make(g, enumerate_S(g)); }

/// Smallest decreasing family containing `members`.
inline DecreasingFamily downward_closure(const FiniteGraph& g, const std::vector<EdgeSubset>& members) {
  std::set<EdgeSubset> closed;
  std::vector<EdgeSubset> stack;
  for (EdgeSubset m : members) {
    if (!in_S(g, m)) throw GraphError("family member " + g.subset_name(m) + " is not an anchored connected subset");
    stack.push_back(m);
  }
  while (!stack.empty()) {
    const EdgeSubset m = stack.back();
    stack.pop_back();
    if (!closed.insert(m).second) continue;
    for (int e : m.edges()) {
      const EdgeSubset smaller = m.without(e);
      if (in_S(g, smaller) && !closed.count(smaller)) stack.push_back(smaller);
    }
  }
  return DecreasingFamily::make(g, {closed.begin(), closed.end()});
}

/// Nested edge sets E_1 ⊂ ... ⊂ E_b grown one adjacent edge at a time from the
/// start vertex. `order[k]` is the edge added at stage k.
struct GrowthSequence {
  std::vector<int> order;
  std::vector<EdgeSubset> stages;

  friend bool operator==(const GrowthSequence&, const GrowthSequence&) = default;
};

inline std::string sequence_name(const FiniteGraph& g, const GrowthSequence& s) {
  std::string out;
  for (std::size_t k = 0; k < s.order.size(); ++k) {
    if (k) out += '>';
    out += g.edge_name(s.order[k]);
  }
  return out;
}

/// All growth sequences in lexicographic order of their edge orders. With an
/// anchor edge, only sequences whose first stage is that edge.
inline std::vector<GrowthSequence> enumerate_growth_sequences(const FiniteGraph& g,
                                                             std::optional<int> anchor = std::nullopt) {
  const int b = g.num_edges();
  if (anchor) {
    if (*anchor < 0 || *anchor >= b || !g.incident(*anchor, g.start()))
      throw GraphError("anchor edge must be incident to the start vertex");
  }
  std::vector<GrowthSequence> out;
  GrowthSequence cur;
  auto extend = [&](auto&& self, EdgeSubset have, const std::vector<bool>& verts) -> void {
    if (have.size() == b) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e < b; ++e) {
      if (have.contains(e)) continue;
      const auto [x, y] = g.endpoints(e);
      if (!verts[x] && !verts[y]) continue;
      auto next_verts = verts;
      next_verts[x] = next_verts[y] = true;
      cur.order.push_back(e);
      cur.stages.push_back(have.with(e));
      self(self, have.with(e), next_verts);
      cur.order.pop_back();
      cur.stages.pop_back();
    }
  };
  for (int e : g.incident_edges(g.start())) {
    if (anchor && e != *anchor) continue;
    std::vector<bool> verts(g.num_vertices(), false);
    const auto [x, y] = g.endpoints(e);
    verts[x] = verts[y] = true;
    cur.order = {e};
    cur.stages = {EdgeSubset::single(e)};
    extend(extend, EdgeSubset::single(e), verts);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.order < b.order; });
  return out;
}

/// Checks the four growth conditions: strict nesting, |E_k| = k, first stage at
/// the start vertex, each new edge adjacent to the previous stage.
inline bool satisfies_growth_conditions(const FiniteGraph& g, const GrowthSequence& s) {
  const int b = g.num_edges();
  if (static_cast<int>(s.stages.size()) != b) return false;
  for (int k = 0; k < b; ++k) {
    if (s.stages[k].size() != k + 1) return false;
    if (k > 0 && !(s.stages[k - 1].subset_of(s.stages[k]) && s.stages[k - 1] != s.stages[k])) return false;
  }
  if (!s.stages[0].subset_of(g.all_edges()) || g.degree_in(g.start(), s.stages[0]) != 1) return false;
  for (int k = 1; k < b; ++k) {
    const EdgeSubset added(s.stages[k].mask() & ~s.stages[k - 1].mask());
    const int e = added.edges().front();
    bool adj = false;
    for (int f : s.stages[k - 1].edges()) adj = adj || g.adjacent_edges(e, f);
    if (!adj) return false;
  }
  return true;
}

/// Edges of `s` sharing a vertex with some edge outside `s`.
inline EdgeSubset edge_boundary(const FiniteGraph& g, EdgeSubset s) {
  EdgeSubset out;
  for (int e : s.edges()) {
    const auto [a, b] = g.endpoints(e);
    if (g.degree_in(a, s) < g.degree(a) || g.degree_in(b, s) < g.degree(b)) out = out.with(e);
  }
  return out;
}

/// Directed graph on the 2b oriented edges; z1 -> z2 iff head(z1) = tail(z2).
/// Arc id of (e, +1) is 2e, of (e, -1) is 2e + 1.
class LiftedGraph {
 public:
  explicit LiftedGraph(const FiniteGraph& g) : graph_(&g) {
    const int b = g.num_edges();
    arcs_.reserve(2 * b);
    for (int e = 0; e < b; ++e) {
      arcs_.push_back({e, 1});
      arcs_.push_back({e, -1});
    }
    out_.assign(arcs_.size(), {});
    for (int z = 0; z < num_arcs(); ++z) {
      const int h = head(z);
      for (int e : g.incident_edges(h)) out_[z].push_back(arc_leaving(e, h));
      std::sort(out_[z].begin(), out_[z].end());
    }
  }

  const FiniteGraph& graph() const { return *graph_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  const ArcState& arc(int z) const { return arcs_.at(z); }
  static constexpr int arc_id(int edge, int sigma) { return 2 * edge + (sigma > 0 ? 0 : 1); }
  static constexpr int reverse(int z) { return z ^ 1; }

  int tail(int z) const {
    const auto [a, b] = graph_->endpoints(arcs_[z].edge);
    return arcs_[z].sigma > 0 ? a : b;
  }
  int head(int z) const {
    const auto [a, b] = graph_->endpoints(arcs_[z].edge);
    return arcs_[z].sigma > 0 ? b : a;
  }
  /// The orientation of e whose tail is v.
  int arc_leaving(int e, int v) const { return arc_id(e, graph_->endpoints(e).first == v ? 1 : -1); }

  const std::vector<int>& out_neighbors(int z) const { return out_.at(z); }
  int out_degree(int z) const { return static_cast<int>(out_[z].size()); }
  bool links(int z1, int z2) const { return head(z1) == tail(z2); }

  std::size_t num_links() const {
    std::size_t n = 0;
    for (const auto& o : out_) n += o.size();
    return n;
  }

  std::string arc_name(int z) const { return graph_->label(tail(z)) + ">" + graph_->label(head(z)); }

 private:
  const FiniteGraph* graph_;
  std::vector<ArcState> arcs_;
  std::vector<std::vector<int>> out_;
};

inline LiftedGraph lift(const FiniteGraph& g) { return LiftedGraph(g); }

/// Arcs over `s` with at least one out-neighbour over an edge outside `s`.
inline std::vector<int> lifted_boundary(const LiftedGraph& lg, EdgeSubset s) {
  std::vector<int> out;
  for (int z = 0; z < lg.num_arcs(); ++z) {
    if (!s.contains(lg.arc(z).edge)) continue;
    for (int w : lg.out_neighbors(z)) {
      if (!s.contains(lg.arc(w).edge)) {
        out.push_back(z);
        break;
      }
    }
  }
  return out;
}

}  // namespace orrw
