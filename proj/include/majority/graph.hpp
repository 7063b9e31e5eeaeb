#pragma once

// Inequality graph I over array positions. Its complement P (pairs that may
// still be equal) is never built; complement cliques are independent sets of I.

#include <majority/model.hpp>

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace majority {

/// Exact searches refuse graphs larger than this.
inline constexpr int kExactVertexLimit = 24;

class InequalityGraph {
 public:
  explicit InequalityGraph(int vertex_count) : vertex_count_(vertex_count), adjacency_(static_cast<std::size_t>(vertex_count), 0) {
    if (vertex_count < 0 || vertex_count > kMaxPositions) throw LimitExceeded("vertex count out of supported range");
  }

  InequalityGraph(int vertex_count, std::span<const PositionPair> edges) : InequalityGraph(vertex_count) {
    for (const auto& e : edges) add_edge(e.i, e.j);
  }

  int vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  /// Sorted lexicographically, each with i < j.
  const std::vector<PositionPair>& edges() const { return edges_; }

  PositionMask neighbors(int v) const { return adjacency_.at(static_cast<std::size_t>(v)); }
  int degree(int v) const { return popcount(neighbors(v)); }
  bool has_edge(int a, int b) const { return (neighbors(a) & bit(b)) != 0; }
  PositionMask vertices() const { return low_bits(vertex_count_); }

  /// Returns false when the edge was already present.
  bool add_edge(int a, int b) {
    require_pair(vertex_count_, a, b);
    if (has_edge(a, b)) return false;
    const auto e = PositionPair::of(a, b);
    edges_.insert(std::lower_bound(edges_.begin(), edges_.end(), e), e);
    adjacency_[static_cast<std::size_t>(a)] |= bit(b);
    adjacency_[static_cast<std::size_t>(b)] |= bit(a);
    return true;
  }

  bool operator==(const InequalityGraph&) const = default;

 private:
  int vertex_count_;
  std::vector<PositionPair> edges_;
  std::vector<PositionMask> adjacency_;
};

struct CoverResult {
  std::vector<int> cover;
  bool exact = false;
};

/// Balanced split of the positions into a bottom and a top layer.
class LayerAssignment {
 public:
  LayerAssignment(int vertex_count, PositionMask bottom) : vertex_count_(vertex_count), bottom_(bottom) {
    if (vertex_count % 2 != 0 || (bottom & ~low_bits(vertex_count)) != 0 || popcount(bottom) * 2 != vertex_count)
      throw std::invalid_argument("layers must split the vertices into two halves");
  }

  int vertex_count() const { return vertex_count_; }
  PositionMask bottom_mask() const { return bottom_; }
  PositionMask top_mask() const { return low_bits(vertex_count_) & ~bottom_; }
  std::vector<int> bottom() const { return positions_of(bottom_mask()); }
  std::vector<int> top() const { return positions_of(top_mask()); }
  bool in_bottom(int v) const { return (bottom_ & bit(v)) != 0; }
  bool same_layer(int a, int b) const { return in_bottom(a) == in_bottom(b); }
  PositionMask layer_of(int v) const { return in_bottom(v) ? bottom_mask() : top_mask(); }

  /// Exchanges the layers of a and b, which must sit in different layers.
  LayerAssignment swapped(int a, int b) const {
    if (same_layer(a, b)) throw std::invalid_argument("swap needs one vertex from each layer");
    return LayerAssignment(vertex_count_, bottom_ ^ bit(a) ^ bit(b));
  }

  bool operator==(const LayerAssignment&) const = default;

 private:
  int vertex_count_;
  PositionMask bottom_;
};

enum class CertificateKind { two_disjoint_n_cliques, one_n_plus_1_clique, none };

constexpr std::string_view to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::two_disjoint_n_cliques: return "two_disjoint_n_cliques";
    case CertificateKind::one_n_plus_1_clique: return "one_n_plus_1_clique";
    case CertificateKind::none: return "none";
  }
  return "none";
}

struct AmbiguityCertificate {
  CertificateKind kind = CertificateKind::none;
  std::vector<int> witness_a;
  std::optional<std::vector<int>> witness_b;
};

inline bool is_complement_clique(const InequalityGraph& g, PositionMask subset) {
  if ((subset & ~g.vertices()) != 0) throw std::out_of_range("vertex out of range");
  bool clique = true;
  for_each_position(subset, [&](int v) {
    if ((g.neighbors(v) & subset) != 0) clique = false;
  });
  return clique;
}

inline bool is_complement_clique(const InequalityGraph& g, std::span<const int> subset) {
  for (int v : subset)
    if (v < 0 || v >= g.vertex_count()) throw std::out_of_range("vertex out of range");
  return is_complement_clique(g, mask_of(subset));
}

inline bool is_vertex_cover(const InequalityGraph& g, PositionMask cover) {
  for (const auto& e : g.edges())
    if ((cover & (bit(e.i) | bit(e.j))) == 0) return false;
  return true;
}

/// One endpoint (the lower) of every edge: a cover no larger than the edge count.
inline CoverResult cover_bound(const InequalityGraph& g) {
  PositionMask cover = 0;
  for (const auto& e : g.edges()) cover |= bit(e.i);
  return {positions_of(cover), false};
}

namespace detail {

// Include-first search over vertices in index order, so the first cover found
// of a given size is the lexicographically least one.
inline bool find_cover(const InequalityGraph& g, int v, PositionMask cover, PositionMask forced, int budget,
                       PositionMask& out) {
  if (popcount(forced & ~cover) > budget) return false;
  if (v == g.vertex_count()) {
    out = cover;
    return true;
  }
  const PositionMask below = low_bits(v);
  const PositionMask nbrs = g.neighbors(v);
  if (budget > 0 && find_cover(g, v + 1, cover | bit(v), forced & ~bit(v), budget - 1, out)) return true;
  if ((forced & bit(v)) == 0 && (nbrs & below & ~cover) == 0)
    return find_cover(g, v + 1, cover, forced | (nbrs & ~below), budget, out);
  return false;
}

inline bool find_independent(const InequalityGraph& g, int v, PositionMask chosen, PositionMask allowed, int need,
                             PositionMask& out) {
  if (need == 0) {
    out = chosen;
    return true;
  }
  const PositionMask open = allowed & ~low_bits(v);
  if (popcount(open) < need) return false;
  const int next = std::countr_zero(open);
  if (find_independent(g, next + 1, chosen | bit(next), allowed & ~g.neighbors(next), need - 1, out)) return true;
  return find_independent(g, next + 1, chosen, allowed, need, out);
}

}  // namespace detail

/// Exact minimum vertex cover; ties broken toward the lexicographically least set.
inline CoverResult minimum_vertex_cover(const InequalityGraph& g) {
  if (g.vertex_count() > kExactVertexLimit) throw LimitExceeded("graph too large for exact vertex cover");
  PositionMask found = 0;
  for (int size = 0; size <= g.vertex_count(); ++size)
    if (detail::find_cover(g, 0, 0, 0, size, found)) break;
  return {positions_of(found), true};
}

inline bool is_perfect_matching(const InequalityGraph& g) {
  if (g.vertex_count() % 2 != 0 || 2 * g.edge_count() != static_cast<std::size_t>(g.vertex_count())) return false;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) >= 2) return false;
  return true;
}

/// Vertices outside cover_bound(g): a complement clique of size at least
/// vertex_count - edge_count.
inline std::vector<int> large_complement_clique(const InequalityGraph& g) {
  return positions_of(g.vertices() & ~mask_of(cover_bound(g).cover));
}

/// Lexicographically least complement clique of the given size, if any.
inline std::optional<std::vector<int>> find_complement_clique(const InequalityGraph& g, int size) {
  if (g.vertex_count() > kExactVertexLimit) throw LimitExceeded("graph too large for exact clique search");
  PositionMask found = 0;
  if (!detail::find_independent(g, 0, 0, g.vertices(), size, found)) return std::nullopt;
  return positions_of(found);
}

inline bool all_edges_cross(const InequalityGraph& g, const LayerAssignment& layers) {
  for (const auto& e : g.edges())
    if (layers.same_layer(e.i, e.j)) return false;
  return true;
}

/// Finds a balanced layer assignment in which every edge joins the two layers,
/// i.e. a 2-colouring of I with colour classes of size n. Each connected
/// component has exactly two colourings; a knapsack over components picks the
/// orientations. Among solutions it moves the fewest vertices away from
/// `preferred` (default: everything prefers the bottom layer for the lowest
/// vertex of each component), breaking ties toward keeping earlier components.
inline std::optional<LayerAssignment> balanced_crossing_assignment(const InequalityGraph& g,
                                                                  const std::optional<LayerAssignment>& preferred = {}) {
  const int vc = g.vertex_count();
  if (vc % 2 != 0) return std::nullopt;
  const int half = vc / 2;

  // Component colour classes: side0 holds the component's lowest vertex.
  struct Component {
    PositionMask side0 = 0;
    PositionMask side1 = 0;
  };
  std::vector<Component> comps;
  std::vector<int> colour(static_cast<std::size_t>(vc), -1);
  for (int start = 0; start < vc; ++start) {
    if (colour[static_cast<std::size_t>(start)] >= 0) continue;
    Component c;
    std::vector<int> stack{start};
    colour[static_cast<std::size_t>(start)] = 0;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      const int cv = colour[static_cast<std::size_t>(v)];
      (cv == 0 ? c.side0 : c.side1) |= bit(v);
      bool clash = false;
      for_each_position(g.neighbors(v), [&](int w) {
        int& cw = colour[static_cast<std::size_t>(w)];
        if (cw < 0) {
          cw = 1 - cv;
          stack.push_back(w);
        } else if (cw == cv) {
          clash = true;
        }
      });
      if (clash) return std::nullopt;
    }
    comps.push_back(c);
  }

  const PositionMask pref_bottom = preferred ? preferred->bottom_mask() : 0;
  auto cost = [&](const Component& c, bool side0_bottom) {
    if (!preferred) return side0_bottom ? 0 : 1;
    const PositionMask bottom = side0_bottom ? c.side0 : c.side1;
    const PositionMask top = side0_bottom ? c.side1 : c.side0;
    return popcount(bottom & ~pref_bottom) + popcount(top & pref_bottom);
  };

  // best[c][s]: least cost for components c.. to place s vertices at the bottom.
  constexpr int kInf = 1 << 28;
  const std::size_t m = comps.size();
  std::vector<std::vector<int>> best(m + 1, std::vector<int>(static_cast<std::size_t>(half + 1), kInf));
  best[m][0] = 0;
  for (std::size_t c = m; c-- > 0;) {
    for (int s = 0; s <= half; ++s) {
      int b = kInf;
      for (bool side0_bottom : {true, false}) {
        const int take = popcount(side0_bottom ? comps[c].side0 : comps[c].side1);
        if (take <= s && best[c + 1][static_cast<std::size_t>(s - take)] < kInf)
          b = std::min(b, cost(comps[c], side0_bottom) + best[c + 1][static_cast<std::size_t>(s - take)]);
      }
      best[c][static_cast<std::size_t>(s)] = b;
    }
  }
  if (best[0][static_cast<std::size_t>(half)] >= kInf) return std::nullopt;

  PositionMask bottom = 0;
  int remaining = half;
  for (std::size_t c = 0; c < m; ++c) {
    for (bool side0_bottom : {true, false}) {
      const PositionMask side = side0_bottom ? comps[c].side0 : comps[c].side1;
      const int take = popcount(side);
      if (take > remaining) continue;
      const int rest = best[c + 1][static_cast<std::size_t>(remaining - take)];
      if (rest < kInf && cost(comps[c], side0_bottom) + rest == best[c][static_cast<std::size_t>(remaining)]) {
        bottom |= side;
        remaining -= take;
        break;
      }
    }
  }
  return LayerAssignment(vc, bottom);
}

/// Vertices shared by every complement n-clique; nullopt when none exists.
inline std::optional<std::vector<int>> common_clique_vertices(const InequalityGraph& g, int n) {
  if (g.vertex_count() > kExactVertexLimit) throw LimitExceeded("graph too large for exact clique search");
  PositionMask common = g.vertices();
  bool any = false;
  // Enumerate all independent n-sets, stopping once the intersection is empty.
  struct Walker {
    const InequalityGraph& g;
    PositionMask& common;
    bool& any;
    void run(int v, PositionMask chosen, PositionMask allowed, int need) {
      if (any && common == 0) return;
      if (need == 0) {
        any = true;
        common &= chosen;
        return;
      }
      const PositionMask open = allowed & ~low_bits(v);
      if (popcount(open) < need) return;
      const int next = std::countr_zero(open);
      run(next + 1, chosen | bit(next), allowed & ~g.neighbors(next), need - 1);
      run(next + 1, chosen, allowed, need);
    }
  } walker{g, common, any};
  walker.run(0, 0, g.vertices(), n);
  if (!any) return std::nullopt;
  return positions_of(common);
}

/// A structure in P proving that no position is yet a safe output: two
/// disjoint complement n-cliques, or one complement (n+1)-clique.
inline AmbiguityCertificate ambiguity_certificate(const InequalityGraph& g, int n) {
  require_n(n);
  if (g.vertex_count() != 2 * n) throw std::invalid_argument("graph must have 2n vertices");
  const auto edges = static_cast<int>(g.edge_count());
  if (edges < n) {
    auto clique = large_complement_clique(g);
    clique.resize(static_cast<std::size_t>(n + 1));
    return {CertificateKind::one_n_plus_1_clique, std::move(clique), std::nullopt};
  }
  if (auto layers = balanced_crossing_assignment(g)) {
    auto a = layers->bottom();
    auto b = layers->top();
    if (b.front() < a.front()) std::swap(a, b);
    return {CertificateKind::two_disjoint_n_cliques, std::move(a), std::move(b)};
  }
  if (auto clique = find_complement_clique(g, n + 1))
    return {CertificateKind::one_n_plus_1_clique, std::move(*clique), std::nullopt};
  return {CertificateKind::none, {}, std::nullopt};
}

/// Checks the stated sizes, disjointness and that every witness is a
/// complement clique.
inline bool validate_certificate(const InequalityGraph& g, int n, const AmbiguityCertificate& c) {
  auto valid_set = [&](const std::vector<int>& s, int size) {
    if (static_cast<int>(s.size()) != size) return false;
    for (int v : s)
      if (v < 0 || v >= g.vertex_count()) return false;
    const PositionMask m = mask_of(s);
    return popcount(m) == size && is_complement_clique(g, m);
  };
  switch (c.kind) {
    case CertificateKind::one_n_plus_1_clique:
      return !c.witness_b && valid_set(c.witness_a, n + 1);
    case CertificateKind::two_disjoint_n_cliques:
      return c.witness_b && valid_set(c.witness_a, n) && valid_set(*c.witness_b, n) &&
             (mask_of(c.witness_a) & mask_of(*c.witness_b)) == 0;
    case CertificateKind::none:
      return c.witness_a.empty() && !c.witness_b;
  }
  return false;
}

/// Knowledge carried by a graph whose every edge was answered "not equal".
inline KnowledgeState knowledge_of(const InequalityGraph& g, int n) {
  KnowledgeState k(n);
  if (g.vertex_count() != 2 * n) throw std::invalid_argument("graph must have 2n vertices");
  for (const auto& e : g.edges()) k.separate(e.i, e.j);
  return k;
}

}  // namespace majority
