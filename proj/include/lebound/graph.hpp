#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lebound {

using Mask = std::uint64_t;

inline constexpr int kMaxGraphNodes = 64;

constexpr Mask bit(int i) { return Mask{1} << i; }

inline int popcount(Mask m) { return std::popcount(m); }

/// Iterate the set bits of a mask in increasing order.
template <typename F>
void for_each_bit(Mask m, F&& f) {
  while (m) {
    int i = std::countr_zero(m);
    f(i);
    m &= m - 1;
  }
}

inline std::vector<int> bits_of(Mask m) {
  std::vector<int> out;
  for_each_bit(m, [&](int i) { out.push_back(i); });
  return out;
}

/// Simple undirected graph on at most 64 nodes, stored as one neighbour
/// bitmask per node. Node indices are 0-based.
class Graph {
 public:
  Graph() = default;

  explicit Graph(int n) : n_(n), adj_(static_cast<std::size_t>(n), 0) {
    if (n < 1 || n > kMaxGraphNodes)
      throw std::invalid_argument("graph size must be in 1..64, got " + std::to_string(n));
  }

  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Graph g(n);
    for (auto [i, j] : edges) g.add_edge(i, j);
    return g;
  }

  int size() const { return n_; }
  Mask neighbors(int i) const { return adj_.at(check(i)); }
  int degree(int i) const { return popcount(neighbors(i)); }
  bool has_edge(int i, int j) const { return (neighbors(i) >> check(j)) & 1u; }
  Mask all_nodes() const { return n_ == 64 ? ~Mask{0} : bit(n_) - 1; }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
      for_each_bit(adj_[i] & ~(bit(i + 1) - 1), [&](int j) { out.emplace_back(i, j); });
    return out;
  }

  std::size_t edge_count() const {
    std::size_t c = 0;
    for (Mask m : adj_) c += popcount(m);
    return c / 2;
  }

  void add_edge(int i, int j) {
    check(i);
    check(j);
    if (i == j) throw std::invalid_argument("self-loop on node " + std::to_string(i));
    adj_[i] |= bit(j);
    adj_[j] |= bit(i);
  }

  void remove_edge(int i, int j) {
    check(i);
    check(j);
    adj_[i] &= ~bit(j);
    adj_[j] &= ~bit(i);
  }

  void toggle_edge(int i, int j) {
    check(i);
    check(j);
    if (i == j) throw std::invalid_argument("self-loop on node " + std::to_string(i));
    adj_[i] ^= bit(j);
    adj_[j] ^= bit(i);
  }

  /// Nodes reachable from `start` using only nodes inside `allowed`.
  Mask component(int start, Mask allowed) const {
    Mask seen = bit(check(start)) & allowed;
    Mask frontier = seen;
    while (frontier) {
      Mask next = 0;
      for_each_bit(frontier, [&](int v) { next |= adj_[v]; });
      next &= allowed & ~seen;
      seen |= next;
      frontier = next;
    }
    return seen;
  }

  bool is_connected() const { return component(0, all_nodes()) == all_nodes(); }

  /// True when the subgraph induced by `nodes` is connected (and nonempty).
  bool induces_connected(Mask nodes) const {
    if (!nodes) return false;
    return component(std::countr_zero(nodes), nodes) == nodes;
  }

  /// Subgraph induced on `members`, relabelled 0..k-1 in the given order.
  Graph induced(const std::vector<int>& members) const {
    Graph sub(static_cast<int>(members.size()));
    for (std::size_t x = 0; x < members.size(); ++x)
      for (std::size_t y = x + 1; y < members.size(); ++y)
        if (has_edge(members[x], members[y])) sub.add_edge(static_cast<int>(x), static_cast<int>(y));
    return sub;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int check(int i) const {
    if (i < 0 || i >= n_)
      throw std::out_of_range("node " + std::to_string(i) + " outside graph of size " + std::to_string(n_));
    return i;
  }

  int n_ = 0;
  std::vector<Mask> adj_;
};

/// A sorted, duplicate-free, nonempty set of nodes of a graph of size n.
class Region {
 public:
  Region() = default;

  Region(std::vector<int> members, int n) : n_(n), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (members_.empty()) throw std::invalid_argument("region must be nonempty");
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
      throw std::invalid_argument("region has duplicate members");
    if (members_.front() < 0 || members_.back() >= n)
      throw std::out_of_range("region member outside graph of size " + std::to_string(n));
    for (int m : members_) mask_ |= bit(m);
  }

  static Region from_mask(Mask m, int n) { return Region(bits_of(m), n); }

  int graph_size() const { return n_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<int>& members() const { return members_; }
  int operator[](std::size_t k) const { return members_[k]; }
  Mask mask() const { return mask_; }
  bool contains(int i) const { return i >= 0 && i < 64 && ((mask_ >> i) & 1u); }

  /// Position of node i inside the region, or -1.
  int position(int i) const {
    auto it = std::lower_bound(members_.begin(), members_.end(), i);
    return (it != members_.end() && *it == i) ? static_cast<int>(it - members_.begin()) : -1;
  }

  Mask complement_mask() const { return (n_ == 64 ? ~Mask{0} : bit(n_) - 1) & ~mask_; }
  std::vector<int> complement() const { return bits_of(complement_mask()); }

  friend bool operator==(const Region&, const Region&) = default;

 private:
  int n_ = 0;
  std::vector<int> members_;
  Mask mask_ = 0;
};

inline void require_region_in(const Graph& g, const Region& r) {
  if (r.graph_size() != g.size())
    throw std::invalid_argument("region built for a graph of size " + std::to_string(r.graph_size()) +
                                ", graph has " + std::to_string(g.size()));
}

/// tau_i: toggles every edge between two neighbours of i.
inline Graph local_complement(const Graph& g, int i) {
  Graph out = g;
  std::vector<int> nb = bits_of(g.neighbors(i));
  for (std::size_t x = 0; x < nb.size(); ++x)
    for (std::size_t y = x + 1; y < nb.size(); ++y) out.toggle_edge(nb[x], nb[y]);
  return out;
}

/// Ordered nodes on which local complementation is applied, first to last.
struct LcSequence {
  std::vector<int> nodes;
  bool empty() const { return nodes.empty(); }
  friend bool operator==(const LcSequence&, const LcSequence&) = default;
};

inline Graph apply_lc_sequence(Graph g, const LcSequence& seq) {
  for (int v : seq.nodes) g = local_complement(g, v);
  return g;
}

/// Dense 0/1 matrix, row-major.
struct BinaryMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> data;

  BinaryMatrix() = default;
  BinaryMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}
  std::uint8_t operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  std::uint8_t& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
};

/// Block decomposition of the adjacency matrix with the region first:
///   Gamma = [[gamma_omega, gamma^T], [gamma, gamma_bar]].
struct AdjacencyBlocks {
  std::vector<int> omega;       // row/col order of gamma_omega
  std::vector<int> complement;  // row/col order of gamma_bar
  BinaryMatrix gamma_omega;
  BinaryMatrix gamma_bar;
  BinaryMatrix gamma;  // complement.size() x omega.size()
  Mask boundary = 0;
  std::vector<std::pair<int, int>> boundary_edges;  // (i in omega, r in complement)

  Graph reassemble(int n) const {
    Graph g(n);
    for (std::size_t x = 0; x < omega.size(); ++x)
      for (std::size_t y = x + 1; y < omega.size(); ++y)
        if (gamma_omega(x, y)) g.add_edge(omega[x], omega[y]);
    for (std::size_t x = 0; x < complement.size(); ++x)
      for (std::size_t y = x + 1; y < complement.size(); ++y)
        if (gamma_bar(x, y)) g.add_edge(complement[x], complement[y]);
    for (std::size_t r = 0; r < complement.size(); ++r)
      for (std::size_t c = 0; c < omega.size(); ++c)
        if (gamma(r, c)) g.add_edge(complement[r], omega[c]);
    return g;
  }
};

inline AdjacencyBlocks adjacency_blocks(const Graph& g, const Region& omega) {
  require_region_in(g, omega);
  AdjacencyBlocks b;
  b.omega = omega.members();
  b.complement = omega.complement();
  const int k = static_cast<int>(b.omega.size());
  const int m = static_cast<int>(b.complement.size());
  b.gamma_omega = BinaryMatrix(k, k);
  b.gamma_bar = BinaryMatrix(m, m);
  b.gamma = BinaryMatrix(m, k);
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) b.gamma_omega(x, y) = g.has_edge(b.omega[x], b.omega[y]);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) b.gamma_bar(x, y) = g.has_edge(b.complement[x], b.complement[y]);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < k; ++c)
      if (g.has_edge(b.complement[r], b.omega[c])) {
        b.gamma(r, c) = 1;
        b.boundary |= bit(b.complement[r]);
        b.boundary_edges.emplace_back(b.omega[c], b.complement[r]);
      }
  std::sort(b.boundary_edges.begin(), b.boundary_edges.end());
  return b;
}

/// Split of the joint neighbourhood of an edge (a,b) into nodes linked only to
/// a, only to b, or to both. Each class is further split by whether the noise
/// on that node can flip a Z-basis outcome ("type 1") or not ("type 2").
struct NeighborhoodClasses {
  int a = -1;
  int b = -1;
  Mask tilde_a = 0;
  Mask tilde_b = 0;
  Mask tilde_ab = 0;
  Mask type1 = 0;  // flipping nodes, restricted to the union of the classes

  int n_a() const { return popcount(tilde_a & type1); }
  int n_b() const { return popcount(tilde_b & type1); }
  int n_ab() const { return popcount(tilde_ab & type1); }
  Mask all() const { return tilde_a | tilde_b | tilde_ab; }
  Mask type2() const { return all() & ~type1; }
};

inline NeighborhoodClasses neighborhood_partition(const Graph& g, int a, int b, Mask type1_nodes = ~Mask{0}) {
  if (!g.has_edge(a, b))
    throw std::invalid_argument("nodes " + std::to_string(a) + " and " + std::to_string(b) + " are not adjacent");
  NeighborhoodClasses c;
  c.a = a;
  c.b = b;
  const Mask na = g.neighbors(a) & ~bit(b);
  const Mask nb = g.neighbors(b) & ~bit(a);
  c.tilde_ab = na & nb;
  c.tilde_a = na & ~nb;
  c.tilde_b = nb & ~na;
  c.type1 = c.all() & type1_nodes;
  return c;
}

/// Shortest a-b path by breadth-first search; among equal-length paths the
/// one taking the smallest node index at each hop from a.
inline std::vector<int> shortest_path(const Graph& g, int a, int b) {
  const int n = g.size();
  // distances from b let us walk greedily from a with smallest-index ties.
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::queue<int> q;
  dist[b] = 0;
  q.push(b);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for_each_bit(g.neighbors(v), [&](int w) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
    });
  }
  if (dist[a] < 0) return {};
  std::vector<int> path{a};
  int v = a;
  while (v != b) {
    int next = -1;
    for_each_bit(g.neighbors(v), [&](int w) {
      if (next < 0 && dist[w] == dist[v] - 1) next = w;
    });
    path.push_back(next);
    v = next;
  }
  return path;
}

/// Local complementations along the interior of a shortest a-b path, applied
/// from the a side, produce the edge (a,b).
inline std::pair<Graph, LcSequence> connect_region(const Graph& g, const Region& omega) {
  require_region_in(g, omega);
  if (omega.size() != 2) throw std::invalid_argument("connect_region needs a two-node region");
  if (!g.is_connected()) throw std::invalid_argument("connect_region needs a connected graph");
  const int a = omega[0], b = omega[1];
  if (g.has_edge(a, b)) return {g, LcSequence{}};
  std::vector<int> path = shortest_path(g, a, b);
  LcSequence seq{std::vector<int>(path.begin() + 1, path.end() - 1)};
  Graph out = apply_lc_sequence(g, seq);
  if (!out.has_edge(a, b)) throw std::logic_error("local complementation failed to connect region");
  return {std::move(out), std::move(seq)};
}

/// Path graph with two marked end qubits a and b separated by n_L interior
/// qubits. In bulk mode a and b each get one extra pendant neighbour.
struct LinearChain {
  Graph graph;
  int a = -1;
  int b = -1;
  int n_l = 0;
  bool bulk = false;
  std::vector<int> interior;  // path nodes between a and b, a side first
};

inline LinearChain linear_chain(int n_l, bool bulk) {
  if (n_l < 1) throw std::invalid_argument("linear chain needs at least one interior qubit");
  const int n = n_l + 2 + (bulk ? 2 : 0);
  LinearChain c;
  c.graph = Graph(n);
  for (int i = 0; i + 1 < n; ++i) c.graph.add_edge(i, i + 1);
  c.a = bulk ? 1 : 0;
  c.b = c.a + n_l + 1;
  c.n_l = n_l;
  c.bulk = bulk;
  for (int j = 1; j <= n_l; ++j) c.interior.push_back(c.a + j);
  return c;
}

}  // namespace lebound
