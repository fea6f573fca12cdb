#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "oneinc/class_core.hpp"
#include "oneinc/common.hpp"
#include "oneinc/rational.hpp"
#include "oneinc/rng.hpp"

namespace oneinc {

// One-inclusion hypergraph of H|_S. Vertices are the distinct restrictions,
// a hyperedge at coordinate i groups the vertices that agree everywhere off
// i (and therefore pairwise differ at i). Distinct edges share at most one
// vertex; this is asserted at build time.
struct OneInclusionGraph {
  struct Edge {
    int coord = -1;
    std::vector<int> members;  // sorted vertex indices, size >= 2
  };

  std::vector<std::string> sample;         // S, duplicates permitted
  std::vector<std::vector<int>> vertices;  // rows of H|_S (values per sample slot)
  std::vector<Edge> edges;
  std::vector<std::vector<int>> incident;  // vertex -> edge indices

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int degree(int v) const { return static_cast<int>(incident[v].size()); }

  void build_incidence() {
    incident.assign(vertices.size(), {});
    for (int e = 0; e < num_edges(); ++e)
      for (int v : edges[e].members) incident[v].push_back(e);
  }

  void assert_intersection_invariant() const {
    for (int a = 0; a < num_edges(); ++a)
      for (int b = a + 1; b < num_edges(); ++b) {
        int common = 0;
        for (int v : edges[a].members)
          if (std::binary_search(edges[b].members.begin(), edges[b].members.end(), v)) ++common;
        if (common > 1)
          throw DomainError("one-inclusion invariant violated: edges share >1 vertex");
      }
  }
};

// Builds G(H|_S). Duplicate points in S produce no edges at the duplicated
// coordinates: two rows cannot differ at one copy while agreeing at the
// other.
inline OneInclusionGraph build_graph(const FiniteClass& cls,
                                     const std::vector<std::string>& sample) {
  OneInclusionGraph g;
  g.sample = sample;
  std::vector<int> idx;
  idx.reserve(sample.size());
  for (const auto& id : sample) idx.push_back(cls.point_index(id));

  std::map<std::vector<int>, int> seen;
  for (const auto& row : cls.table) {
    std::vector<int> r;
    r.reserve(idx.size());
    for (int i : idx) r.push_back(row[i]);
    if (seen.emplace(r, static_cast<int>(g.vertices.size())).second)
      g.vertices.push_back(std::move(r));
  }

  const int m = static_cast<int>(sample.size());
  for (int i = 0; i < m; ++i) {
    // group vertices by their values off coordinate i
    std::map<std::vector<int>, std::vector<int>> groups;
    for (int v = 0; v < g.num_vertices(); ++v) {
      std::vector<int> key = g.vertices[v];
      key.erase(key.begin() + i);
      groups[std::move(key)].push_back(v);
    }
    for (auto& [key, members] : groups) {
      if (members.size() < 2) continue;
      OneInclusionGraph::Edge e;
      e.coord = i;
      e.members = members;  // already sorted: vertices scanned in order
      g.edges.push_back(std::move(e));
    }
  }
  g.build_incidence();
  g.assert_intersection_invariant();
  return g;
}

// Maximal average degree report. Exhaustive mode is exact over all vertex
// subsets; beyond the cap we return the greedy-peeling lower bound together
// with the max-degree upper bound.
struct DensityReport {
  Rational lower;
  Rational upper;
  std::vector<int> witness;  // subset achieving `lower` (exhaustive: the max)
  bool exhaustive = false;

  Rational value() const {
    if (!exhaustive) throw DomainError("DensityReport: bounded mode has no exact value");
    return lower;
  }
};

namespace detail {

// Sum over edges e of |e & U| restricted to |e & U| >= 2; the numerator of
// the induced average degree. Distinct edges never merge under intersection
// in a one-inclusion graph (they share <= 1 vertex).
inline std::int64_t induced_degree_sum(const std::vector<std::uint32_t>& edge_masks,
                                       std::uint32_t subset) {
  std::int64_t sum = 0;
  for (std::uint32_t em : edge_masks) {
    const int pc = popcount32(em & subset);
    if (pc >= 2) sum += pc;
  }
  return sum;
}

// Greedy density peel: repeatedly drop a minimum-degree vertex, tracking the
// best average degree seen. Always a valid lower bound for md.
inline std::pair<Rational, std::vector<int>> peeling_lower_bound(const OneInclusionGraph& g) {
  const int n = g.num_vertices();
  std::vector<bool> alive(n, true);
  std::vector<int> edge_alive(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e)
    edge_alive[e] = static_cast<int>(g.edges[e].members.size());
  std::vector<int> deg(n, 0);
  std::int64_t deg_sum = 0;
  for (int v = 0; v < n; ++v) {
    for (int e : g.incident[v])
      if (edge_alive[e] >= 2) ++deg[v];
    deg_sum += deg[v];
  }
  Rational best(0, 1);
  std::vector<int> best_set;
  int alive_count = n;
  std::vector<int> current(n);
  for (int v = 0; v < n; ++v) current[v] = v;
  while (alive_count > 0) {
    Rational avg(deg_sum, alive_count);
    if (best_set.empty() || best < avg) {
      best = avg;
      best_set.clear();
      for (int v = 0; v < n; ++v)
        if (alive[v]) best_set.push_back(v);
    }
    int victim = -1;
    for (int v = 0; v < n; ++v)
      if (alive[v] && (victim < 0 || deg[v] < deg[victim])) victim = v;
    alive[victim] = false;
    --alive_count;
    for (int e : g.incident[victim]) {
      if (edge_alive[e] >= 2) {
        // the edge loses a member; if it drops below 2 it stops contributing
        if (edge_alive[e] == 2) {
          for (int u : g.edges[e].members)
            if (alive[u] || u == victim) {
              --deg[u];
              --deg_sum;
            }
        } else {
          --deg[victim];
          --deg_sum;
        }
      }
      --edge_alive[e];
    }
  }
  return {best, best_set};
}

}  // namespace detail

inline DensityReport max_avg_degree(const OneInclusionGraph& g, int exhaustive_cap = 20) {
  DensityReport report;
  const int n = g.num_vertices();
  if (n == 0) {
    report.exhaustive = true;
    return report;
  }
  if (n > exhaustive_cap || n > 31) {
    auto [lo, wit] = detail::peeling_lower_bound(g);
    int max_deg = 0;
    for (int v = 0; v < n; ++v) max_deg = std::max(max_deg, g.degree(v));
    report.lower = lo;
    report.upper = Rational(max_deg, 1);
    report.witness = std::move(wit);
    report.exhaustive = false;
    return report;
  }
  std::vector<std::uint32_t> edge_masks;
  edge_masks.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    std::uint32_t m = 0;
    for (int v : e.members) m |= (1u << v);
    edge_masks.push_back(m);
  }
  Rational best(0, 1);
  std::uint32_t best_mask = 1;
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  for (std::uint32_t U = 1; U <= full; ++U) {
    const std::int64_t sum = detail::induced_degree_sum(edge_masks, U);
    const int size = popcount32(U);
    // compare sum/size > best without constructing a Rational each time
    if (static_cast<__int128>(sum) * best.den > static_cast<__int128>(best.num) * size) {
      best = Rational(sum, size);
      best_mask = U;
    }
  }
  report.lower = report.upper = best;
  report.exhaustive = true;
  for (int v = 0; v < n; ++v)
    if (best_mask & (1u << v)) report.witness.push_back(v);
  return report;
}

// ---------------------------------------------------------------------------
// Orientations

struct Orientation {
  std::vector<int> head;        // edge index -> member vertex
  std::vector<int> out_degree;  // per vertex

  int max_out_degree() const {
    int m = 0;
    for (int d : out_degree) m = std::max(m, d);
    return m;
  }
};

namespace detail {

inline Orientation orientation_from_heads(const OneInclusionGraph& g, std::vector<int> head) {
  Orientation o;
  o.head = std::move(head);
  o.out_degree.assign(g.num_vertices(), 0);
  for (int e = 0; e < g.num_edges(); ++e)
    for (int v : g.edges[e].members)
      if (v != o.head[e]) ++o.out_degree[v];
  return o;
}

// Plain BFS max-flow (Edmonds-Karp); graphs here are tiny.
class MaxFlow {
 public:
  explicit MaxFlow(int n) : head_(n, -1) {}

  void add_edge(int u, int v, int cap) {
    edges_.push_back({v, cap, head_[u]});
    head_[u] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({u, 0, head_[v]});
    head_[v] = static_cast<int>(edges_.size()) - 1;
  }

  int run(int s, int t) {
    int flow = 0;
    for (;;) {
      std::vector<int> via(head_.size(), -1);
      std::queue<int> q;
      q.push(s);
      via[s] = -2;
      while (!q.empty() && via[t] == -1) {
        int u = q.front();
        q.pop();
        for (int e = head_[u]; e != -1; e = edges_[e].next) {
          if (edges_[e].cap > 0 && via[edges_[e].to] == -1) {
            via[edges_[e].to] = e;
            q.push(edges_[e].to);
          }
        }
      }
      if (via[t] == -1) break;
      for (int v = t; v != s;) {
        int e = via[v];
        --edges_[e].cap;
        ++edges_[e ^ 1].cap;
        v = edges_[e ^ 1].to;
      }
      ++flow;
    }
    return flow;
  }

  // after run(): positive flow on forward edge e iff its residual dropped
  bool saturated(int idx) const { return edges_[idx].cap == 0; }

 private:
  struct E {
    int to, cap, next;
  };
  std::vector<E> edges_;
  std::vector<int> head_;
};

// Feasibility of max out-degree <= k, as a flow problem: every edge must be
// headed at one member, and vertex v must collect at least deg(v) - k heads.
// Surplus edges may be headed anywhere (extra heads only lower out-degrees).
inline std::optional<std::vector<int>> orient_with_bound(const OneInclusionGraph& g, int k) {
  const int E = g.num_edges();
  const int V = g.num_vertices();
  std::int64_t demand = 0;
  std::vector<int> need(V, 0);
  for (int v = 0; v < V; ++v) {
    need[v] = std::max(0, g.degree(v) - k);
    demand += need[v];
  }
  // nodes: 0 = source, 1..E = edges, E+1..E+V = vertices, E+V+1 = sink
  const int src = 0, sink = E + V + 1;
  MaxFlow flow(E + V + 2);
  std::vector<std::vector<std::pair<int, int>>> member_arcs(E);  // (vertex, arc index)
  for (int e = 0; e < E; ++e) flow.add_edge(src, 1 + e, 1);
  int arc_counter = 2 * E;
  for (int e = 0; e < E; ++e)
    for (int v : g.edges[e].members) {
      flow.add_edge(1 + e, 1 + E + v, 1);
      member_arcs[e].push_back({v, arc_counter});
      arc_counter += 2;
    }
  for (int v = 0; v < V; ++v)
    if (need[v] > 0) flow.add_edge(1 + E + v, sink, need[v]);
  if (flow.run(src, sink) < demand) return std::nullopt;
  std::vector<int> head(E, -1);
  for (int e = 0; e < E; ++e)
    for (const auto& [v, arc] : member_arcs[e])
      if (flow.saturated(arc)) {
        head[e] = v;
        break;
      }
  // edges not needed for any lower bound: head at the smallest member
  for (int e = 0; e < E; ++e)
    if (head[e] < 0) head[e] = g.edges[e].members.front();
  return head;
}

}  // namespace detail

// Peeling orientation: repeatedly remove a minimum-degree vertex of the
// current induced graph (ties by vertex index); each edge is headed at the
// member peeled last. Achieves max out-degree <= floor(md(G)).
inline Orientation orient_greedy(const OneInclusionGraph& g) {
  const int n = g.num_vertices();
  std::vector<bool> alive(n, true);
  std::vector<int> edge_alive(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e)
    edge_alive[e] = static_cast<int>(g.edges[e].members.size());
  std::vector<int> deg(n, 0);
  for (int v = 0; v < n; ++v)
    for (int e : g.incident[v])
      if (edge_alive[e] >= 2) ++deg[v];
  std::vector<int> head(g.num_edges(), -1);
  for (int step = 0; step < n; ++step) {
    int victim = -1;
    for (int v = 0; v < n; ++v)
      if (alive[v] && (victim < 0 || deg[v] < deg[victim])) victim = v;
    alive[victim] = false;
    for (int e : g.incident[victim]) {
      if (edge_alive[e] == 2) {
        // the other surviving member is peeled later: it becomes the head
        for (int u : g.edges[e].members)
          if (alive[u]) {
            head[e] = u;
            --deg[u];
          }
      }
      --edge_alive[e];
    }
  }
  return detail::orientation_from_heads(g, std::move(head));
}

// Globally minimal maximal out-degree, by binary search over the bound k;
// feasibility of each k is a unit-capacity flow with per-vertex lower bounds
// max(0, deg(v) - k).
inline Orientation orient_exact(const OneInclusionGraph& g) {
  int lo = 0, hi = 0;
  for (int v = 0; v < g.num_vertices(); ++v) hi = std::max(hi, g.degree(v));
  std::optional<std::vector<int>> best = detail::orient_with_bound(g, hi);
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    auto attempt = detail::orient_with_bound(g, mid);
    if (attempt) {
      best = std::move(attempt);
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return detail::orientation_from_heads(g, std::move(*best));
}

// ---------------------------------------------------------------------------
// mu_H(m) and the transductive predictor

namespace detail {

// Enumerates all size-m multisets of {0..n-1} as sorted index vectors.
inline void for_each_multiset(int n, int m, const std::function<void(const std::vector<int>&)>& f,
                              std::int64_t cap = 200000) {
  std::vector<int> pick(m, 0);
  std::int64_t count = 0;
  for (;;) {
    if (++count > cap) throw ResourceError("multiset enumeration cap exceeded");
    f(pick);
    int i = m - 1;
    while (i >= 0 && pick[i] == n - 1) --i;
    if (i < 0) break;
    const int v = pick[i] + 1;
    for (int j = i; j < m; ++j) pick[j] = v;
  }
}

inline std::vector<std::string> points_of(const FiniteClass& cls, const std::vector<int>& idx) {
  std::vector<std::string> pts;
  pts.reserve(idx.size());
  for (int i : idx) pts.push_back(cls.domain[i]);
  return pts;
}

}  // namespace detail

struct MuMode {
  bool exhaustive = true;
  int sample_count = 0;  // sampled mode: number of multisets drawn
  std::uint64_t seed = 0;

  static MuMode Exhaustive() { return MuMode{}; }
  static MuMode Sampled(int k, std::uint64_t seed) { return MuMode{false, k, seed}; }
};

struct MuResult {
  Rational value;
  bool lower_bound_only = false;  // sampled mode only inspects some S
};

// mu_H(m) = max over size-m samples S of md(G(H|_S)).
inline MuResult mu_profile(const FiniteClass& cls, int m, const MuMode& mode = MuMode::Exhaustive(),
                           int md_cap = 20, std::int64_t multiset_cap = 200000) {
  MuResult result;
  result.value = Rational(0, 1);
  auto consider = [&](const std::vector<int>& idx) {
    auto g = build_graph(cls, detail::points_of(cls, idx));
    if (g.num_vertices() > md_cap)
      throw ResourceError("mu_profile: graph exceeds exhaustive md cap");
    const Rational md = max_avg_degree(g, md_cap).value();
    if (result.value < md) result.value = md;
  };
  if (mode.exhaustive) {
    detail::for_each_multiset(cls.num_points(), m, consider, multiset_cap);
  } else {
    result.lower_bound_only = true;
    Rng rng(mode.seed);
    for (int k = 0; k < mode.sample_count; ++k) {
      std::vector<int> idx(m);
      for (int j = 0; j < m; ++j)
        idx[j] = static_cast<int>(rng.uniform_int(0, cls.num_points() - 1));
      std::sort(idx.begin(), idx.end());
      consider(idx);
    }
  }
  return result;
}

// Alg. 1: given all labels of S except position i, predict the label at i.
// labels[j] must hold the known label index for every j != i.
inline int predict_transductive(const FiniteClass& cls, const std::vector<std::string>& sample,
                                const std::vector<int>& labels, int i) {
  auto g = build_graph(cls, sample);
  std::vector<int> alive(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) alive[v] = v;
  for (int j = 0; j < static_cast<int>(sample.size()) && !alive.empty(); ++j) {
    if (j == i) continue;
    std::vector<int> next;
    for (int v : alive)
      if (g.vertices[v][j] == labels[j]) next.push_back(v);
    if (next.empty())
      throw NonRealizableError("no hypothesis consistent with label at point " + sample[j]);
    alive = std::move(next);
  }
  if (alive.size() == 1) return g.vertices[alive[0]][i];
  // the consistent vertices are exactly the edge e_{i,h}
  const Orientation o = orient_exact(g);
  for (int e = 0; e < g.num_edges(); ++e) {
    if (g.edges[e].coord != i) continue;
    if (g.edges[e].members == alive) return g.vertices[o.head[e]][i];
  }
  throw DomainError("consistent vertex set does not form an edge (internal error)");
}

// Worst-case transductive error of the exact-orientation predictor:
// max over S and h* of d+(h*)/m, which by the out-degree identity equals the
// fraction of held-out positions predicted wrongly.
inline Rational worst_case_transductive_error(const FiniteClass& cls, int m,
                                              std::int64_t multiset_cap = 200000) {
  Rational worst(0, 1);
  detail::for_each_multiset(
      cls.num_points(), m,
      [&](const std::vector<int>& idx) {
        auto g = build_graph(cls, detail::points_of(cls, idx));
        const Orientation o = orient_exact(g);
        const Rational err(o.max_out_degree(), m);
        if (worst < err) worst = err;
      },
      multiset_cap);
  return worst;
}

}  // namespace oneinc
