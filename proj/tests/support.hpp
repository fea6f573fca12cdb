#pragma once

// Test-side helpers and oracles. Everything here is intentionally
// independent of the library's implementation paths: oracles recompute
// values from raw definitions.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oneinc/class_core.hpp"
#include "oneinc/one_inclusion.hpp"
#include "oneinc/rng.hpp"

namespace testsupport {

// All functions {x1..xn} -> {0..k-1}.
inline oneinc::FiniteClass full_class(int n, int k) {
  std::vector<std::string> domain, labels;
  for (int i = 1; i <= n; ++i) domain.push_back("x" + std::to_string(i));
  for (int y = 0; y < k; ++y) labels.push_back(std::to_string(y));
  std::vector<std::vector<int>> table;
  std::vector<int> row(n, 0);
  for (;;) {
    table.push_back(row);
    int i = n - 1;
    while (i >= 0 && ++row[i] == k) row[i--] = 0;
    if (i < 0) break;
  }
  return oneinc::FiniteClass::make(domain, labels, table);
}

// First Cantor class built directly from the definition: labels are subset
// bitmasks as decimal strings plus "*"; h_A(x) = A if x in A else *.
inline oneinc::FiniteClass first_cantor_reference(int n) {
  std::vector<std::string> domain, labels;
  for (int i = 1; i <= n; ++i) domain.push_back("x" + std::to_string(i));
  for (int a = 0; a < (1 << n); ++a) labels.push_back(std::to_string(a));
  labels.push_back("*");
  const int star = (1 << n);
  std::vector<std::vector<int>> table;
  for (int a = 0; a < (1 << n); ++a) {
    std::vector<int> row(n, star);
    for (int i = 0; i < n; ++i)
      if (a & (1 << i)) row[i] = a;
    table.push_back(row);
  }
  return oneinc::FiniteClass::make(domain, labels, table);
}

inline oneinc::FiniteClass random_class(oneinc::Rng& rng, int n_points, int n_labels,
                                        int max_rows) {
  std::vector<std::string> domain, labels;
  for (int i = 1; i <= n_points; ++i) domain.push_back("p" + std::to_string(i));
  for (int y = 0; y < n_labels; ++y) labels.push_back(std::string(1, char('a' + y)));
  std::set<std::vector<int>> rows;
  const int want = static_cast<int>(rng.uniform_int(1, max_rows));
  for (int tries = 0; tries < 4 * want && static_cast<int>(rows.size()) < want; ++tries) {
    std::vector<int> row(n_points);
    for (auto& v : row) v = static_cast<int>(rng.uniform_int(0, n_labels - 1));
    rows.insert(std::move(row));
  }
  return oneinc::FiniteClass::make(domain, labels,
                                   std::vector<std::vector<int>>(rows.begin(), rows.end()));
}

// Definition-direct maximal average degree: for every nonempty vertex
// subset build the induced edge list (intersections of size >= 2, maximal
// ones only) and average the induced degrees.
inline oneinc::Rational md_oracle(const oneinc::OneInclusionGraph& g) {
  const int n = g.num_vertices();
  oneinc::Rational best(0, 1);
  for (std::uint32_t U = 1; U < (1u << n); ++U) {
    std::vector<std::set<int>> induced;
    for (const auto& e : g.edges) {
      std::set<int> inter;
      for (int v : e.members)
        if (U & (1u << v)) inter.insert(v);
      if (inter.size() >= 2) induced.push_back(std::move(inter));
    }
    // drop non-maximal intersections (never fires for one-inclusion graphs)
    std::vector<bool> keep(induced.size(), true);
    for (std::size_t a = 0; a < induced.size(); ++a)
      for (std::size_t b = 0; b < induced.size(); ++b)
        if (a != b && keep[a] && keep[b] &&
            std::includes(induced[b].begin(), induced[b].end(), induced[a].begin(),
                          induced[a].end()) &&
            induced[a] != induced[b])
          keep[a] = false;
    // also dedup identical intersections
    std::set<std::set<int>> uniq;
    long long degsum = 0;
    for (std::size_t a = 0; a < induced.size(); ++a)
      if (keep[a] && uniq.insert(induced[a]).second) degsum += static_cast<long long>(induced[a].size());
    oneinc::Rational avg(degsum, oneinc::popcount32(U));
    if (best < avg) best = avg;
  }
  return best;
}

// Minimum over all orientations of the maximal out-degree, by exhaustive
// enumeration of head choices.
inline int min_max_outdegree_oracle(const oneinc::OneInclusionGraph& g) {
  const int E = g.num_edges();
  std::vector<int> choice(E, 0);
  int best = 1 << 30;
  for (;;) {
    std::vector<int> outdeg(g.num_vertices(), 0);
    for (int e = 0; e < E; ++e)
      for (int v : g.edges[e].members)
        if (v != g.edges[e].members[choice[e]]) ++outdeg[v];
    int mx = 0;
    for (int d : outdeg) mx = std::max(mx, d);
    best = std::min(best, mx);
    int e = E - 1;
    while (e >= 0 && ++choice[e] == static_cast<int>(g.edges[e].members.size())) choice[e--] = 0;
    if (e < 0) break;
  }
  return E == 0 ? 0 : best;
}

}  // namespace testsupport
