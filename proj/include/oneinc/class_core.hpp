#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "oneinc/common.hpp"
#include "oneinc/rng.hpp"

namespace oneinc {

// A multiclass hypothesis class over a finite domain. Rows are hypotheses,
// columns are domain points; entries index into the label alphabet. Rows are
// pairwise distinct and the alphabet may contain the abstain sentinel, but
// sample targets never do. Immutable after construction.
class FiniteClass {
 public:
  std::vector<std::string> domain;
  std::vector<std::string> labels;
  std::vector<std::vector<int>> table;

  static FiniteClass make(std::vector<std::string> domain, std::vector<std::string> labels,
                          std::vector<std::vector<int>> table) {
    FiniteClass c;
    c.domain = std::move(domain);
    c.labels = std::move(labels);
    c.table = std::move(table);
    c.validate();
    return c;
  }

  int num_points() const { return static_cast<int>(domain.size()); }
  int num_labels() const { return static_cast<int>(labels.size()); }
  int num_rows() const { return static_cast<int>(table.size()); }

  int point_index(const std::string& id) const {
    for (int i = 0; i < num_points(); ++i)
      if (domain[i] == id) return i;
    throw DomainError("unknown point id: " + id);
  }

  int label_index(const std::string& id) const {
    for (int i = 0; i < num_labels(); ++i)
      if (labels[i] == id) return i;
    throw DomainError("unknown label: " + id);
  }

  std::optional<int> abstain_index() const {
    for (int i = 0; i < num_labels(); ++i)
      if (is_abstain(labels[i])) return i;
    return std::nullopt;
  }

  void validate() const {
    if (domain.empty()) throw DomainError("FiniteClass: empty domain");
    if (labels.empty()) throw DomainError("FiniteClass: empty label alphabet");
    {
      std::set<std::string> seen(domain.begin(), domain.end());
      if (seen.size() != domain.size()) throw DomainError("FiniteClass: duplicate point id");
    }
    {
      std::set<std::string> seen(labels.begin(), labels.end());
      if (seen.size() != labels.size()) throw DomainError("FiniteClass: duplicate label");
    }
    for (const auto& row : table) {
      if (static_cast<int>(row.size()) != num_points())
        throw DomainError("FiniteClass: row length mismatch");
      for (int v : row)
        if (v < 0 || v >= num_labels()) throw DomainError("FiniteClass: label index out of range");
    }
    std::map<std::vector<int>, int> seen_rows;
    for (int r = 0; r < num_rows(); ++r) {
      auto [it, inserted] = seen_rows.emplace(table[r], r);
      if (!inserted)
        throw DomainError("FiniteClass: duplicate rows " + std::to_string(it->second) + " and " +
                          std::to_string(r));
    }
  }
};

// A labeled training sample; multiplicity allowed, indices refer to the
// owning class. Targets are functions into Y, so abstain is rejected here.
struct LabeledSample {
  std::vector<std::pair<int, int>> pairs;  // (point index, label index)

  static LabeledSample make(const FiniteClass& cls, std::vector<std::pair<int, int>> pairs) {
    const auto ab = cls.abstain_index();
    for (const auto& [p, y] : pairs) {
      if (p < 0 || p >= cls.num_points()) throw DomainError("sample: point index out of range");
      if (y < 0 || y >= cls.num_labels()) throw DomainError("sample: label index out of range");
      if (ab && y == *ab) throw DomainError("sample: abstain is not a valid target label");
    }
    LabeledSample s;
    s.pairs = std::move(pairs);
    return s;
  }

  int size() const { return static_cast<int>(pairs.size()); }
};

// Marginal distribution over the domain of a class.
struct DiscreteDistribution {
  std::vector<double> weights;  // aligned with FiniteClass::domain

  static DiscreteDistribution make(std::vector<double> weights) {
    double sum = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw DomainError("distribution: negative mass");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw DomainError("distribution: masses must sum to 1");
    DiscreteDistribution d;
    d.weights = std::move(weights);
    return d;
  }

  static DiscreteDistribution uniform(int n) {
    return make(std::vector<double>(n, 1.0 / n));
  }

  int sample(Rng& rng) const { return rng.discrete(weights); }
};

// A predictor is a total assignment of labels to domain points, queried by
// point index. Learners that materialize a hypothesis wrap it with from_row.
using Predictor = std::function<int(int)>;

inline Predictor predictor_from_row(std::vector<int> row) {
  return [row = std::move(row)](int p) { return row[p]; };
}

// Pr_{x~D}(h(x) != target(x)); exact weighted disagreement mass. Abstain is a
// label index like any other, so it mismatches every ordinary label and
// matches itself.
inline double true_error(const Predictor& h, const Predictor& target,
                         const DiscreteDistribution& dist) {
  double err = 0.0;
  for (std::size_t x = 0; x < dist.weights.size(); ++x)
    if (h(static_cast<int>(x)) != target(static_cast<int>(x))) err += dist.weights[x];
  return err;
}

inline double true_error(const std::vector<int>& h, const std::vector<int>& target,
                         const DiscreteDistribution& dist) {
  double err = 0.0;
  for (std::size_t x = 0; x < dist.weights.size(); ++x)
    if (h[x] != target[x]) err += dist.weights[x];
  return err;
}

inline double empirical_error(const std::vector<int>& h, const LabeledSample& sample) {
  if (sample.pairs.empty()) return 0.0;
  int wrong = 0;
  for (const auto& [p, y] : sample.pairs)
    if (h[p] != y) ++wrong;
  return static_cast<double>(wrong) / sample.size();
}

// H|_A: restriction of every hypothesis to the given points, deduplicated
// (first occurrence kept).
inline FiniteClass restrict(const FiniteClass& cls, const std::vector<std::string>& subset) {
  std::vector<int> idx;
  idx.reserve(subset.size());
  for (const auto& id : subset) idx.push_back(cls.point_index(id));
  std::vector<std::vector<int>> rows;
  std::set<std::vector<int>> seen;
  for (const auto& row : cls.table) {
    std::vector<int> r;
    r.reserve(idx.size());
    for (int i : idx) r.push_back(row[i]);
    if (seen.insert(r).second) rows.push_back(std::move(r));
  }
  return FiniteClass::make(subset, cls.labels, std::move(rows));
}

// Disjoint union of m copies: domain X x [m], rows are all m-tuples of
// original rows glued coordinate-wise (every function whose restriction to
// each copy lies in the class). Point ids become "<id>@<copy>".
inline FiniteClass disjoint_union(const FiniteClass& cls, int m,
                                  std::int64_t row_cap = std::int64_t(1) << 20) {
  if (m < 1) throw DomainError("disjoint_union: m must be >= 1");
  std::int64_t rows = 1;
  for (int i = 0; i < m; ++i) {
    rows *= cls.num_rows();
    if (rows > row_cap) throw ResourceError("disjoint_union: row cap exceeded");
  }
  std::vector<std::string> domain;
  for (int c = 1; c <= m; ++c)
    for (const auto& id : cls.domain) domain.push_back(id + "@" + std::to_string(c));
  std::vector<std::vector<int>> table;
  table.reserve(static_cast<std::size_t>(rows));
  std::vector<int> choice(m, 0);
  for (;;) {
    std::vector<int> row;
    row.reserve(domain.size());
    for (int c = 0; c < m; ++c)
      for (int p = 0; p < cls.num_points(); ++p) row.push_back(cls.table[choice[c]][p]);
    table.push_back(std::move(row));
    int c = m - 1;
    while (c >= 0 && ++choice[c] == cls.num_rows()) choice[c--] = 0;
    if (c < 0) break;
  }
  return FiniteClass::make(std::move(domain), cls.labels, std::move(table));
}

// Gamma maps source points into the target domain; Lambda maps target labels
// (including abstain, which margin predictors can emit) back to source
// labels.
struct Realization {
  std::unordered_map<std::string, std::string> gamma;
  std::unordered_map<std::string, std::string> lambda;
};

struct RealizationReport {
  bool ok = true;
  int row = -1;    // first source row with no realizer
  int point = -1;  // point at which the last surviving candidates died
};

// Checks source <= Lambda o target o Gamma: every source row must equal
// Lambda(h(Gamma(.))) for some target row h. On failure reports the first
// unrealizable row and the point that eliminated the final candidate.
inline RealizationReport verify_realization(const FiniteClass& source, const FiniteClass& target,
                                            const Realization& r) {
  std::vector<int> gamma_idx(source.num_points());
  for (int p = 0; p < source.num_points(); ++p) {
    auto it = r.gamma.find(source.domain[p]);
    if (it == r.gamma.end()) throw DomainError("realization: gamma not total on source domain");
    gamma_idx[p] = target.point_index(it->second);
  }
  std::vector<int> lambda_idx(target.num_labels());
  for (int y = 0; y < target.num_labels(); ++y) {
    auto it = r.lambda.find(target.labels[y]);
    if (it == r.lambda.end())
      throw DomainError("realization: lambda not total on target alphabet");
    lambda_idx[y] = source.label_index(it->second);
  }
  for (int s = 0; s < source.num_rows(); ++s) {
    std::vector<int> alive(target.num_rows());
    for (int h = 0; h < target.num_rows(); ++h) alive[h] = h;
    int died_at = -1;
    for (int p = 0; p < source.num_points() && !alive.empty(); ++p) {
      std::vector<int> next;
      for (int h : alive)
        if (lambda_idx[target.table[h][gamma_idx[p]]] == source.table[s][p]) next.push_back(h);
      if (next.empty()) died_at = p;
      alive = std::move(next);
    }
    if (alive.empty()) return RealizationReport{false, s, died_at};
  }
  return RealizationReport{};
}

// ---------------------------------------------------------------------------
// Class file format: {"domain": [...], "labels": [...], "hypotheses": [[...]]}
// The literal "!abstain" in labels denotes the abstain sentinel and may not
// be used anywhere else.

inline FiniteClass class_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("class file: top level must be an object");
  for (const auto& [key, _] : j.items())
    if (key != "domain" && key != "labels" && key != "hypotheses")
      throw DomainError("class file: unknown key '" + key + "'");
  if (!j.contains("domain") || !j.contains("labels") || !j.contains("hypotheses"))
    throw DomainError("class file: requires domain, labels, hypotheses");
  std::vector<std::string> domain = j.at("domain").get<std::vector<std::string>>();
  std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
  for (const auto& d : domain)
    if (is_abstain(d)) throw DomainError("class file: '!abstain' is reserved for labels");
  FiniteClass probe;  // to reuse index lookups before full validation
  probe.domain = domain;
  probe.labels = labels;
  std::vector<std::vector<int>> table;
  std::map<std::vector<int>, int> seen;
  for (const auto& jrow : j.at("hypotheses")) {
    std::vector<int> row;
    for (const auto& cell : jrow) row.push_back(probe.label_index(cell.get<std::string>()));
    auto [it, inserted] = seen.emplace(row, static_cast<int>(table.size()));
    if (!inserted)
      throw DomainError("class file: duplicate hypothesis rows " + std::to_string(it->second) +
                        " and " + std::to_string(table.size()));
    table.push_back(std::move(row));
  }
  return FiniteClass::make(std::move(domain), std::move(labels), std::move(table));
}

inline nlohmann::json class_to_json(const FiniteClass& cls) {
  nlohmann::json j;
  j["domain"] = cls.domain;
  j["labels"] = cls.labels;
  auto rows = nlohmann::json::array();
  for (const auto& row : cls.table) {
    auto jrow = nlohmann::json::array();
    for (int v : row) jrow.push_back(cls.labels[v]);
    rows.push_back(std::move(jrow));
  }
  j["hypotheses"] = std::move(rows);
  return j;
}

inline FiniteClass load_class(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open class file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("class file parse error: ") + e.what());
  }
  return class_from_json(j);
}

inline void save_class(const FiniteClass& cls, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write class file: " + path);
  out << class_to_json(cls).dump(2) << "\n";
}

// Draws an i.i.d. sample of size m labeled by the target row.
inline LabeledSample draw_sample(const FiniteClass& cls, const std::vector<int>& target_row,
                                 const DiscreteDistribution& dist, int m, Rng& rng) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(m);
  for (int i = 0; i < m; ++i) {
    int p = dist.sample(rng);
    pairs.emplace_back(p, target_row[p]);
  }
  return LabeledSample::make(cls, std::move(pairs));
}

}  // namespace oneinc
