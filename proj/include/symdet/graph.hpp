#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symdet/error.hpp"
#include "symdet/field.hpp"
#include "symdet/poly.hpp"

namespace symdet {

/// A matrix entry or edge label: a constant, a variable, or a constant times a variable.
struct Weight {
  std::string var;    // empty for constants
  FieldElement coef;  // the constant, or the scale of `var`

  static Weight constant(const FieldElement& c) { return Weight{{}, c}; }
  static Weight variable(const std::string& name, const FieldSpec& spec) {
    return Weight{name, FieldElement::one(spec)};
  }
  static Weight scaled(const std::string& name, const FieldElement& c) { return Weight{name, c}; }

  bool is_zero() const { return coef.is_zero(); }
  bool is_constant() const { return var.empty(); }
  bool is_plain_variable() const { return !var.empty() && coef.is_one(); }

  Weight times(const FieldElement& k) const { return Weight{var, coef * k}; }

  Weight in(const FieldSpec& spec) const { return Weight{var, embed(coef, spec)}; }

  DensePolynomial poly() const {
    if (var.empty()) return DensePolynomial::constant(coef);
    return DensePolynomial::variable(var, coef.spec()) * coef;
  }

  FieldElement evaluate(const Assignment& point, const FieldSpec& spec) const {
    FieldElement c = embed(coef, spec);
    if (var.empty()) return c;
    auto it = point.find(var);
    if (it == point.end()) throw Error(ErrorCode::missing_assignment, "no value for " + var);
    return c * embed(it->second, spec);
  }

  std::string to_string() const {
    if (var.empty()) return coef.to_string();
    if (coef.is_one()) return var;
    return coef.to_string() + "*" + var;
  }

  static Weight parse(std::string_view text, const FieldSpec& spec) {
    if (text.empty()) throw Error(ErrorCode::parse_error, "empty matrix entry");
    auto star = text.find('*');
    if (star != std::string_view::npos) {
      return scaled(std::string(text.substr(star + 1)), FieldElement::parse(text.substr(0, star), spec));
    }
    char ch = text.front();
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+') {
      return constant(FieldElement::parse(text, spec));
    }
    return variable(std::string(text), spec);
  }

  friend bool operator==(const Weight& a, const Weight& b) { return a.var == b.var && a.coef == b.coef; }
};

/// Square matrix of weights over one field.
class SymbolicMatrix {
 public:
  explicit SymbolicMatrix(std::size_t dim = 0, FieldSpec spec = {}, bool symmetric = false)
      : dim_(dim), spec_(spec), symmetric_(symmetric), entries_(dim * dim, Weight::constant(FieldElement::zero(spec))) {}

  std::size_t dim() const { return dim_; }
  const FieldSpec& spec() const { return spec_; }
  bool symmetric() const { return symmetric_; }
  void set_symmetric(bool s) { symmetric_ = s; }
  /// Entries may be arbitrary linear forms (comparison mode); off by default.
  bool linear_entries() const { return linear_entries_; }
  void set_linear_entries(bool l) { linear_entries_ = l; }

  const Weight& at(std::size_t i, std::size_t j) const { return entries_.at(i * dim_ + j); }
  void set(std::size_t i, std::size_t j, const Weight& w) { entries_.at(i * dim_ + j) = w.in(spec_); }

  bool is_actually_symmetric() const {
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = i + 1; j < dim_; ++j) {
        if (!(at(i, j) == at(j, i))) return false;
      }
    }
    return true;
  }

  std::vector<std::string> variables() const {
    std::set<std::string, bool (*)(const std::string&, const std::string&)> vs(
        [](const std::string& a, const std::string& b) { return natural_less(a, b); });
    for (const auto& w : entries_) {
      if (!w.var.empty()) vs.insert(w.var);
    }
    return {vs.begin(), vs.end()};
  }

  /// The same matrix with every coefficient mapped into `target`.
  SymbolicMatrix in(const FieldSpec& target) const {
    SymbolicMatrix m(dim_, target, symmetric_);
    m.linear_entries_ = linear_entries_;
    for (std::size_t k = 0; k < entries_.size(); ++k) m.entries_[k] = entries_[k].in(target);
    return m;
  }

  std::vector<std::vector<FieldElement>> evaluate(const Assignment& point, const FieldSpec& spec) const {
    std::vector<std::vector<FieldElement>> v(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      v[i].reserve(dim_);
      for (std::size_t j = 0; j < dim_; ++j) v[i].push_back(at(i, j).evaluate(point, spec));
    }
    return v;
  }

  friend bool operator==(const SymbolicMatrix& a, const SymbolicMatrix& b) {
    return a.dim_ == b.dim_ && a.spec_ == b.spec_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t dim_;
  FieldSpec spec_;
  bool symmetric_;
  bool linear_entries_ = false;
  std::vector<Weight> entries_;
};

namespace detail {

// Shared vertex/role bookkeeping for graphs and digraphs.
class VertexSet {
 public:
  std::size_t add_vertex(const std::string& role = {}) {
    roles_.push_back(role);
    return roles_.size() - 1;
  }
  std::size_t vertex_count() const { return roles_.size(); }
  const std::string& role(std::size_t v) const { return roles_.at(v); }
  void set_role(std::size_t v, const std::string& role) { roles_.at(v) = role; }

  std::size_t find_role(const std::string& role) const {
    for (std::size_t v = 0; v < roles_.size(); ++v) {
      if (roles_[v] == role) return v;
    }
    throw Error(ErrorCode::bad_arity, "no vertex with role " + role);
  }

  std::string label(std::size_t v) const { return roles_[v].empty() ? "v" + std::to_string(v) : roles_[v]; }

 protected:
  std::vector<std::string> roles_;
};

}  // namespace detail

/// Directed graph with weighted arcs (loops allowed). Zero weights are not stored.
class WeightedDigraph : public detail::VertexSet {
 public:
  explicit WeightedDigraph(FieldSpec spec = {}) : spec_(spec) {}
  const FieldSpec& spec() const { return spec_; }

  void add_arc(std::size_t u, std::size_t v, const Weight& w) {
    check(u, v);
    if (w.is_zero()) return;
    if (!arcs_.emplace(std::make_pair(u, v), w.in(spec_)).second) {
      throw Error(ErrorCode::bad_arity, "parallel arc " + label(u) + "->" + label(v));
    }
  }
  void set_arc(std::size_t u, std::size_t v, const Weight& w) {
    check(u, v);
    arcs_.erase({u, v});
    if (!w.is_zero()) arcs_.emplace(std::make_pair(u, v), w.in(spec_));
  }
  void remove_arc(std::size_t u, std::size_t v) { arcs_.erase({u, v}); }
  bool has_arc(std::size_t u, std::size_t v) const { return arcs_.count({u, v}) > 0; }
  const Weight& arc(std::size_t u, std::size_t v) const { return arcs_.at({u, v}); }
  const std::map<std::pair<std::size_t, std::size_t>, Weight>& arcs() const { return arcs_; }

  std::vector<std::size_t> successors(std::size_t u) const {
    std::vector<std::size_t> out;
    for (auto it = arcs_.lower_bound({u, 0}); it != arcs_.end() && it->first.first == u; ++it) {
      out.push_back(it->first.second);
    }
    return out;
  }

 private:
  void check(std::size_t u, std::size_t v) const {
    if (u >= vertex_count() || v >= vertex_count()) throw Error(ErrorCode::bad_arity, "arc endpoint out of range");
  }

  FieldSpec spec_;
  std::map<std::pair<std::size_t, std::size_t>, Weight> arcs_;
};

/// Undirected graph with weighted edges (loops allowed), stored with u <= v.
class WeightedGraph : public detail::VertexSet {
 public:
  explicit WeightedGraph(FieldSpec spec = {}) : spec_(spec) {}
  const FieldSpec& spec() const { return spec_; }

  void add_edge(std::size_t u, std::size_t v, const Weight& w) {
    check(u, v);
    if (w.is_zero()) return;
    if (!edges_.emplace(key(u, v), w.in(spec_)).second) {
      throw Error(ErrorCode::bad_arity, "parallel edge " + label(u) + "--" + label(v));
    }
  }
  void set_edge(std::size_t u, std::size_t v, const Weight& w) {
    check(u, v);
    edges_.erase(key(u, v));
    if (!w.is_zero()) edges_.emplace(key(u, v), w.in(spec_));
  }
  void remove_edge(std::size_t u, std::size_t v) { edges_.erase(key(u, v)); }
  bool has_edge(std::size_t u, std::size_t v) const { return edges_.count(key(u, v)) > 0; }
  const Weight& edge(std::size_t u, std::size_t v) const { return edges_.at(key(u, v)); }
  const std::map<std::pair<std::size_t, std::size_t>, Weight>& edges() const { return edges_; }

  std::vector<std::vector<std::size_t>> neighbours() const {
    std::vector<std::vector<std::size_t>> nb(vertex_count());
    for (const auto& [e, w] : edges_) {
      nb[e.first].push_back(e.second);
      if (e.first != e.second) nb[e.second].push_back(e.first);
    }
    return nb;
  }

 private:
  static std::pair<std::size_t, std::size_t> key(std::size_t u, std::size_t v) { return {std::min(u, v), std::max(u, v)}; }
  void check(std::size_t u, std::size_t v) const {
    if (u >= vertex_count() || v >= vertex_count()) throw Error(ErrorCode::bad_arity, "edge endpoint out of range");
  }

  FieldSpec spec_;
  std::map<std::pair<std::size_t, std::size_t>, Weight> edges_;
};

inline SymbolicMatrix adjacency(const WeightedGraph& g) {
  SymbolicMatrix m(g.vertex_count(), g.spec(), true);
  for (const auto& [e, w] : g.edges()) {
    m.set(e.first, e.second, w);
    m.set(e.second, e.first, w);
  }
  return m;
}

inline SymbolicMatrix adjacency(const WeightedDigraph& g) {
  SymbolicMatrix m(g.vertex_count(), g.spec(), false);
  for (const auto& [a, w] : g.arcs()) m.set(a.first, a.second, w);
  return m;
}

namespace detail {

inline std::string dot_vertices(const VertexSet& g) {
  std::string out;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    out += "  " + g.label(v) + " [shape=" + (g.role(v).empty() ? "circle" : "doublecircle") + "];\n";
  }
  return out;
}

}  // namespace detail

/// Graphviz rendering; vertices with a role are double-circled.
inline std::string export_dot(const WeightedGraph& g) {
  std::string out = "graph G {\n" + detail::dot_vertices(g);
  for (const auto& [e, w] : g.edges()) {
    out += "  " + g.label(e.first) + " -- " + g.label(e.second) + " [label=\"" + w.to_string() + "\"];\n";
  }
  return out + "}\n";
}

inline std::string export_dot(const WeightedDigraph& g) {
  std::string out = "digraph G {\n" + detail::dot_vertices(g);
  for (const auto& [a, w] : g.arcs()) {
    out += "  " + g.label(a.first) + " -> " + g.label(a.second) + " [label=\"" + w.to_string() + "\"];\n";
  }
  return out + "}\n";
}

/// First line `t [symmetric]`, then t rows of whitespace-separated entries.
/// Non-rational matrices carry a trailing `field <name>` on the first line.
inline std::string render_matrix(const SymbolicMatrix& m) {
  std::ostringstream out;
  out << m.dim();
  if (m.symmetric()) out << " symmetric";
  if (m.spec() != FieldSpec::rational()) out << " field " << m.spec().name();
  out << '\n';
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) out << (j ? " " : "") << m.at(i, j).to_string();
    out << '\n';
  }
  return out.str();
}

inline SymbolicMatrix parse_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header;
  while (std::getline(in, header)) {
    if (header.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  std::istringstream hs(header);
  std::size_t dim = 0;
  if (!(hs >> dim)) throw Error(ErrorCode::parse_error, "matrix header must start with the dimension");
  bool symmetric = false;
  FieldSpec spec;
  std::string word;
  while (hs >> word) {
    if (word == "symmetric") {
      symmetric = true;
    } else if (word == "field") {
      if (!(hs >> word)) throw Error(ErrorCode::parse_error, "missing field name");
      spec = FieldSpec::parse(word);
    } else {
      throw Error(ErrorCode::parse_error, "unknown matrix header word '" + word + "'");
    }
  }
  SymbolicMatrix m(dim, spec, symmetric);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (!(in >> word)) throw Error(ErrorCode::parse_error, "matrix has fewer than t*t entries");
      m.set(i, j, Weight::parse(word, spec));
    }
  }
  if (in >> word) throw Error(ErrorCode::parse_error, "matrix has more than t*t entries");
  if (symmetric && !m.is_actually_symmetric()) throw Error(ErrorCode::parse_error, "matrix marked symmetric is not");
  return m;
}

inline nlohmann::json matrix_json(const SymbolicMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m.at(i, j).to_string());
    rows.push_back(std::move(row));
  }
  return {{"dim", m.dim()}, {"symmetric", m.symmetric()}, {"field", m.spec().name()}, {"entries", rows}};
}

/// Sum over all cycle covers (permutations with nonzero arcs) of the cover
/// weight; with `signed_sum` each cover is multiplied by (-1)^(#even cycles).
inline DensePolynomial cycle_cover_sum(const SymbolicMatrix& a, bool signed_sum) {
  const std::size_t n = a.dim();
  if (n > 12) throw Error(ErrorCode::too_large, "cycle cover enumeration limited to 12 vertices");
  std::vector<std::size_t> perm(n);
  std::vector<bool> used(n, false);
  DensePolynomial total(a.spec());
  auto finish = [&] {
    DensePolynomial w = DensePolynomial::constant(FieldElement::one(a.spec()));
    for (std::size_t i = 0; i < n; ++i) w *= a.at(i, perm[i]).poly();
    if (signed_sum) {
      std::vector<bool> seen(n, false);
      std::size_t even = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (seen[i]) continue;
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = perm[j]) {
          seen[j] = true;
          ++len;
        }
        even += len % 2 == 0;
      }
      if (even % 2) w = -w;
    }
    total += w;
  };
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      finish();
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || a.at(i, j).is_zero()) continue;
      used[j] = true;
      perm[i] = j;
      self(self, i + 1);
      used[j] = false;
    }
  };
  rec(rec, 0);
  return total;
}

inline DensePolynomial cycle_cover_sum(const WeightedGraph& g, bool signed_sum) {
  return cycle_cover_sum(adjacency(g), signed_sum);
}
inline DensePolynomial cycle_cover_sum(const WeightedDigraph& g, bool signed_sum) {
  return cycle_cover_sum(adjacency(g), signed_sum);
}

/// Sum of the weights of the cycle covers made of loops and 2-cycles only; a
/// 2-cycle through u and v weighs a(u,v)*a(v,u).
inline DensePolynomial cycle_cover_sum_short(const SymbolicMatrix& a) {
  const std::size_t n = a.dim();
  if (n > 16) throw Error(ErrorCode::too_large, "short cycle cover enumeration limited to 16 vertices");
  std::vector<bool> covered(n, false);
  auto rec = [&](auto&& self, std::size_t from) -> DensePolynomial {
    std::size_t v = from;
    while (v < n && covered[v]) ++v;
    if (v == n) return DensePolynomial::constant(FieldElement::one(a.spec()));
    DensePolynomial sum(a.spec());
    covered[v] = true;
    if (!a.at(v, v).is_zero()) sum += a.at(v, v).poly() * self(self, v + 1);
    for (std::size_t u = v + 1; u < n; ++u) {
      if (covered[u] || a.at(v, u).is_zero() || a.at(u, v).is_zero()) continue;
      covered[u] = true;
      sum += a.at(v, u).poly() * a.at(u, v).poly() * self(self, v + 1);
      covered[u] = false;
    }
    covered[v] = false;
    return sum;
  };
  return rec(rec, 0);
}

inline DensePolynomial cycle_cover_sum_short(const WeightedGraph& g) { return cycle_cover_sum_short(adjacency(g)); }

}  // namespace symdet
