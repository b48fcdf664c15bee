#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "symdet/error.hpp"
#include "symdet/field.hpp"

namespace symdet {

/// Orders names so that x2 < x10: runs of digits compare numerically.
inline bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::isdigit(static_cast<unsigned char>(a[i])) && std::isdigit(static_cast<unsigned char>(b[j]))) {
      std::size_t i2 = i, j2 = j;
      while (i2 < a.size() && std::isdigit(static_cast<unsigned char>(a[i2]))) ++i2;
      while (j2 < b.size() && std::isdigit(static_cast<unsigned char>(b[j2]))) ++j2;
      auto da = a.substr(i, i2 - i), db = b.substr(j, j2 - j);
      while (da.size() > 1 && da.front() == '0') da.remove_prefix(1);
      while (db.size() > 1 && db.front() == '0') db.remove_prefix(1);
      if (da.size() != db.size()) return da.size() < db.size();
      if (da != db) return da < db;
      i = i2;
      j = j2;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if (a.size() - i != b.size() - j) return a.size() - i < b.size() - j;
  return a < b;
}

using Monomial = std::vector<std::uint32_t>;
using Assignment = std::map<std::string, FieldElement>;

/// Multivariate polynomial stored as exponent vector -> nonzero coefficient.
/// Variables are kept in natural order; binary operations work on the union
/// of both operands' variables.
class DensePolynomial {
 public:
  explicit DensePolynomial(FieldSpec spec = {}) : spec_(spec) {}

  static DensePolynomial variable(const std::string& name, const FieldSpec& spec = {}) {
    DensePolynomial p(spec);
    p.vars_ = {name};
    p.terms_.emplace(Monomial{1}, FieldElement::one(spec));
    return p;
  }

  static DensePolynomial constant(const FieldElement& c) {
    DensePolynomial p(c.spec());
    if (!c.is_zero()) p.terms_.emplace(Monomial{}, c);
    return p;
  }

  const FieldSpec& spec() const { return spec_; }
  const std::vector<std::string>& variables() const { return vars_; }
  const std::map<Monomial, FieldElement>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) {
      unsigned s = 0;
      for (auto e : m) s += e;
      d = std::max(d, s);
    }
    return d;
  }

  /// Adds c * x^m, where m is indexed by variables().
  void add_term(const Monomial& m, const FieldElement& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  /// Same polynomial re-indexed over `vars`, which must contain variables().
  DensePolynomial over(const std::vector<std::string>& vars) const {
    std::vector<std::size_t> where(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      auto it = std::find(vars.begin(), vars.end(), vars_[i]);
      if (it == vars.end()) throw Error(ErrorCode::unknown_variable, "variable " + vars_[i] + " dropped");
      where[i] = static_cast<std::size_t>(it - vars.begin());
    }
    DensePolynomial r(spec_);
    r.vars_ = vars;
    for (const auto& [m, c] : terms_) {
      Monomial n(vars.size(), 0);
      for (std::size_t i = 0; i < m.size(); ++i) n[where[i]] = m[i];
      r.terms_.emplace(std::move(n), c);
    }
    return r;
  }

  /// Coefficients mapped into another field via embed().
  DensePolynomial reduce(const FieldSpec& target) const {
    DensePolynomial r(target);
    r.vars_ = vars_;
    for (const auto& [m, c] : terms_) r.add_term(m, embed(c, target));
    return r;
  }

  /// Drops variables that no longer occur.
  DensePolynomial trimmed() const {
    std::vector<bool> used(vars_.size(), false);
    for (const auto& [m, c] : terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) used[i] = used[i] || m[i] > 0;
    }
    DensePolynomial r(spec_);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (used[i]) r.vars_.push_back(vars_[i]);
    }
    for (const auto& [m, c] : terms_) {
      Monomial n;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (used[i]) n.push_back(m[i]);
      }
      r.terms_.emplace(std::move(n), c);
    }
    return r;
  }

  DensePolynomial operator+(const DensePolynomial& o) const {
    auto [a, b] = align(*this, o);
    for (const auto& [m, c] : b.terms_) a.add_term(m, c);
    return a;
  }

  DensePolynomial operator-() const {
    DensePolynomial r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  DensePolynomial operator-(const DensePolynomial& o) const { return *this + (-o); }

  DensePolynomial operator*(const DensePolynomial& o) const {
    auto [a, b] = align(*this, o);
    DensePolynomial r(spec_);
    r.vars_ = a.vars_;
    Monomial m(r.vars_.size());
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
        r.add_term(m, ca * cb);
      }
    }
    return r;
  }

  DensePolynomial operator*(const FieldElement& k) const {
    DensePolynomial r(spec_);
    r.vars_ = vars_;
    for (const auto& [m, c] : terms_) r.add_term(m, c * k);
    return r;
  }

  DensePolynomial& operator+=(const DensePolynomial& o) { return *this = *this + o; }
  DensePolynomial& operator*=(const DensePolynomial& o) { return *this = *this * o; }

  friend bool operator==(const DensePolynomial& p, const DensePolynomial& q) {
    if (!(p.spec_ == q.spec_)) return false;
    auto [a, b] = align(p.trimmed(), q.trimmed());
    return a.terms_ == b.terms_;
  }

  /// Value at `point` in field `target`; coefficients are embedded first.
  FieldElement evaluate(const Assignment& point, const FieldSpec& target) const {
    std::vector<FieldElement> xs;
    for (const auto& v : vars_) {
      auto it = point.find(v);
      if (it == point.end()) throw Error(ErrorCode::missing_assignment, "no value for " + v);
      xs.push_back(embed(it->second, target));
    }
    FieldElement sum = FieldElement::zero(target);
    for (const auto& [m, c] : terms_) {
      FieldElement t = embed(c, target);
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i]) t *= xs[i].pow(m[i]);
      }
      sum += t;
    }
    return sum;
  }

  /// `coef * x1^e1 x2^e2 + ...` in graded lexicographic order; `0` for zero.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::vector<const std::pair<const Monomial, FieldElement>*> order;
    for (const auto& t : terms_) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
      unsigned da = 0, db = 0;
      for (auto e : a->first) da += e;
      for (auto e : b->first) db += e;
      if (da != db) return da > db;
      return a->first > b->first;
    });
    std::string out;
    for (auto* t : order) {
      if (!out.empty()) out += " + ";
      std::string mono;
      for (std::size_t i = 0; i < t->first.size(); ++i) {
        if (t->first[i] == 0) continue;
        if (!mono.empty()) mono += ' ';
        mono += vars_[i];
        if (t->first[i] > 1) mono += '^' + std::to_string(t->first[i]);
      }
      if (mono.empty()) {
        out += t->second.to_string();
      } else {
        out += t->second.to_string() + " * " + mono;
      }
    }
    return out;
  }

  static DensePolynomial parse(std::string_view text, const FieldSpec& spec = {}) {
    DensePolynomial result(spec);
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t next = text.find('+', pos);
      if (next == std::string_view::npos) next = text.size();
      std::string_view term = trim(text.substr(pos, next - pos));
      if (term.empty()) throw Error(ErrorCode::parse_error, "empty term in polynomial");
      FieldElement coef = FieldElement::one(spec);
      std::string_view mono = term;
      auto star = term.find('*');
      if (star != std::string_view::npos) {
        coef = FieldElement::parse(trim(term.substr(0, star)), spec);
        mono = trim(term.substr(star + 1));
      } else if (std::isdigit(static_cast<unsigned char>(term.front())) || term.front() == '-') {
        coef = FieldElement::parse(term, spec);
        mono = {};
      }
      DensePolynomial t = constant(coef);
      while (!mono.empty()) {
        std::size_t end = 0;
        while (end < mono.size() && !std::isspace(static_cast<unsigned char>(mono[end]))) ++end;
        std::string_view factor = mono.substr(0, end);
        mono = trim(mono.substr(end));
        std::uint64_t exp = 1;
        auto caret = factor.find('^');
        if (caret != std::string_view::npos) {
          exp = detail::parse_u64(factor.substr(caret + 1), 10);
          factor = factor.substr(0, caret);
        }
        if (factor.empty()) throw Error(ErrorCode::parse_error, "missing variable name in polynomial");
        DensePolynomial x = variable(std::string(factor), spec);
        for (std::uint64_t e = 0; e < exp; ++e) t *= x;
      }
      result += t;
      pos = next + 1;
    }
    return result;
  }

 private:
  static std::pair<DensePolynomial, DensePolynomial> align(const DensePolynomial& a, const DensePolynomial& b) {
    if (!(a.spec_ == b.spec_)) throw Error(ErrorCode::mixed_fields, a.spec_.name() + " vs " + b.spec_.name());
    if (a.vars_ == b.vars_) return {a, b};
    std::vector<std::string> vars = a.vars_;
    for (const auto& v : b.vars_) {
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    }
    std::sort(vars.begin(), vars.end(), [](const std::string& x, const std::string& y) { return natural_less(x, y); });
    return {a.over(vars), b.over(vars)};
  }

  FieldSpec spec_;
  std::vector<std::string> vars_;
  std::map<Monomial, FieldElement> terms_;
};

}  // namespace symdet
