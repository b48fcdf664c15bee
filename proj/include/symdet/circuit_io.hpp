#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "symdet/circuit.hpp"

namespace symdet {

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline Error line_error(std::size_t line, const std::string& what) {
  return Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": " + what);
}

}  // namespace detail

/// Reads the line-oriented circuit format:
///
///     field Q                  (optional; Q, Fp:<p>, GF2^16, ...)
///     vars x y z
///     g1 = input x
///     g2 = const 3
///     g3 = add g1*2 g2
///     g4 = mul g3 g1*-1
///     output g4 [g3*5 ...]
///
/// Gate ids are arbitrary and may be referenced before their definition; the
/// result is validated and renumbered topologically. `#` starts a comment.
inline Circuit parse_circuit(std::string_view text) {
  FieldSpec field;
  std::optional<std::vector<std::string>> declared;
  struct RawGate {
    std::size_t line;
    std::string op;
    std::vector<std::string> operands;
  };
  std::map<std::string, RawGate> raw;
  std::vector<std::string> raw_order;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> output_lines;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "field") {
      if (tok.size() != 2) throw detail::line_error(lineno, "expected `field <name>`");
      field = FieldSpec::parse(tok[1]);
    } else if (tok[0] == "vars") {
      if (declared) throw detail::line_error(lineno, "second `vars` line");
      declared.emplace();
      for (std::size_t i = 1; i < tok.size(); ++i) {
        std::string v(tok[i]);
        if (std::find(declared->begin(), declared->end(), v) != declared->end()) {
          throw Error(ErrorCode::duplicate_variable, "line " + std::to_string(lineno) + ": variable " + v + " declared twice");
        }
        declared->push_back(v);
      }
    } else if (tok[0] == "output") {
      if (tok.size() < 2) throw detail::line_error(lineno, "`output` needs at least one gate");
      output_lines.emplace_back(lineno, std::vector<std::string>(tok.begin() + 1, tok.end()));
    } else {
      if (tok.size() < 3 || tok[1] != "=") throw detail::line_error(lineno, "expected `g<id> = ...`");
      std::string id(tok[0]);
      if (raw.count(id)) throw detail::line_error(lineno, "gate " + id + " defined twice");
      RawGate g{lineno, std::string(tok[2]), {}};
      for (std::size_t i = 3; i < tok.size(); ++i) g.operands.emplace_back(tok[i]);
      raw.emplace(id, std::move(g));
      raw_order.push_back(id);
    }
  }
  if (output_lines.empty()) throw Error(ErrorCode::parse_error, "missing `output` line");

  std::map<std::string, GateId> index;
  for (std::size_t i = 0; i < raw_order.size(); ++i) index[raw_order[i]] = i;
  auto arrow = [&](std::size_t line, const std::string& ref) {
    auto star = ref.find('*');
    std::string name = ref.substr(0, star);
    auto it = index.find(name);
    if (it == index.end()) throw detail::line_error(line, "unknown gate " + name);
    FieldElement w = FieldElement::one(field);
    if (star != std::string::npos) w = FieldElement::parse(ref.substr(star + 1), field);
    return Arrow{it->second, w};
  };

  Circuit c(field);
  if (declared) {
    for (const auto& v : *declared) c.declare_variable(v);
  }
  for (const auto& id : raw_order) {
    const RawGate& r = raw.at(id);
    Gate g;
    if (r.op == "input") {
      if (r.operands.size() != 1) throw detail::line_error(r.line, "`input` takes one name");
      const std::string& v = r.operands[0];
      if (declared && std::find(declared->begin(), declared->end(), v) == declared->end()) {
        throw Error(ErrorCode::unknown_variable, "line " + std::to_string(r.line) + ": variable " + v + " not declared");
      }
      g.kind = GateKind::variable;
      g.name = v;
      g.value = FieldElement::one(field);
    } else if (r.op == "const") {
      if (r.operands.size() != 1) throw detail::line_error(r.line, "`const` takes one literal");
      g.kind = GateKind::constant;
      g.value = FieldElement::parse(r.operands[0], field);
    } else if (r.op == "add" || r.op == "mul") {
      g.kind = r.op == "add" ? GateKind::add : GateKind::mul;
      g.value = FieldElement::one(field);
      for (const auto& ref : r.operands) g.args.push_back(arrow(r.line, ref));
    } else {
      throw detail::line_error(r.line, "unknown operation `" + r.op + "`");
    }
    c.add_gate(std::move(g));
  }
  for (const auto& [line, refs] : output_lines) {
    for (const auto& ref : refs) {
      Arrow a = arrow(line, ref);
      c.add_output(a.from, a.weight);
    }
  }
  return validate(c);
}

/// Canonical rendering; ids are the circuit's own gate indices.
inline std::string render_circuit(const Circuit& c) {
  std::ostringstream out;
  if (c.field() != FieldSpec::rational()) out << "field " << c.field().name() << '\n';
  out << "vars";
  for (const auto& v : c.variables()) out << ' ' << v;
  out << '\n';
  auto ref = [](GateId id, const FieldElement& w) {
    std::string s = "g" + std::to_string(id);
    if (!w.is_one()) s += "*" + w.to_string();
    return s;
  };
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Gate& g = c.gate(i);
    out << 'g' << i << " = ";
    switch (g.kind) {
      case GateKind::variable: out << "input " << g.name; break;
      case GateKind::constant: out << "const " << g.value.to_string(); break;
      case GateKind::add:
      case GateKind::mul:
        out << (g.kind == GateKind::add ? "add " : "mul ") << ref(g.args[0].from, g.args[0].weight) << ' '
            << ref(g.args[1].from, g.args[1].weight);
        break;
    }
    out << '\n';
  }
  out << "output";
  for (const auto& o : c.outputs()) out << ' ' << ref(o.gate, o.weight);
  out << '\n';
  return out.str();
}

namespace detail {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const FieldSpec& field) : text_(text), circuit_(field) {}

  Circuit run() {
    Value v = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    if (v.konst) {
      circuit_.add_output(circuit_.add_constant(*v.konst));
    } else {
      GateId g = v.gate;
      FieldElement w = v.scale;
      Gate& top = circuit_.mutable_gate(g);
      if (!w.is_one() && top.kind == GateKind::add) {
        for (auto& a : top.args) a.weight *= w;
        w = circuit_.one();
      } else if (!w.is_one() && top.kind == GateKind::mul) {
        top.args[0].weight *= w;
        w = circuit_.one();
      }
      circuit_.add_output(g, w);
    }
    return validate(circuit_);
  }

 private:
  // Either a folded constant or gate * scale.
  struct Value {
    std::optional<FieldElement> konst;
    GateId gate = 0;
    FieldElement scale;
  };

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::parse_error, "position " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char ch) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  Value node(GateId g) { return Value{std::nullopt, g, circuit_.one()}; }

  // Materializes a constant as an input gate.
  GateId as_gate(const Value& v, FieldElement& weight) {
    if (v.konst) {
      weight = circuit_.one();
      return circuit_.add_constant(*v.konst);
    }
    weight = v.scale;
    return v.gate;
  }

  Value combine(GateKind kind, const Value& a, const Value& b) {
    if (a.konst && b.konst) {
      return Value{kind == GateKind::add ? *a.konst + *b.konst : *a.konst * *b.konst, 0, circuit_.one()};
    }
    if (kind == GateKind::mul && (a.konst || b.konst)) {
      const Value& k = a.konst ? a : b;
      const Value& n = a.konst ? b : a;
      return Value{std::nullopt, n.gate, n.scale * *k.konst};
    }
    FieldElement wa, wb;
    GateId ga = as_gate(a, wa);
    GateId gb = as_gate(b, wb);
    return node(circuit_.add_computation(kind, ga, wa, gb, wb));
  }

  Value negate(Value v) {
    if (v.konst) {
      v.konst = -*v.konst;
    } else {
      v.scale = -v.scale;
    }
    return v;
  }

  Value expr() {
    Value acc = term();
    while (true) {
      if (eat('+')) {
        acc = combine(GateKind::add, acc, term());
      } else if (eat('-')) {
        acc = combine(GateKind::add, acc, negate(term()));
      } else {
        return acc;
      }
    }
  }

  Value term() {
    Value acc = factor();
    while (eat('*')) acc = combine(GateKind::mul, acc, factor());
    return acc;
  }

  Value factor() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char ch = text_[pos_];
    if (ch == '-') {
      ++pos_;
      return negate(factor());
    }
    if (ch == '(') {
      ++pos_;
      Value v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      if (text_.substr(pos_).starts_with("0x") || text_.substr(pos_).starts_with("0X")) {
        pos_ += 2;
        while (pos_ < text_.size() && std::isxdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '/') {
          ++pos_;
          std::size_t den = pos_;
          while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
          if (pos_ == den) fail("expected denominator");
        }
      }
      auto lit = text_.substr(start, pos_ - start);
      return Value{FieldElement::parse(lit, circuit_.field()), 0, circuit_.one()};
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      return node(circuit_.add_variable(std::string(text_.substr(start, pos_ - start))));
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Circuit circuit_;
};

}  // namespace detail

/// Parses `expr := term (('+'|'-') term)*`, `term := factor ('*' factor)*`,
/// `factor := const | var | '-' factor | '(' expr ')'` into a formula. Every
/// variable occurrence gets its own input; constant factors become arrow
/// weights and constant summands become constant inputs.
inline Circuit parse_expression(std::string_view text, const FieldSpec& field = {}) {
  return detail::ExpressionParser(text, field).run();
}

/// Infix rendering of the first output (shared gates are expanded).
inline std::string render_expression(const Circuit& c) {
  std::vector<std::string> text(c.size());
  auto scaled = [](const FieldElement& w, const std::string& s) {
    return w.is_one() ? s : "(" + w.to_string() + ")*" + s;
  };
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Gate& g = c.gate(i);
    switch (g.kind) {
      case GateKind::variable: text[i] = g.name; break;
      case GateKind::constant: text[i] = "(" + g.value.to_string() + ")"; break;
      case GateKind::add:
      case GateKind::mul: {
        const char* op = g.kind == GateKind::add ? " + " : " * ";
        text[i] = "(" + scaled(g.args[0].weight, text[g.args[0].from]) + op +
                  scaled(g.args[1].weight, text[g.args[1].from]) + ")";
        break;
      }
    }
  }
  const auto& o = c.outputs().at(0);
  return scaled(o.weight, text[o.gate]);
}

}  // namespace symdet
