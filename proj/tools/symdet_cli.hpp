#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "symdet/symdet.hpp"

namespace symdet::cli {

/// Exit statuses: success, failed construction or verification, usage error.
enum Status { ok = 0, failure = 1, usage = 2 };

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::invalid_option, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::invalid_option, "cannot write " + path);
  out << text;
}

inline Circuit load_circuit(const std::string& source, bool is_expression) {
  return is_expression ? parse_expression(source) : parse_circuit(read_file(source));
}

inline nlohmann::json sizes_json(const SizeReport& s) {
  return {{"skinny", s.skinny}, {"fat", s.fat}, {"green", s.green}, {"variable_inputs", s.var_inputs}};
}

inline nlohmann::json parse_report(const Circuit& c) {
  Circuit v = validate(c);
  WsClassification cls = classify(v);
  nlohmann::json reusable = nlohmann::json::array();
  for (auto g : cls.reusable) reusable.push_back(g);
  nlohmann::json closed = nlohmann::json::array();
  for (const auto& [mul, sub] : cls.closed) {
    closed.push_back({{"gate", mul}, {"argument", sub.arg_index == 0 ? "left" : "right"}, {"root", sub.root},
                      {"size", sub.gates.size()}});
  }
  return {{"valid", true},
          {"field", v.field().name()},
          {"variables", v.variables()},
          {"outputs", v.outputs().size()},
          {"formula", cls.is_formula},
          {"weakly_skew", cls.is_weakly_skew},
          {"reusable", reusable},
          {"closed", closed},
          {"sizes", sizes_json(measure(v))}};
}

inline std::string verdict_line(const Verdict& v) {
  std::string line = to_string(v.status) + " dim " + std::to_string(v.dimension) + " trials " +
                      std::to_string(v.trials) + " field " + v.field.name();
  if (v.witness) {
    line += " seed " + std::to_string(v.witness->seed) + " trial " + std::to_string(v.witness->trial) + " point";
    for (const auto& [x, val] : v.witness->point) line += " " + x + "=" + val.to_string();
    line += " det " + v.witness->lhs.to_string() + " circuit " + v.witness->rhs.to_string();
  }
  return line;
}

/// "a" or "a:b" as an inclusive range.
inline std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
  try {
    auto colon = s.find(':');
    std::size_t lo = std::stoul(s.substr(0, colon));
    std::size_t hi = colon == std::string::npos ? lo : std::stoul(s.substr(colon + 1));
    if (lo > hi) throw Error(ErrorCode::invalid_option, "empty range " + s);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::invalid_option, "bad range " + s);
  }
}

inline std::string bounds_csv(std::pair<std::size_t, std::size_t> n, std::pair<std::size_t, std::size_t> d) {
  std::string out = "n,d,F,S,quarez,S_2d,monomial_formula,linear_entries\n";
  for (std::size_t i = n.first; i <= n.second; ++i) {
    for (std::size_t j = d.first; j <= d.second; ++j) {
      BoundsReport r = bounds_report(i, j);
      out += std::to_string(i) + "," + std::to_string(j) + "," + r.formula.str() + "," + r.symmetric.str() + "," +
             r.quarez.str() + "," + r.symmetric_double.str() + "," + r.monomial_formula.str() + "," +
             r.linear_entries.str() + "\n";
    }
  }
  return out;
}

}  // namespace detail

/// Golden outputs of the worked examples, by file name.
inline std::map<std::string, std::string> demo_outputs() {
  std::map<std::string, std::string> files;
  const Assignment point{{"x", FieldElement::from_int({}, 1)},
                         {"y", FieldElement::from_int({}, 2)},
                         {"z", FieldElement::from_int({}, 3)}};

  std::ostringstream circuits;
  const std::vector<std::pair<std::string, Circuit>> named{{"general", worked::general_circuit()},
                                                           {"weakly-skew", worked::weakly_skew_circuit()},
                                                           {"formula", worked::formula()},
                                                           {"expression", parse_expression(worked::polynomial_expression)}};
  for (const auto& [name, c] : named) {
    WsClassification cls = classify(c);
    SizeReport s = measure(c);
    circuits << "# " << name << "\n";
    circuits << "formula " << cls.is_formula << " weakly_skew " << cls.is_weakly_skew << "\n";
    circuits << "fat " << s.fat << " skinny " << s.skinny << " green " << s.green << " inputs " << s.var_inputs
             << "\n";
    circuits << "reusable variables:";
    for (auto g : cls.reusable) {
      if (c.gate(g).kind == GateKind::variable) circuits << " " << c.gate(g).name << "@g" << g;
    }
    circuits << "\n";
    circuits << "value at (1,2,3) = " << evaluate(c, point, {}).at(0).to_string() << "\n";
    circuits << "polynomial = " << expand(c).at(0).to_string() << "\n\n";
  }
  files["circuits.txt"] = circuits.str();

  std::ostringstream matrices;
  const std::vector<std::pair<std::string, SymbolicMatrix>> mats{{"sum 5x5", worked::sum_matrix()},
                                                                  {"sum 4x4", worked::small_sum_matrix()},
                                                                  {"triple", worked::triple_matrix()}};
  for (const auto& [name, m] : mats) {
    matrices << "# " << name << "\n" << render_matrix(m) << "det = " << symbolic_det(m).to_string() << "\n\n";
  }
  Circuit two_xy = parse_expression("2*x*y");
  BuildResult r = build(two_xy, Method::valiant, SizeMode::green);
  matrices << "# 2*x*y, product of two variables with constant 2\n"
           << render_matrix(r.matrix) << "det = " << symbolic_det(r.matrix).to_string() << "\n";
  files["matrices.txt"] = matrices.str();

  std::ostringstream builds;
  const Circuit formula = worked::formula();
  const Circuit ws = worked::weakly_skew_circuit();
  const std::vector<std::pair<Method, SizeMode>> plans{
      {Method::valiant, SizeMode::green},  {Method::sym, SizeMode::skinny},    {Method::sym, SizeMode::green},
      {Method::ws_sym, SizeMode::fat},     {Method::ws_sym, SizeMode::green},  {Method::ws_nonsym, SizeMode::fat},
      {Method::ws_nonsym, SizeMode::green}};
  for (const auto& [method, mode] : plans) {
    const bool on_formula = method == Method::valiant || method == Method::sym;
    const Circuit& c = on_formula ? formula : ws;
    BuildResult b = build(c, method, mode);
    builds << "# " << to_string(method) << " " << to_string(mode) << " on " << (on_formula ? "formula" : "weakly-skew")
           << "\n";
    builds << "dim " << b.matrix.dim() << " <= " << b.bound_formula << " = " << b.bound << " (" << b.measure_name
           << " = " << b.measure_value << ")\n";
    builds << render_matrix(b.matrix);
    builds << "det = " << symbolic_det(b.matrix).to_string() << "\n";
    builds << detail::verdict_line(identity_test(c, b.matrix)) << "\n\n";
  }
  files["builds.txt"] = builds.str();
  return files;
}

namespace detail {

inline void require_seed(bool ci, const std::optional<std::uint64_t>& seed, const std::string& what) {
  if (ci && !seed) throw Error(ErrorCode::invalid_option, what + " is randomized; --ci needs --seed");
}

}  // namespace detail

/// Runs the command line `args` (program name excluded).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetric determinantal representations of arithmetic circuits"};
  app.require_subcommand(1);
  bool ci = false;
  app.add_flag("--ci", ci, "Reproducible mode: randomized commands need --seed");

  std::string circuit_path, matrix_path, output_path, dot_path, method_name = "sym", size_name, field_name;
  bool is_expression = false, as_json = false, square = false, check_identity = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::size_t det_n = 0;
  std::string n_range, d_range, write_dir, check_dir;

  auto* parse_cmd = app.add_subcommand("parse", "Validate and classify a circuit, report sizes as JSON");
  parse_cmd->add_option("circuit", circuit_path, "Circuit file, or expression with --expr")->required();
  parse_cmd->add_flag("--expr", is_expression, "Read the argument as an expression");

  auto* minimize_cmd = app.add_subcommand("minimize", "Push constants into weights");
  minimize_cmd->add_option("circuit", circuit_path)->required();
  minimize_cmd->add_flag("--expr", is_expression);
  minimize_cmd->add_option("-o,--output", output_path);

  auto* build_cmd = app.add_subcommand("build", "Build a determinantal representation");
  build_cmd->add_option("circuit", circuit_path)->required();
  build_cmd->add_flag("--expr", is_expression);
  build_cmd->add_option("--method", method_name, "valiant | sym | ws-sym | ws-nonsym");
  build_cmd->add_option("--size", size_name, "skinny | green | fat");
  build_cmd->add_option("--dot", dot_path, "Write the intermediate graph as DOT");
  build_cmd->add_flag("--json", as_json);
  build_cmd->add_option("-o,--output", output_path);

  auto* detsym_cmd = app.add_subcommand("detsym", "Symmetric representation of the n x n determinant");
  detsym_cmd->add_option("--n", det_n)->required()->check(CLI::Range(1, 9));
  detsym_cmd->add_option("--dot", dot_path);
  detsym_cmd->add_option("-o,--output", output_path);

  auto* char2_cmd = app.add_subcommand("char2-square", "Symmetric matrix for the square in characteristic 2");
  char2_cmd->add_option("circuit", circuit_path)->required();
  char2_cmd->add_flag("--expr", is_expression);
  char2_cmd->add_option("--field", field_name, "Binary field, default GF2^16");
  char2_cmd->add_option("-o,--output", output_path);

  auto* pperm_cmd = app.add_subcommand("pperm", "Partial permanent of a matrix");
  pperm_cmd->add_option("matrix", matrix_path)->required();
  pperm_cmd->add_flag("--check-identity", check_identity, "Check det(A+I) = per*(B)^2");
  pperm_cmd->add_option("--field", field_name);
  pperm_cmd->add_option("--seed", seed);
  pperm_cmd->add_option("--trials", trials);

  auto* verify_cmd = app.add_subcommand("verify", "Identity test det(M) = f");
  verify_cmd->add_option("circuit", circuit_path)->required();
  verify_cmd->add_option("matrix", matrix_path)->required();
  verify_cmd->add_flag("--expr", is_expression);
  verify_cmd->add_option("--trials", trials);
  verify_cmd->add_option("--field", field_name, "p | gf2k | Fp:<prime> | GF2^k:<modulus>");
  verify_cmd->add_option("--seed", seed);
  verify_cmd->add_flag("--square", square, "Compare with the square of f");
  verify_cmd->add_flag("--json", as_json);

  auto* bounds_cmd = app.add_subcommand("bounds", "Size bounds for dense polynomials as CSV");
  bounds_cmd->add_option("--n", n_range, "n or lo:hi")->required();
  bounds_cmd->add_option("--d", d_range, "d or lo:hi")->required();

  auto* demo_cmd = app.add_subcommand("demo", "Worked examples");
  demo_cmd->add_option("--write", write_dir, "Write golden files to a directory");
  demo_cmd->add_option("--check", check_dir, "Compare with golden files in a directory");

  std::vector<const char*> argv{"symdet"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "symdet: " << e.what() << "\n";
    return e.get_exit_code() == 0 ? ok : usage;
  }

  auto emit = [&](const std::string& text) {
    if (output_path.empty()) {
      out << text;
    } else {
      detail::write_file(output_path, text);
    }
  };

  try {
    if (*parse_cmd) {
      out << detail::parse_report(detail::load_circuit(circuit_path, is_expression)).dump(2) << "\n";
      return ok;
    }
    if (*minimize_cmd) {
      emit(render_circuit(minimize(detail::load_circuit(circuit_path, is_expression))));
      return ok;
    }
    if (*build_cmd) {
      Circuit c = detail::load_circuit(circuit_path, is_expression);
      Method method = parse_method(method_name);
      SizeMode mode = size_name.empty() ? default_size_mode(method) : parse_size_mode(size_name);
      BuildResult r = build(c, method, mode);
      if (!dot_path.empty()) detail::write_file(dot_path, gadget_dot(c, method, mode));
      if (as_json) {
        nlohmann::json j{{"method", to_string(method)}, {"size", to_string(mode)}, {"sizes", detail::sizes_json(r.sizes)},
                         {"measure", r.measure_name},   {"measure_value", r.measure_value},
                         {"bound_formula", r.bound_formula}, {"bound", r.bound}, {"matrix", matrix_json(r.matrix)}};
        if (!r.note.empty()) j["note"] = r.note;
        emit(j.dump(2) + "\n");
      } else {
        emit(render_matrix(r.matrix));
        err << "dim " << r.matrix.dim() << " <= " << r.bound_formula << " = " << r.bound << " (" << r.measure_name
            << " = " << r.measure_value << ")\n";
        if (!r.note.empty()) err << "note: " << r.note << "\n";
      }
      return ok;
    }
    if (*detsym_cmd) {
      SymbolicMatrix m = det_sym_matrix(det_n);
      if (!dot_path.empty()) detail::write_file(dot_path, export_dot(symmetrize_abp(build_det_abp(det_n)).graph));
      emit(render_matrix(m));
      err << "dim " << m.dim() << " <= 4n^3+7 = " << 4 * det_n * det_n * det_n + 7 << "\n";
      return ok;
    }
    if (*char2_cmd) {
      FieldSpec spec = field_name.empty() ? FieldSpec::gf2_16() : FieldSpec::parse(field_name);
      Circuit c = detail::load_circuit(circuit_path, is_expression);
      SymbolicMatrix m = square_matrix_char2(c, spec);
      emit(render_matrix(m));
      err << "dim " << m.dim() << " <= 2m+2 = " << 2 * measure(unweight(validate(c))).fat + 2 << "\n";
      return ok;
    }
    if (*pperm_cmd) {
      SymbolicMatrix b = parse_matrix(detail::read_file(matrix_path));
      if (!field_name.empty()) b = b.in(FieldSpec::parse(field_name));
      if (!check_identity) {
        out << partial_permanent(b).to_string() << "\n";
        return ok;
      }
      if (b.spec().characteristic() != 2) b = b.in(FieldSpec::gf2_16());
      if (b.dim() > 4) detail::require_seed(ci, seed, "pperm --check-identity");
      Rng rng(seed.value_or(1));
      PartialPermVerdict v = partial_perm_identity(b, rng, trials.value_or(20));
      if (v.holds) {
        out << "holds " << (v.exact ? "exactly" : "at " + std::to_string(v.trials) + " random points") << "\n";
        return ok;
      }
      out << "FAILED det(A+I) = " << v.lhs << " per*(B)^2 = " << v.rhs << "\n";
      return failure;
    }
    if (*verify_cmd) {
      detail::require_seed(ci, seed, "verify");
      Circuit c = detail::load_circuit(circuit_path, is_expression);
      SymbolicMatrix m = parse_matrix(detail::read_file(matrix_path));
      const bool char_two = m.spec().characteristic() == 2 || c.field().characteristic() == 2;
      IdentityOptions opt = default_identity_options(char_two);
      if (!field_name.empty()) opt.field = FieldSpec::parse(field_name);
      if (trials) opt.trials = *trials;
      if (seed) opt.seed = *seed;
      opt.square_lhs = square;
      Verdict v = identity_test(c, m, opt);
      out << (as_json ? verdict_json(v).dump(2) : detail::verdict_line(v)) << "\n";
      return v.ok() ? ok : failure;
    }
    if (*bounds_cmd) {
      out << detail::bounds_csv(detail::parse_range(n_range), detail::parse_range(d_range));
      return ok;
    }
    if (*demo_cmd) {
      auto files = demo_outputs();
      if (!write_dir.empty()) {
        std::filesystem::create_directories(write_dir);
        for (const auto& [name, text] : files) detail::write_file(write_dir + "/" + name, text);
        return ok;
      }
      if (!check_dir.empty()) {
        int status = ok;
        for (const auto& [name, text] : files) {
          const std::string path = check_dir + "/" + name;
          if (!std::filesystem::exists(path) || detail::read_file(path) != text) {
            err << "differs: " << path << "\n";
            status = failure;
          }
        }
        return status;
      }
      for (const auto& [name, text] : files) out << "== " << name << "\n" << text;
      return ok;
    }
  } catch (const Error& e) {
    err << "symdet: " << e.what() << "\n";
    return e.code() == ErrorCode::invalid_option ? usage : failure;
  }
  return usage;
}

}  // namespace symdet::cli
