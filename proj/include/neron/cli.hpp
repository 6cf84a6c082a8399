#pragma once

// The `neron` command line: modular-curve pipelines, generic fibres from
// JSON, Brandt matrices and Hecke matrices on cusps.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "neron/io.hpp"
#include "neron/modular.hpp"
#include "neron/supersingular.hpp"

namespace neron::cli {

using io::Json;
using io::to_json;

enum ExitCode : int { Ok = 0, InternalError = 1, BadInput = 2 };

struct RunConfig {
  std::string command;
  std::uint64_t p = 0, M = 1, N = 0, ell = 0;
  std::string modulus = "infty0";
  std::string input, modulus_input, output;
  std::string format = "json";
  std::uint64_t p_max = 97;
  std::vector<std::uint64_t> Ms{1, 2, 3, 5, 6, 7, 10};
  bool has_hecke = false;
};

namespace detail {

inline Json counts_json(const SupersingularCounts& c) { return Json{{"n", c.n}, {"e2", c.e2}, {"e3", c.e3}}; }

inline Json labels_json(const std::vector<std::string>& v) { return Json(v); }

// Φ(J_𝔪), the torus images and the quotient
inline Json component_group_json(const ComponentGroupJm& g, const ModulusIncidence& m) {
  Json r;
  r["modulus"] = detail::labels_json(m.points);
  r["group"] = to_json(g.group.group);
  r["torus_images"] = to_json(g.torus_images);
  r["torus_image_index"] = g.phi_J.group.is_finite() ? to_json(g.phi_J.group.torsion_order()) : Json(nullptr);
  r["phi_J"] = to_json(g.phi_J.group);
  return r;
}

inline IntVector snf_diagonal(const IntMatrix& m) {
  const auto s = smith_normal_form(m);
  IntVector d;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) d.push_back(s.D(i, i));
  return d;
}

/// "1", "1,11" or "7:2,49": cusp divisors d, optionally with a class c.
inline std::vector<GeometricCusp> parse_cusp_list(std::uint64_t N, const std::string& text) {
  std::vector<GeometricCusp> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw InvalidInput("cusp list: empty entry in '" + text + "'");
    std::uint64_t d = 0, c = 1;
    const auto colon = item.find(':');
    try {
      std::size_t used = 0;
      const std::string ds = item.substr(0, colon);
      d = std::stoull(ds, &used);
      if (used != ds.size()) throw std::invalid_argument(ds);
      if (colon != std::string::npos) {
        const std::string cs = item.substr(colon + 1);
        c = std::stoull(cs, &used);
        if (used != cs.size()) throw std::invalid_argument(cs);
      }
    } catch (const std::logic_error&) {
      throw InvalidInput("cusp list: cannot parse '" + item + "' (expected d or d:c)");
    }
    auto x = make_cusp(N, d, c);
    if (std::find(out.begin(), out.end(), x) != out.end()) throw InvalidInput("cusp list: " + x.to_string() + " repeated");
    out.push_back(x);
  }
  if (out.empty()) throw InvalidInput("cusp list: no cusps given");
  return out;
}

inline void require_prime_param(std::uint64_t p, const char* flag) {
  if (p <= 3 || !is_prime(p)) throw InvalidInput(std::string(flag) + " must be a prime > 3");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// commands

inline Json cmd_x0pM(const RunConfig& c) {
  detail::require_prime_param(c.p, "--p");
  const auto x = x0pM_fibre(c.p, c.M);
  const std::uint64_t N = c.p * c.M;
  ModulusIncidence m;
  if (c.modulus == "infty0") m = cuspidal_modulus(x, {cusp_infinity(N), cusp_zero(N)});
  else if (c.modulus == "full") m = cuspidal_modulus(x, all_cusps(N));
  else m = cuspidal_modulus(x, detail::parse_cusp_list(N, c.modulus));
  const auto g = component_group_Jm(x.fibre, m);

  Json r{{"command", "x0pM"}, {"p", c.p}, {"M", c.M}, {"counts", detail::counts_json(x.counts)}};
  r.update(detail::component_group_json(g, m));
  if (c.modulus == "infty0") {
    const auto cf = closed_form_X0pM(x.counts);
    const auto phi = closed_form_phiJ(x.counts);
    const auto free = g.free_torus_images();
    const bool agrees = g.group.group == cf.group && g.phi_J.group == phi && free.rows() == 1 &&
                        abs(free(0, 0)) == cf.free_image;
    r["closed_form"] = Json{{"group", cf.group.to_string()},
                            {"free_image", to_json(cf.free_image)},
                            {"phi_J", phi.to_string()},
                            {"agrees", agrees}};
  }
  return r;
}

inline Json cmd_x0p2(const RunConfig& c) {
  detail::require_prime_param(c.p, "--p");
  const auto x = x0p2_fibre(c.p);
  const ModulusIncidence* m = nullptr;
  if (c.modulus == "full") m = &x.full;
  else if (c.modulus == "infty0") m = &x.reduced;
  else throw InvalidInput("x0p2: --modulus must be 'full' or 'infty0'");
  const auto g = component_group_Jm(x.fibre, *m);
  const auto cf = x0p2_closed_form(c.p);

  Json r{{"command", "x0p2"}, {"p", c.p}};
  r["fibre"] = to_json(x.fibre);
  r.update(detail::component_group_json(g, *m));
  const IntMatrix free = g.free_torus_images();
  r["image_snf"] = to_json(detail::snf_diagonal(free));
  Json closed{{"phi_J_order", to_json(cf.phiJ_order)}};
  if (c.modulus == "full") {
    closed["V0"] = to_json(cf.V0);
    closed["V1"] = to_json(cf.V1);
  } else {
    closed["image"] = to_json(cf.reduced_image);
  }
  r["closed_form"] = closed;
  return r;
}

inline Json cmd_fibre(const RunConfig& c) {
  if (c.input.empty()) throw InvalidInput("fibre: --input is required");
  const auto f = io::fibre_from_json(io::read_json_file(c.input));
  std::optional<ModulusIncidence> m;
  if (!c.modulus_input.empty()) m = io::modulus_from_json(io::read_json_file(c.modulus_input), f.size());
  require_valid(f, m ? &*m : nullptr);

  Json r{{"command", "fibre"}, {"components", f.size()}};
  if (!m) {
    r["phi_J"] = to_json(component_group_J(f).group);
    return r;
  }
  r["phi_T"] = to_json(tori_component_group(m->e));
  // phi_J here is the quotient by the torus images
  r.update(detail::component_group_json(component_group_Jm(f, *m), *m));
  return r;
}

inline Json cmd_char(const RunConfig& c) {
  detail::require_prime_param(c.p, "--p");
  Json r{{"command", "char"}, {"p", c.p}, {"M", c.M}};
  if (c.M == 1) {
    const auto g = x0p_graph(c.p);
    const auto h = h1(g.graph);
    r["rank"] = h.rank;
    r["supersingular_points"] = g.ss_labels.size();
    r["edges"] = detail::labels_json(g.graph.edge_labels());
    r["basis"] = to_json(g.gamma.transpose());
    if (c.has_hecke) {
      r["ell"] = c.ell;
      r["hecke_transpose"] = to_json(hecke_on_char_X0p(c.p, c.ell));
    }
  } else {
    if (c.has_hecke) throw InvalidInput("char: --hecke is only available for M = 1");
    const auto x = x0pM_fibre(c.p, c.M);
    const auto h = character_group_Jm(x.fibre, x.graph);
    r["rank"] = h.rank;
    r["supersingular_points"] = x.counts.n;
    r["edges"] = detail::labels_json(h.labels);
    r["basis"] = to_json(h.basis.transpose());
  }
  return r;
}

inline Json cmd_cusps(const RunConfig& c) {
  if (c.N == 0) throw InvalidInput("cusps: --N must be positive");
  Json list = Json::array();
  for (const auto& o : cusps(c.N))
    for (const auto& x : o.members) list.push_back(Json{{"d", x.d}, {"c", x.c}, {"m", o.m}});
  Json r{{"command", "cusps"}, {"N", c.N}, {"count", list.size()}, {"cusps", list}};
  if (c.has_hecke) {
    r["ell"] = c.ell;
    r["hecke_transpose"] = to_json(hecke_transpose_matrix(c.N, c.ell));
  }
  return r;
}

inline Json cmd_brandt(const RunConfig& c) {
  detail::require_prime_param(c.p, "--p");
  const auto B = brandt(c.p, c.ell);
  const Fp2 F(c.p);
  Json js = Json::array();
  for (std::size_t i = 0; i < B.js.size(); ++i) js.push_back(Json{{"index", i}, {"j", F.to_string(B.js[i])}, {"w", B.weights[i]}});
  return Json{{"command", "brandt"}, {"p", c.p}, {"ell", c.ell}, {"j_invariants", js}, {"matrix", to_json(B.matrix)}};
}

// complex-based Φ(J_𝔪) against the closed forms over a range of levels
inline Json cmd_sweep(const RunConfig& c, bool& all_agree) {
  Json rows = Json::array();
  all_agree = true;
  for (std::uint64_t p = 5; p <= c.p_max; ++p) {
    if (!is_prime(p)) continue;
    for (auto M : c.Ms) {
      if (std::gcd(p, M) != 1) continue;
      const auto x = x0pM_fibre(p, M);
      const auto g = component_group_Jm(x.fibre, x.modulus);
      const auto cf = closed_form_X0pM(x.counts);
      const auto phi = closed_form_phiJ(x.counts);
      const bool ok = g.group.group == cf.group && g.phi_J.group == phi;
      all_agree = all_agree && ok;
      rows.push_back(Json{{"p", p},
                          {"M", M},
                          {"counts", detail::counts_json(x.counts)},
                          {"group", g.group.group.to_string()},
                          {"phi_J", g.phi_J.group.to_string()},
                          {"agrees", ok}});
    }
  }
  return Json{{"command", "sweep"}, {"p_max", c.p_max}, {"M", c.Ms}, {"rows", rows}, {"all_agree", all_agree}};
}

// quick end-to-end checks of the known small cases
inline Json cmd_selftest(bool& passed) {
  Json checks = Json::array();
  passed = true;
  auto check = [&](const std::string& name, auto&& fn) {
    bool ok = false;
    std::string note;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      note = e.what();
    }
    passed = passed && ok;
    Json row{{"check", name}, {"ok", ok}};
    if (!note.empty()) row["error"] = note;
    checks.push_back(row);
  };
  check("X0(11) with (inf)+(0): Z, quotient Z/5", [] {
    const auto x = x0pM_fibre(11, 1);
    const auto g = component_group_Jm(x.fibre, x.modulus);
    return g.group.group == FGAbGroup::free(1) && g.phi_J.group == FGAbGroup({5}, 0);
  });
  check("X0(169) full cuspidal modulus: image SNF (1, 7)", [] {
    const auto x = x0p2_fibre(13);
    const auto g = component_group_Jm(x.fibre, x.full);
    return g.group.group == FGAbGroup::free(2) && detail::snf_diagonal(g.free_torus_images()) == IntVector{1, 7};
  });
  check("Brandt B(2) at p = 11 has row sums 3", [] {
    const auto B = brandt(11, 2).matrix;
    for (std::size_t i = 0; i < B.rows(); ++i) {
      Integer s = 0;
      for (auto& x : B.row(i)) s += x;
      if (s != 3) return false;
    }
    return true;
  });
  check("tT_2 on cusps of X0(11) sends (0)-(inf) to 3((0)-(inf))", [] {
    const auto D = divisor_of(cusp_zero(11)) - divisor_of(cusp_infinity(11));
    return hecke_transpose_cusps(11, 2, D) == Integer(3) * D;
  });
  check("T_2 acts on Phi(J_m) of X0(11) by 3", [] { return hecke_on_phi(11, 1, 2) == 3; });
  return Json{{"command", "selftest"}, {"checks", checks}, {"passed", passed}};
}

// ---------------------------------------------------------------------------

inline void emit(const Json& report, const RunConfig& c, std::ostream& out) {
  const std::string text = c.format == "table" ? io::to_table(report) : report.dump(2) + "\n";
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.output);
  if (!f) throw InvalidInput("cannot write '" + c.output + "'");
  f << text;
}

/// Runs one invocation; returns the process exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Component groups of Neron models of generalized Jacobians of modular curves", "neron"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&](CLI::App* s) {
    s->add_option("--format", c.format, "json or table")->check(CLI::IsMember({"json", "table"}));
    s->add_option("--output", c.output, "write the report here instead of stdout");
  };
  std::uint64_t hecke = 0;

  auto* x0pM = app.add_subcommand("x0pM", "Phi(J_m) for X0(pM), m supported on cusps");
  x0pM->add_option("--p", c.p)->required();
  x0pM->add_option("--M", c.M);
  x0pM->add_option("--modulus", c.modulus, "infty0, full, or a cusp list like 1,11 or 7:2");
  common(x0pM);

  auto* x0p2 = app.add_subcommand("x0p2", "Phi(J_m) for X0(p^2)");
  x0p2->add_option("--p", c.p)->required();
  x0p2->add_option("--modulus", c.modulus, "full or infty0");
  common(x0p2);

  auto* fibre = app.add_subcommand("fibre", "Phi(J), Phi(T) and Phi(J_m) of a fibre given in JSON");
  fibre->add_option("--input", c.input)->required();
  fibre->add_option("--modulus-input", c.modulus_input);
  common(fibre);

  auto* chr = app.add_subcommand("char", "character group of J_m for X0(pM) with m = (inf)+(0)");
  chr->add_option("--p", c.p)->required();
  chr->add_option("--M", c.M);
  auto* chr_hecke = chr->add_option("--hecke", hecke, "prime ell: print tT_ell on the character group (M = 1)");
  common(chr);

  auto* cu = app.add_subcommand("cusps", "cusps of X0(N) and tT_ell on Z[cusps]");
  cu->add_option("--N", c.N)->required();
  auto* cu_hecke = cu->add_option("--hecke", hecke, "prime ell");
  common(cu);

  auto* br = app.add_subcommand("brandt", "Brandt matrix B(ell) for the prime p");
  br->add_option("--p", c.p)->required();
  br->add_option("--ell", c.ell)->required();
  common(br);

  auto* sw = app.add_subcommand("sweep", "compare Phi(J_m) on X0(pM) with the closed forms");
  sw->add_option("--p-max", c.p_max);
  sw->add_option("--M", c.Ms, "levels M (comma separated)")->delimiter(',');
  common(sw);

  auto* st = app.add_subcommand("selftest", "run built-in consistency checks");
  common(st);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Ok : BadInput;
  }

  try {
    Json report;
    int code = Ok;
    bool flag = true;
    if (x0pM->parsed()) {
      report = cmd_x0pM(c);
    } else if (x0p2->parsed()) {
      if (c.modulus == "infty0" && x0p2->count("--modulus") == 0) c.modulus = "full";
      report = cmd_x0p2(c);
    } else if (fibre->parsed()) {
      report = cmd_fibre(c);
    } else if (chr->parsed()) {
      c.has_hecke = chr_hecke->count() > 0;
      c.ell = hecke;
      report = cmd_char(c);
    } else if (cu->parsed()) {
      c.has_hecke = cu_hecke->count() > 0;
      c.ell = hecke;
      report = cmd_cusps(c);
    } else if (br->parsed()) {
      report = cmd_brandt(c);
    } else if (sw->parsed()) {
      report = cmd_sweep(c, flag);
      if (!flag) code = InternalError;
    } else if (st->parsed()) {
      report = cmd_selftest(flag);
      if (!flag) code = InternalError;
    }
    emit(report, c, out);
    return code;
  } catch (const ValidationError& e) {
    err << "error: validation failed\n";
    for (const auto& v : e.violations()) err << "  - " << v << '\n';
    return BadInput;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return BadInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return BadInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return InternalError;
  }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args), out, err);
}

}  // namespace neron::cli
