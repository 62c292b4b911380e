// Command-line front end: closed-form evaluation, verification suites with
// machine-readable reports, structure reports, solution transformation, and
// the K-type catalog.
#include <cmath>
#include <complex>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sl2rep/hyperfun.hpp"
#include "sl2rep/ktypes.hpp"
#include "sl2rep/report.hpp"
#include "sl2rep/structure.hpp"
#include "sl2rep/tdreduce.hpp"

using json = nlohmann::ordered_json;
using cplx = std::complex<double>;
using namespace sl2rep;

namespace {

const mpq_class kMinusHalf{-1, 2};
const GaussianRational kSHalfI{mpq_class(0), mpq_class(1, 2)};

// 17 significant digits: doubles round-trip exactly through this form.
std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string complex17(cplx z) {
  std::string out = num17(z.real());
  out += z.imag() < 0 ? "-" : "+";
  out += num17(std::fabs(z.imag()));
  out += "i";
  return out;
}

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

json document_head(const std::string& command, bool no_timestamp) {
  json doc;
  doc["version"] = kVersionString;
  doc["command"] = command;
  if (!no_timestamp) doc["timestamp"] = iso_timestamp();
  return doc;
}

json results_json(const std::vector<CheckRecord>& records) {
  json arr = json::array();
  for (const CheckRecord& rec : records) {
    json item;
    item["name"] = rec.name;
    item["status"] = rec.status;
    item["metric"] = rec.metric;
    item["tolerance"] = rec.tolerance;
    if (!rec.detail.empty()) item["detail"] = rec.detail;
    arr.push_back(std::move(item));
  }
  return arr;
}

void require_admissible(const KTypeIndex& idx) {
  if (!admissible(idx)) {
    int cls = (((2 * idx.l + idx.q) % 4) + 4) % 4;
    throw std::invalid_argument(
        "inadmissible index: m must lie in congruence class (2l + q) mod 4 = " +
        std::to_string(cls) + ", got m = " + std::to_string(idx.m));
  }
}

TolOverrides parse_tol_overrides(const std::vector<std::string>& entries) {
  TolOverrides overrides;
  for (const std::string& entry : entries) {
    std::size_t eq = entry.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("--tol expects name=value, got '" + entry + "'");
    std::size_t used = 0;
    double value = std::stod(entry.substr(eq + 1), &used);
    if (used != entry.size() - eq - 1)
      throw std::invalid_argument("--tol expects a numeric value in '" + entry + "'");
    overrides[entry.substr(0, eq)] = value;
  }
  return overrides;
}

struct GridSpec {
  double t_lo = 0, t_hi = 0, x_lo = 0, x_hi = 0;
  std::size_t nt = 0, nx = 0;
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  // Format: t0:t1:nt,x0:x1:nx
  auto parse_axis = [](const std::string& axis, double& lo, double& hi, std::size_t& n) {
    std::size_t c1 = axis.find(':'), c2 = axis.rfind(':');
    if (c1 == std::string::npos || c2 == c1)
      throw std::invalid_argument("grid axis must be lo:hi:count, got '" + axis + "'");
    std::size_t used = 0;
    lo = std::stod(axis.substr(0, c1), &used);
    if (used != c1) throw std::invalid_argument("bad grid bound in '" + axis + "'");
    std::string mid = axis.substr(c1 + 1, c2 - c1 - 1);
    hi = std::stod(mid, &used);
    if (used != mid.size()) throw std::invalid_argument("bad grid bound in '" + axis + "'");
    std::string tail = axis.substr(c2 + 1);
    long count = std::stol(tail, &used);
    if (used != tail.size() || count < 2)
      throw std::invalid_argument("grid count must be an integer >= 2 in '" + axis + "'");
    n = static_cast<std::size_t>(count);
  };
  std::size_t comma = text.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("--grid expects t0:t1:nt,x0:x1:nx, got '" + text + "'");
  parse_axis(text.substr(0, comma), g.t_lo, g.t_hi, g.nt);
  parse_axis(text.substr(comma + 1), g.x_lo, g.x_hi, g.nx);
  return g;
}

// ------------------------------------------------------------------- eval

struct EvalArgs {
  int q = 0, l = 0, m = 0;
  double theta = 0, y = 1, t = 0, x = 1;
  std::string picture = "compact";
  bool jet = false, as_json = false, no_timestamp = false;
};

int cmd_eval(const EvalArgs& args) {
  KTypeIndex idx{args.q, args.l, args.m};
  require_admissible(idx);
  if (args.jet && args.picture != "compact")
    throw std::invalid_argument("--jet is only available in the compact picture");

  cplx value;
  double a = 0, b = 0;
  if (args.picture == "compact") {
    a = args.theta;
    b = args.y;
    value = PictureFunction::ktype(idx, kMinusHalf, kSHalfI).eval(a, b);
  } else if (args.picture == "noncompact") {
    a = args.t;
    b = args.x;
    value = to_noncompact(PictureFunction::ktype(idx, kMinusHalf, kSHalfI)).eval(a, b);
  } else {
    throw std::invalid_argument("--picture must be compact or noncompact");
  }

  if (args.as_json) {
    json doc = document_head("eval", args.no_timestamp);
    doc["inputs"] = {{"q", args.q}, {"l", args.l}, {"m", args.m}, {"picture", args.picture}};
    if (args.picture == "compact")
      doc["inputs"]["point"] = {{"theta", a}, {"y", b}};
    else
      doc["inputs"]["point"] = {{"t", a}, {"x", b}};
    doc["value"] = {{"re", value.real()}, {"im", value.imag()}};
    if (args.jet) {
      PsiJet jet = psi_jet(idx, a, b);
      doc["jet"] = {{"d_theta", {{"re", jet.d_theta.real()}, {"im", jet.d_theta.imag()}}},
                    {"d_y", {{"re", jet.d_y.real()}, {"im", jet.d_y.imag()}}},
                    {"d_yy", {{"re", jet.d_yy.real()}, {"im", jet.d_yy.imag()}}}};
    }
    std::cout << doc.dump(2) << "\n";
    return 0;
  }

  std::cout << complex17(value) << "\n";
  if (args.jet) {
    PsiJet jet = psi_jet(idx, a, b);
    std::cout << "d_theta: " << complex17(jet.d_theta) << "\n"
              << "d_y:     " << complex17(jet.d_y) << "\n"
              << "d_yy:    " << complex17(jet.d_yy) << "\n";
  }
  return 0;
}

// ----------------------------------------------------------------- verify

int cmd_verify(const std::string& suite, const std::vector<std::string>& tol_entries,
               const std::string& preset, bool no_timestamp) {
  TolOverrides overrides = parse_tol_overrides(tol_entries);
  if (!preset.empty() && suite != "tdreduce")
    throw std::invalid_argument("--preset only applies to the tdreduce suite");

  std::vector<CheckRecord> records = suite == "tdreduce" && !preset.empty()
                                         ? run_tdreduce_suite(preset, overrides)
                                         : run_suite(suite, overrides);

  json doc = document_head("verify " + suite, no_timestamp);
  json inputs;
  inputs["suite"] = suite;
  if (!preset.empty()) inputs["preset"] = preset;
  json tol = json::object();
  for (const auto& [name, value] : overrides) tol[name] = value;
  inputs["tol"] = std::move(tol);
  doc["inputs"] = std::move(inputs);
  doc["results"] = results_json(records);
  doc["ledger"] = ledger_notes(suite);
  std::cout << doc.dump(2) << "\n";
  return any_fail(records) ? 1 : 0;
}

// --------------------------------------------------------------- structure

json index_json(const KTypeIndex& idx) { return json::array({idx.q, idx.l, idx.m}); }

int cmd_structure(int q, int lmax, int mbound, bool no_timestamp) {
  SeriesReport rep = composition_series(q, lmax, mbound);

  json doc = document_head("structure", no_timestamp);
  doc["inputs"] = {{"q", q}, {"lmax", lmax}, {"mbound", mbound}};
  doc["window"] = {{"q", rep.window.q},
                   {"l_max", rep.window.l_max},
                   {"m_bound", rep.window.m_bound}};
  json chain = json::array();
  bool failed = false;
  for (const ChainMemberReport& member : rep.chain) {
    json violations = json::array();
    for (const InvarianceViolation& v : member.violations)
      violations.push_back({{"from", index_json(v.from)},
                            {"gen", generator_name(v.gen)},
                            {"to", index_json(v.to)}});
    chain.push_back({{"name", member.name},
                     {"dim_in_window", member.dim_in_window},
                     {"invariant", member.invariant},
                     {"violations", std::move(violations)}});
    failed = failed || !member.invariant;
  }
  doc["chain"] = std::move(chain);
  json inclusions = json::array();
  for (bool ok : rep.verified_inclusions) {
    inclusions.push_back(ok);
    failed = failed || !ok;
  }
  doc["verified_inclusions"] = std::move(inclusions);
  json subquotients = json::array();
  for (const SubquotientReport& sq : rep.subquotients) {
    subquotients.push_back({{"name", sq.name},
                            {"irreducible_interior", sq.irreducible_interior},
                            {"interior_vertices", sq.interior_vertices}});
    failed = failed || (sq.interior_vertices > 0 && !sq.irreducible_interior);
  }
  doc["subquotients"] = std::move(subquotients);
  doc["boundary_caveats"] = rep.boundary_caveats;
  std::cout << doc.dump(2) << "\n";
  return failed ? 1 : 0;
}

// --------------------------------------------------------------- transform

struct TransformArgs {
  std::string potential;
  int q = 0, l = 0, m = 0;
  std::string grid = "-0.5:0.5:161,0.3:2.3:321";
  std::string mode = "verbatim";
  std::string csv_path;
  double tol = 1e-5;
  bool no_timestamp = false;
};

int cmd_transform(const TransformArgs& args) {
  PotentialSpec spec = PotentialSpec::parse(args.potential);
  KTypeIndex idx{args.q, args.l, args.m};
  require_admissible(idx);
  mpq_class lambda = ktype_lambda(idx);
  if (spec.lambda != lambda)
    throw std::invalid_argument(
        "potential lambda = " + spec.lambda.get_str() +
        " does not match the K-type eigenvalue l(l-1)/2 = " + lambda.get_str());
  if (args.mode != "verbatim" && args.mode != "corrected")
    throw std::invalid_argument("--mode must be verbatim or corrected");

  GridSpec grid = parse_grid(args.grid);
  PictureFunction f = to_noncompact(PictureFunction::ktype(idx, kMinusHalf, kSHalfI));
  auto f_eval = [&f](double t, double x) { return f.eval(t, x); };

  ChiSystem cs = solve_chi(spec);
  MultiplierMode mode =
      args.mode == "verbatim" ? MultiplierMode::kVerbatim : MultiplierMode::kCorrected;
  GridFunction ft = transform_solution(cs, f_eval, grid.t_lo, grid.t_hi, grid.nt, grid.x_lo,
                                       grid.x_hi, grid.nx, mode);

  std::string csv = "t,x,re,im\n";
  for (std::size_t it = 0; it < ft.ts.size(); ++it)
    for (std::size_t ix = 0; ix < ft.xs.size(); ++ix) {
      cplx v = ft.at(it, ix);
      csv += num17(ft.ts[it]) + "," + num17(ft.xs[ix]) + "," + num17(v.real()) + "," +
             num17(v.imag()) + "\n";
    }
  if (args.csv_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(args.csv_path);
    if (!out) throw std::runtime_error("cannot open CSV output file " + args.csv_path);
    out << csv;
  }

  // Residual probes at the quarter positions of the grid, kept away from the
  // stencil margin and, when an inverse-square term is present, from x = 0.
  bool has_lambda = spec.lambda != 0;
  std::set<std::pair<std::size_t, std::size_t>> positions;
  auto clamp = [](std::size_t v, std::size_t n) {
    std::size_t lo = 2, hi = n - 3;
    return v < lo ? lo : (v > hi ? hi : v);
  };
  for (std::size_t it : {grid.nt / 4, grid.nt / 2, 3 * grid.nt / 4})
    for (std::size_t ix : {grid.nx / 4, grid.nx / 2, 3 * grid.nx / 4})
      positions.insert({clamp(it, grid.nt), clamp(ix, grid.nx)});
  std::vector<std::pair<double, double>> probes;
  for (auto [it, ix] : positions) {
    if (has_lambda && std::fabs(ft.xs[ix]) < 0.1) continue;
    probes.push_back({ft.ts[it], ft.xs[ix]});
  }
  if (probes.empty())
    throw std::invalid_argument(
        "no residual probes survive the x = 0 exclusion; widen the x range");
  TdResidualReport rep = td_residual(ft, spec, probes, args.tol);

  json doc = document_head("transform", args.no_timestamp);
  doc["inputs"] = {{"potential", spec.str()}, {"q", args.q},   {"l", args.l},
                   {"m", args.m},             {"grid", args.grid}, {"mode", args.mode},
                   {"tol", args.tol}};
  if (!args.csv_path.empty()) doc["inputs"]["csv"] = args.csv_path;
  json result;
  result["name"] = "transform_residual";
  result["status"] = rep.verdict == "PASS" ? "PASS" : "DISCREPANCY";
  result["metric"] = rep.max_residual;
  result["tolerance"] = args.tol;
  if (rep.verdict != "PASS")
    result["detail"] =
        "residual verdict " + rep.verdict + "; see the profile for per-probe values";
  doc["results"] = json::array({std::move(result)});
  json profile = json::array();
  for (const ResidualProbe& probe : rep.profile)
    profile.push_back({{"t", probe.t}, {"x", probe.x}, {"residual", probe.residual}});
  doc["profile"] = std::move(profile);
  doc["ledger"] = ledger_notes("tdreduce");
  std::cout << doc.dump(2) << "\n";
  return 0;
}

// ------------------------------------------------------------------- table

int cmd_table(int q, int lmax, int mbound) {
  if (q < 0 || q > 3) throw std::invalid_argument("--q must lie in 0..3");
  if (lmax < 0 || mbound < 0)
    throw std::invalid_argument("--lmax and --mbound must be nonnegative");
  std::string out = "q,l,m,lambda,lowest,highest\n";
  for (int l = 0; l <= lmax; ++l) {
    ExtremalInfo info = detect_extremal(q, l);
    std::string lambda = ktype_lambda({q, l, 2 * l + q}).get_str();
    for (int m : weights(q, l, -mbound, mbound)) {
      bool lowest = info.kind == Extremal::kLowest && m == info.m;
      bool highest = info.kind == Extremal::kHighest && m == info.m;
      out += std::to_string(q) + "," + std::to_string(l) + "," + std::to_string(m) + "," +
             lambda + "," + (lowest ? "true" : "false") + "," + (highest ? "true" : "false") +
             "\n";
    }
  }
  std::cout << out;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Verification toolkit for an sl2-symmetric family of Schrodinger operators.\n"
      "The env var SL2REP_PRECISION in {double, dd} pins the series fallback tier."};
  app.require_subcommand(1);
  bool no_timestamp = false;
  app.add_flag("--no-timestamp", no_timestamp,
               "omit the timestamp field so reruns are byte-identical");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a closed-form K-type at a point");
  eval->add_option("--q", eval_args.q, "parity class in 0..3")->required();
  eval->add_option("--l", eval_args.l, "radial degree")->required();
  eval->add_option("--m", eval_args.m, "angular weight")->required();
  eval->add_option("--theta", eval_args.theta, "compact-picture angle (default 0)");
  eval->add_option("--y", eval_args.y, "compact-picture radius (default 1)");
  eval->add_option("--t", eval_args.t, "noncompact-picture time (default 0)");
  eval->add_option("--x", eval_args.x, "noncompact-picture position (default 1)");
  eval->add_option("--picture", eval_args.picture, "compact (default) or noncompact");
  eval->add_flag("--jet", eval_args.jet, "print the derivative jet (compact picture only)");
  eval->add_flag("--json", eval_args.as_json, "emit JSON instead of plain text");

  std::string suite;
  std::vector<std::string> tol_entries;
  std::string preset;
  CLI::App* verify = app.add_subcommand("verify", "run a named verification suite");
  verify
      ->add_option("suite", suite,
                   "one of symbolic, special, ktypes, ladder, group, pictures, structure, "
                   "tdreduce, all")
      ->required();
  verify->add_option("--tol", tol_entries, "override one tolerance as name=value")
      ->take_all();
  verify->add_option("--preset", preset, "tdreduce only: zero, harmonic, or linear");

  int sq = 0, slmax = 6, smbound = 29;
  CLI::App* structure = app.add_subcommand("structure", "composition-series report");
  structure->add_option("--q", sq, "parity class in 0..3")->required();
  structure->add_option("--lmax", slmax, "window degree bound (default 6)");
  structure->add_option("--mbound", smbound, "window weight bound (default 29)");

  TransformArgs targs;
  CLI::App* transform =
      app.add_subcommand("transform", "transform a K-type solution to a forced potential");
  transform->add_option("--potential", targs.potential, "potential spec, e.g. 'g2=harmonic; T=1.4'")
      ->required();
  transform->add_option("--q", targs.q, "parity class in 0..3")->required();
  transform->add_option("--l", targs.l, "radial degree")->required();
  transform->add_option("--m", targs.m, "angular weight")->required();
  transform->add_option("--grid", targs.grid, "t0:t1:nt,x0:x1:nx (default " + targs.grid + ")");
  transform->add_option("--mode", targs.mode, "multiplier mode: verbatim (default) or corrected");
  transform->add_option("--csv", targs.csv_path, "write sample CSV to this file instead of stdout");
  transform->add_option("--tol", targs.tol, "residual tolerance (default 1e-5)");

  int tq = 0, tlmax = 6, tmbound = 29;
  CLI::App* table = app.add_subcommand("table", "CSV catalog of admissible K-types");
  table->add_option("--q", tq, "parity class in 0..3")->required();
  table->add_option("--lmax", tlmax, "largest degree (default 6)");
  table->add_option("--mbound", tmbound, "largest |m| (default 29)");

  // Let app-level flags (--no-timestamp) appear after the subcommand as well.
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval->parsed()) {
      eval_args.no_timestamp = no_timestamp;
      return cmd_eval(eval_args);
    }
    if (verify->parsed()) return cmd_verify(suite, tol_entries, preset, no_timestamp);
    if (structure->parsed()) return cmd_structure(sq, slmax, smbound, no_timestamp);
    if (transform->parsed()) {
      targs.no_timestamp = no_timestamp;
      return cmd_transform(targs);
    }
    if (table->parsed()) return cmd_table(tq, tlmax, tmbound);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
