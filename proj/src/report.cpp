// Implementation of the named verification suites.  Each check runs the
// library's own verifiers over pinned grids, folds the worst case into one
// record, and keeps the offending inputs next to the number that earned them.
#include "sl2rep/report.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sl2rep/hyperfun.hpp"
#include "sl2rep/ktypes.hpp"
#include "sl2rep/liealg.hpp"
#include "sl2rep/structure.hpp"
#include "sl2rep/tdreduce.hpp"
#include "sl2rep/weyl.hpp"

namespace sl2rep {
namespace {

using cplx = std::complex<double>;

const mpq_class kMinusHalf{-1, 2};
const GaussianRational kSHalfI{mpq_class(0), mpq_class(1, 2)};

double tol_for(const TolOverrides& overrides, const std::string& name, double fallback) {
  auto it = overrides.find(name);
  return it == overrides.end() ? fallback : it->second;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string at_index(const KTypeIndex& idx) {
  return "(q,l,m)=(" + std::to_string(idx.q) + "," + std::to_string(idx.l) + "," +
         std::to_string(idx.m) + ")";
}

std::string at_point(const char* labels, double a, double b) {
  return std::string(labels) + "=(" + num(a) + "," + num(b) + ")";
}

double rel_diff(cplx a, cplx b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// Running maximum that remembers where it happened.
struct Worst {
  double metric = 0;
  std::string where;
  bool seen = false;

  void consider(double m, std::string w) {
    if (!seen || m > metric) {
      metric = m;
      where = std::move(w);
      seen = true;
    }
  }
};

CheckRecord judged(const TolOverrides& overrides, const std::string& name, double fallback,
                   const Worst& worst, std::string pass_detail = "") {
  CheckRecord rec{name, "", worst.metric, tol_for(overrides, name, fallback), ""};
  if (rec.metric <= rec.tolerance) {
    rec.status = "PASS";
    rec.detail = std::move(pass_detail);
  } else {
    rec.status = "FAIL";
    rec.detail = "worst case: " + worst.where;
  }
  return rec;
}

// ---------------------------------------------------------------- symbolic

std::vector<CheckRecord> run_symbolic(const TolOverrides& overrides) {
  std::vector<CheckRecord> out;
  auto exact = [&](const std::string& name, const WeylOperator& difference) {
    Worst w;
    w.consider(static_cast<double>(difference.term_count()),
               difference.is_zero() ? std::string("none") : "difference " + difference.str());
    out.push_back(judged(overrides, name, 0.0, w));
  };

  CasimirPair cas = casimir();
  exact("casimir_closed_form",
        cas.omega -
            parse_operator("1/2*(4*s*x^2*dt + x^2*dx^2 - (1 + 2*r)*x*dx + r*(r + 2))"));

  // At r = -1/2, s = i/2 the shifted Casimir factors through x^2 times the
  // evolution operator with inverse-square term, up to the constant 2 lambda.
  WeylOperator at = cas.omega_prime.substitute(PR, GaussianRational(mpq_class(-1, 2)))
                        .substitute(PS, GaussianRational(mpq_class(0), mpq_class(1, 2)));
  ParamPoly lambda = ParamPoly::param(PLAMBDA);
  WeylOperator pot = schrodinger_free();
  pot.add_term(WeylKey{0, -2, 0, 0}, lambda * GaussianRational(-2));
  exact("casimir_factorization", at - WeylOperator::constant(lambda * GaussianRational(2)) -
                                     op_mul(parse_operator("x^2"), pot));

  Sl2Triple gen = sl2_generators();
  exact("bracket_h_eplus", op_bracket(gen.h, gen.e_plus) - gen.e_plus * ParamPoly(2));
  exact("bracket_h_eminus", op_bracket(gen.h, gen.e_minus) + gen.e_minus * ParamPoly(2));
  exact("bracket_eplus_eminus", op_bracket(gen.e_plus, gen.e_minus) - gen.h);

  Worst central;
  central.consider(static_cast<double>(op_bracket(cas.omega, gen.h).term_count() +
                                       op_bracket(cas.omega, gen.e_plus).term_count() +
                                       op_bracket(cas.omega, gen.e_minus).term_count()),
                   "nonzero bracket of omega with the triple");
  out.push_back(judged(overrides, "casimir_centrality", 0.0, central));
  return out;
}

// ----------------------------------------------------------------- special

std::vector<CheckRecord> run_special(const TolOverrides& overrides) {
  std::vector<double> as;
  for (int k = -20; k <= 20; ++k) as.push_back(k / 4.0);
  const std::vector<double> bs = {0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5};
  const std::vector<double> zs = {0.5, 1, 2, 5, 10, 17, 25};

  std::vector<CheckRecord> out;

  Worst ode;
  for (double a : as)
    for (double b : bs)
      for (double z : zs) {
        cplx f0 = kummer_m(a, b, z).value;
        cplx f1 = kummer_m_deriv(a, b, z, 1).value;
        cplx f2 = kummer_m_deriv(a, b, z, 2).value;
        cplx resid = z * f2 + (b - z) * f1 - a * f0;
        double scale = std::max({1.0, std::abs(z * f2), std::abs((b - z) * f1),
                                 std::abs(a * f0)});
        ode.consider(std::abs(resid) / scale,
                     "a=" + num(a) + ", b=" + num(b) + ", z=" + num(z));
      }
  out.push_back(judged(overrides, "kummer_ode", 1e-10, ode));

  const std::pair<Contiguous, const char*> relations[] = {{Contiguous::U1, "contiguous_u1"},
                                                          {Contiguous::U2, "contiguous_u2"},
                                                          {Contiguous::U3, "contiguous_u3"},
                                                          {Contiguous::U4, "contiguous_u4"}};
  for (auto [rel, name] : relations) {
    Worst w;
    for (double a : as)
      for (double b : bs)
        for (double z : zs)
          w.consider(contiguous_residual(rel, a, b, z) /
                         std::max(1.0, contiguous_scale(rel, a, b, z)),
                     "a=" + num(a) + ", b=" + num(b) + ", z=" + num(z));
    out.push_back(judged(overrides, name, 1e-10, w));
  }
  return out;
}

// ------------------------------------------------------------------ ktypes

std::vector<CheckRecord> run_ktypes(const TolOverrides& overrides) {
  std::vector<CheckRecord> out;

  Worst radial;
  for (int q = 0; q <= 3; ++q)
    for (int l = 0; l <= 6; ++l)
      for (int m : weights(q, l, -21, 21))
        for (int k = 1; k <= 60; ++k) {
          double y = 0.05 * k;
          KTypeIndex idx{q, l, m};
          radial.consider(std::abs(cond_D_residual(idx, y)) / cond_D_scale(idx, y),
                          at_index(idx) + ", y=" + num(y));
        }
  out.push_back(judged(overrides, "radial_annihilation", 1e-10, radial));

  Worst eig;
  int mismatches = 0;
  std::string first;
  for (int l = 0; l <= 8; ++l) {
    mpq_class expect{l * (l - 1), 2};
    expect.canonicalize();
    if (ktype_lambda({1, l, 2 * l + 1}) != expect) {
      ++mismatches;
      if (first.empty()) first = "eigenvalue of degree " + std::to_string(l);
    }
    std::set<int> back = lambda_to_l(expect);
    bool ok = l <= 1 ? back == std::set<int>{0, 1} : back == std::set<int>{l};
    if (!ok) {
      ++mismatches;
      if (first.empty()) first = "degree recovery at l=" + std::to_string(l);
    }
  }
  if (!lambda_to_l(2).empty() || !lambda_to_l(mpq_class{15, 8}).empty()) {
    ++mismatches;
    if (first.empty()) first = "non-triangular eigenvalue accepted";
  }
  eig.consider(static_cast<double>(mismatches), first.empty() ? "none" : first);
  out.push_back(judged(overrides, "eigenvalue_map", 0.0, eig));
  return out;
}

// ------------------------------------------------------------------ ladder

std::vector<CheckRecord> run_ladder(const TolOverrides& overrides) {
  std::vector<CheckRecord> out;
  const std::vector<std::pair<double, double>> g20 = ladder_grid(20);
  const std::vector<std::pair<double, double>> g16 = ladder_grid(16);

  Worst eta_up, eta_down;
  for (int q = 0; q <= 3; ++q)
    for (int l = 0; l <= 4; ++l)
      for (int m : weights(q, l, -13, 13)) {
        KTypeIndex idx{q, l, m};
        for (auto [gen, worst] : {std::pair{GeneratorTag::eta_plus, &eta_up},
                                  std::pair{GeneratorTag::eta_minus, &eta_down}}) {
          LadderReport rep = verify_ladder(gen, idx, g20);
          worst->consider(rep.deviation, at_index(idx));
          if (!rep.extracted.empty() && rep.fitted_sign != 1)
            worst->consider(1.0, "fitted sign -1 at " + at_index(idx));
        }
      }
  out.push_back(judged(overrides, "eta_plus_ladder", 1e-10, eta_up));
  out.push_back(judged(overrides, "eta_minus_ladder", 1e-10, eta_down));

  Worst extremal;
  for (int l = 0; l <= 6; ++l) {
    KTypeIndex low{1, l, 2 * l + 1}, high{3, l, -(2 * l + 1)};
    extremal.consider(verify_ladder(GeneratorTag::eta_minus, low, g20).deviation,
                      "lowest weight " + at_index(low));
    extremal.consider(verify_ladder(GeneratorTag::eta_plus, high, g20).deviation,
                      "highest weight " + at_index(high));
  }
  out.push_back(judged(overrides, "extremal_annihilation", 1e-10, extremal));

  Worst support, magnitude, law, upward;
  int sign_flips = 0, reports = 0;
  std::size_t upward_terms = 0;
  std::string example;
  for (int q = 0; q <= 3; ++q)
    for (int l = 0; l <= 4; ++l)
      for (int m : weights(q, l, -13, 13)) {
        KTypeIndex idx{q, l, m};
        for (GeneratorTag gen : {GeneratorTag::E_minus, GeneratorTag::E_plus}) {
          LadderReport rep = verify_ladder(gen, idx, g16);
          ++reports;
          if (rep.fitted_sign != 1) ++sign_flips;
          int dm = gen == GeneratorTag::E_minus ? -2 : 2;

          double resid = 0, scale = 1;
          for (auto [theta, y] : g16) {
            cplx a = apply_compact(gen, idx, theta, y);
            scale = std::max(scale, std::abs(a));
            for (const ExtractedTerm& term : rep.extracted)
              a -= term.measured * psi_jet(term.target, theta, y).value;
            resid = std::max(resid, std::abs(a));
          }
          support.consider(resid / scale,
                           std::string(generator_name(gen)) + " at " + at_index(idx));

          for (const ExtractedTerm& term : rep.extracted) {
            if (term.target.m != m + dm || std::abs(term.target.l - l) != 1)
              support.consider(1.0, "target off the lattice at " + at_index(idx));
            double measured = std::abs(term.measured);
            double printed =
                std::abs(cplx(term.predicted.re_double(), term.predicted.im_double()));
            std::string where = std::string(generator_name(gen)) + " at " + at_index(idx) +
                                " -> " + at_index(term.target);
            if (gen == GeneratorTag::E_minus || term.target.l == l - 1) {
              magnitude.consider(std::abs(measured - printed) / std::max(1.0, printed),
                                 where);
            } else {
              ++upward_terms;
              upward.consider(std::abs(measured - printed) / std::max(1.0, printed), where);
              law.consider(std::abs(measured / printed - 2.0 / (2 * l + 1)), where);
              if (example.empty())
                example = at_index(idx) + ": measured " + num(measured) + ", printed " +
                          term.predicted.str();
            }
          }
        }
      }
  out.push_back(judged(overrides, "E_support", 1e-10, support));
  out.push_back(judged(
      overrides, "E_magnitude", 1e-9, magnitude,
      "sign-only mismatches absorbed by the fitted sign on " + std::to_string(sign_flips) +
          " of " + std::to_string(reports) + " reports"));

  // The upward E_plus coefficients measure 2/(2l+1) times the printed value;
  // the record stays a discrepancy as long as that law holds exactly.
  CheckRecord up{"E_plus_upward", "", upward.metric,
                 tol_for(overrides, "E_plus_upward", 1e-9), ""};
  if (law.metric > 1e-9) {
    up.status = "FAIL";
    up.detail = "measured/printed departed from 2/(2l+1) by " + num(law.metric) + " at " +
                law.where;
  } else if (up.metric <= up.tolerance) {
    up.status = "PASS";
  } else {
    up.status = "DISCREPANCY";
    up.detail = "measured/printed = 2/(2l+1) on all " + std::to_string(upward_terms) +
                " upward targets (law residual <= " + num(law.metric) + "); e.g. " + example;
  }
  out.push_back(up);
  return out;
}

// ------------------------------------------------------------------- group

PictureFunction report_gaussian_probe() {
  return PictureFunction::custom(
      PictureFunction::Picture::kNoncompact, 1, kMinusHalf, kSHalfI,
      [](double t, double x) {
        double amp = std::exp(-(t - 0.2) * (t - 0.2) - 0.5 * (x + 0.1) * (x + 0.1));
        return amp * std::polar(1.0, 0.3 * t + 0.7 * x - 0.2 * t * x);
      });
}

std::vector<CheckRecord> run_group(const TolOverrides& overrides) {
  std::vector<CheckRecord> out;
  const PictureFunction probes[] = {
      report_gaussian_probe(),
      to_noncompact(PictureFunction::ktype({1, 2, 5}, kMinusHalf, kSHalfI))};
  const char* probe_names[] = {"gaussian probe", "transformed K-type (1,2,5)"};
  const std::pair<double, double> points[] = {{0.2, 0.9}, {-0.4, -0.5}};

  struct FamilyCheck {
    const char* name;
    std::vector<GroupElement> dirs;
  };
  const FamilyCheck families[] = {
      {"group_N", {GroupElement::N(1)}},
      {"group_A", {GroupElement::A(1)}},
      {"group_Nbar", {GroupElement::Nbar(1)}},
      {"group_K", {GroupElement::K(1)}},
      {"group_Heis", {GroupElement::Heis(0, 0, 1), GroupElement::Heis(1, 0.5, -0.3)}}};

  const double delta = 1e-2;
  for (const FamilyCheck& family : families) {
    Worst w;
    for (std::size_t p = 0; p < 2; ++p)
      for (const GroupElement& dir : family.dirs)
        for (auto [t, x] : points) {
          cplx d1 = derivative_check(dir, probes[p], t, x, delta);
          cplx d2 = derivative_check(dir, probes[p], t, x, delta / 2);
          w.consider(std::abs((4.0 * d2 - d1) / 3.0),
                     std::string(probe_names[p]) + ", " + at_point("(t,x)", t, x));
        }
    out.push_back(judged(overrides, family.name, 1e-6, w));
  }
  return out;
}

// ---------------------------------------------------------------- pictures

std::vector<CheckRecord> run_pictures(const TolOverrides& overrides) {
  std::vector<CheckRecord> out;

  Worst round;
  {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> th(-4.0, 4.0), yd(-2.5, 2.5);
    std::uniform_int_distribution<int> pick(0, 3);
    const KTypeIndex indices[4] = {{1, 2, 5}, {0, 2, 8}, {3, 2, -5}, {2, 3, 4}};
    int done = 0;
    while (done < 50) {
      double theta = th(rng), y = yd(rng);
      double dist = std::fabs(std::remainder(theta - M_PI_2, M_PI));
      if (dist < 0.05) continue;  // keep clear of the rejected tan poles
      KTypeIndex idx = indices[pick(rng)];
      PictureFunction F = PictureFunction::ktype(idx, kMinusHalf, kSHalfI);
      PictureFunction R = to_compact(to_noncompact(F));
      round.consider(rel_diff(R.eval(theta, y), F.eval(theta, y)),
                     at_index(idx) + " at " + at_point("(theta,y)", theta, y));
      ++done;
    }
  }
  out.push_back(judged(overrides, "round_trip", 1e-12, round));

  const double h = kDefaultFdStep;
  Worst pde;
  const KTypeIndex picks[] = {{0, 0, 0}, {1, 0, 1},  {3, 1, -7}, {2, 3, 8},
                              {1, 4, 9}, {0, 5, 10}, {3, 6, -13}};
  for (const KTypeIndex& idx : picks) {
    mpq_class lambda = ktype_lambda(idx);
    PictureFunction f = to_noncompact(PictureFunction::ktype(idx, kMinusHalf, kSHalfI));
    for (auto [t, x] : {std::pair{0.0, 0.8}, {0.5, 1.6}, {-0.7, -1.1}}) {
      cplx r1 = schrodinger_residual(f, lambda, t, x, h);
      cplx r2 = schrodinger_residual(f, lambda, t, x, h / 2);
      double scale = schrodinger_scale(f, t, x, h);
      pde.consider(std::abs((4.0 * r2 - r1) / 3.0) / scale,
                   at_index(idx) + " at " + at_point("(t,x)", t, x));
    }
  }
  out.push_back(judged(overrides, "schrodinger_residual", 1e-6, pde));

  // Second-order stencil: halving the step must shrink the residual by
  // about four.
  Worst order;
  {
    PictureFunction f = to_noncompact(PictureFunction::ktype({1, 2, 5}, kMinusHalf, kSHalfI));
    cplx r1 = schrodinger_residual(f, 1, 0.4, 1.2, h);
    cplx r2 = schrodinger_residual(f, 1, 0.4, 1.2, h / 2);
    double ratio = std::abs(r1) / std::abs(r2);
    order.consider(std::abs(ratio - 4.0),
                   "ratio " + num(ratio) + " at (q,l,m)=(1,2,5), (t,x)=(0.4,1.2)");
  }
  out.push_back(judged(overrides, "residual_order", 0.8, order));
  return out;
}

// --------------------------------------------------------------- structure

std::vector<CheckRecord> run_structure(const TolOverrides& overrides) {
  std::vector<CheckRecord> out;
  for (int q = 0; q <= 3; ++q) {
    SeriesReport rep = composition_series(q);
    Worst w;
    w.consider(0.0, "none");
    double defects = 0;
    std::string first;

    std::string dims;
    for (const ChainMemberReport& member : rep.chain) {
      dims += (dims.empty() ? "" : "/") + std::to_string(member.dim_in_window);
      if (!member.invariant) {
        defects += static_cast<double>(std::max<std::size_t>(member.violations.size(), 1));
        if (first.empty()) first = member.name + " not invariant";
      }
    }
    for (std::size_t i = 0; i < rep.verified_inclusions.size(); ++i)
      if (!rep.verified_inclusions[i]) {
        defects += 1;
        if (first.empty()) first = "inclusion " + std::to_string(i) + " failed";
      }
    bool vacuous = false;
    std::string vacuous_names;
    for (const SubquotientReport& sq : rep.subquotients) {
      if (sq.interior_vertices == 0) {
        vacuous = true;
        vacuous_names += (vacuous_names.empty() ? "" : ", ") + sq.name;
      } else if (!sq.irreducible_interior) {
        defects += 1;
        if (first.empty()) first = "subquotient " + sq.name + " not strongly connected";
      }
    }
    if (q % 2 == 0)
      for (int l = 0; l <= 6; ++l)
        if (detect_extremal(q, l).kind != Extremal::kNone) {
          defects += 1;
          if (first.empty()) first = "unexpected extremal weight at l=" + std::to_string(l);
        }
    w.consider(defects, first.empty() ? "none" : first);

    CheckRecord rec = judged(overrides, "structure_q" + std::to_string(q), 0.0, w,
                             "chain dims " + dims + " in the default window");
    if (rec.status == "PASS" && vacuous) {
      rec.status = "CAVEAT";
      rec.detail = "vacuous interior for " + vacuous_names + "; claims unverifiable here";
    }
    out.push_back(rec);
  }
  return out;
}

// ---------------------------------------------------------------- tdreduce

cplx free_gaussian(double t, double x) {
  cplx a = 1.0 + cplx(0, 1) * t;
  return std::exp(-x * x / (2.0 * a)) / std::sqrt(a);
}

cplx bracket_probe(double t, double x) {
  return std::exp(-t * t - x * x) * std::exp(cplx(0, 1) * (t + 2 * x));
}

void append_tdreduce_preset(const std::string& preset, const TolOverrides& overrides,
                            std::vector<CheckRecord>& out) {
  PotentialSpec spec = preset == "zero"       ? PotentialSpec::zero()
                       : preset == "harmonic" ? PotentialSpec::harmonic()
                                              : PotentialSpec::parse("g1=1; T=1.4");
  ChiSystem cs = solve_chi(spec, 1e-3);

  Worst chi;
  double chi_tol = 1e-12;
  for (std::size_t i = 0; i < cs.t.size(); ++i) {
    double tt = cs.t[i];
    std::string where = "t=" + num(tt);
    if (preset == "zero") {
      chi.consider(std::abs(cs.chi2[i] - 1.0), "chi2 at " + where);
      chi.consider(std::abs(cs.chi2p[i]), "chi2' at " + where);
      chi.consider(std::abs(cs.Theta[i] - tt), "Theta at " + where);
    } else if (preset == "harmonic") {
      chi_tol = 1e-8;
      if (std::abs(tt) > 1.2) continue;
      chi.consider(std::abs(cs.chi2[i] - std::cos(tt)), "chi2 at " + where);
      chi.consider(std::abs(cs.chi2p[i] + std::sin(tt)), "chi2' at " + where);
      chi.consider(std::abs(cs.Theta[i] - std::tan(tt)), "Theta at " + where);
    } else {
      chi_tol = 1e-10;
      chi.consider(std::abs(cs.chi2[i] - 1.0), "chi2 at " + where);
      chi.consider(std::abs(cs.chi2p[i]), "chi2' at " + where);
      chi.consider(std::abs(cs.Theta[i] - tt), "Theta at " + where);
      chi.consider(std::abs(cs.C2[i] - tt), "C2 at " + where);
      chi.consider(std::abs(cs.A2[i] + tt), "A2 at " + where);
      chi.consider(std::abs(cs.C1[i] - tt * tt / 2), "C1 at " + where);
      chi.consider(std::abs(cs.A1[i] + tt * tt * tt / 2), "A1 at " + where);
    }
  }
  out.push_back(judged(overrides, "chi_closed_form_" + preset, chi_tol, chi));

  Worst wronskian;
  for (std::size_t i = 0; i < cs.t.size(); ++i)
    wronskian.consider(
        std::abs(cs.chi1p[i] * cs.chi2[i] - cs.chi1[i] * cs.chi2p[i] - 1.0),
        "t=" + num(cs.t[i]));
  out.push_back(judged(overrides, "wronskian_" + preset, 1e-8, wronskian));

  ChiIdentityResiduals ids = chi_identities_residual(cs);
  Worst identities;
  identities.consider(ids.a_identity, "A-coefficient identity");
  identities.consider(ids.phi_identity, "phi' identity");
  out.push_back(judged(overrides, "identities_" + preset, 1e-7, identities));

  const std::vector<std::pair<double, double>> probes = {
      {0.2, 0.4}, {-0.3, 0.8}, {0.45, -0.6}, {0.0, 1.0}, {-0.45, -0.35}};
  Worst brackets;
  brackets.consider(bracket_residual_L(cs, spec, bracket_probe, probes),
                    "five probes, delta 1e-2, Richardson extrapolated");
  out.push_back(judged(overrides, "brackets_" + preset, 1e-5, brackets));

  if (preset == "zero") {
    Worst identity;
    for (MultiplierMode mode : {MultiplierMode::kVerbatim, MultiplierMode::kCorrected}) {
      GridFunction ft =
          transform_solution(cs, free_gaussian, -0.8, 0.8, 81, -2.0, 2.0, 81, mode);
      for (std::size_t it = 0; it < ft.ts.size(); ++it)
        for (std::size_t ix = 0; ix < ft.xs.size(); ++ix)
          identity.consider(
              std::abs(ft.at(it, ix) - free_gaussian(ft.ts[it], ft.xs[ix])),
              std::string(mode == MultiplierMode::kVerbatim ? "verbatim" : "corrected") +
                  " mode, " + at_point("(t,x)", ft.ts[it], ft.xs[ix]));
    }
    out.push_back(judged(overrides, "transform_zero_identity", 1e-13, identity));
    return;
  }

  const std::vector<std::pair<double, double>> residual_probes = {
      {0.0, 0.5}, {0.25, 1.0}, {-0.25, -1.0}, {0.4, -0.5}, {-0.4, 0.8}, {0.1, -1.2}};
  auto certify = [&](const std::string& name, MultiplierMode mode) {
    double tol = tol_for(overrides, name, 1e-5);
    GridFunction ft =
        transform_solution(cs, free_gaussian, -0.6, 0.6, 241, -1.8, 1.8, 361, mode);
    TdResidualReport rep = td_residual(ft, spec, residual_probes, tol);
    Worst w;
    for (const ResidualProbe& probe : rep.profile)
      w.consider(probe.residual, at_point("(t,x)", probe.t, probe.x));
    return std::pair{judged(overrides, name, 1e-5, w), rep};
  };

  if (preset == "harmonic") {
    CheckRecord good = certify("transform_harmonic_corrected", MultiplierMode::kCorrected).first;
    auto [bad, bad_rep] = certify("transform_harmonic_verbatim", MultiplierMode::kVerbatim);
    if (bad.status == "FAIL" && bad_rep.verdict == "MULTIPLIER-DISCREPANCY") {
      // The printed exponent misses the (chi2'/chi2)^2 contribution in its
      // x^2 phase and drifts in the imaginary part, so its residual is a
      // finding about the formula, not about this build.
      Worst worst_probe;
      for (const ResidualProbe& probe : bad_rep.profile)
        worst_probe.consider(probe.residual, at_point("(t,x)", probe.t, probe.x));
      bad.status = "DISCREPANCY";
      bad.detail = "printed multiplier leaves an order-one residual (worst at " +
                   worst_probe.where + "); the corrected multiplier passes the same grid at " +
                   num(good.metric);
    }
    out.push_back(std::move(good));
    out.push_back(std::move(bad));
  } else {
    out.push_back(certify("transform_linear_corrected", MultiplierMode::kCorrected).first);
  }
}

}  // namespace

// ------------------------------------------------------------- public API

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"symbolic", "special",  "ktypes",
                                                 "ladder",   "group",    "pictures",
                                                 "structure", "tdreduce"};
  return names;
}

std::vector<CheckRecord> run_suite(const std::string& suite, const TolOverrides& tol) {
  if (suite == "all") {
    std::vector<CheckRecord> out;
    for (const std::string& name : suite_names()) {
      std::vector<CheckRecord> part = run_suite(name, tol);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  if (suite == "symbolic") return run_symbolic(tol);
  if (suite == "special") return run_special(tol);
  if (suite == "ktypes") return run_ktypes(tol);
  if (suite == "ladder") return run_ladder(tol);
  if (suite == "group") return run_group(tol);
  if (suite == "pictures") return run_pictures(tol);
  if (suite == "structure") return run_structure(tol);
  if (suite == "tdreduce") return run_tdreduce_suite("", tol);
  throw std::invalid_argument("unknown suite '" + suite +
                              "' (expected symbolic, special, ktypes, ladder, group, "
                              "pictures, structure, tdreduce, or all)");
}

std::vector<CheckRecord> run_tdreduce_suite(const std::string& preset,
                                            const TolOverrides& tol) {
  std::vector<CheckRecord> out;
  if (preset.empty()) {
    for (const char* p : {"zero", "harmonic", "linear"}) append_tdreduce_preset(p, tol, out);
    return out;
  }
  if (preset != "zero" && preset != "harmonic" && preset != "linear")
    throw std::invalid_argument("unknown preset '" + preset +
                                "' (expected zero, harmonic, or linear)");
  append_tdreduce_preset(preset, tol, out);
  return out;
}

std::vector<std::string> ledger_notes(const std::string& suite) {
  std::vector<std::string> notes = {
      "Checks run sequentially over pinned grids; reruns are deterministic.",
      "Plain text and CSV carry 17 significant digits; JSON numbers use exact "
      "round-trip formatting."};
  bool all = suite == "all";
  if (all || suite == "symbolic")
    notes.push_back(
        "Symbolic checks compare computed closed forms; the commutator with the "
        "inverse-square evolution operator computes to -4*lambda*(t*v - u)*x^-3.");
  if (all || suite == "ladder")
    notes.push_back(
        "Upward E_plus coefficients report DISCREPANCY: measured magnitudes equal the "
        "printed ones times 2/(2l+1); sign-only mismatches are absorbed by the fitted "
        "sign and reported.");
  if (all || suite == "structure")
    notes.push_back(
        "Structural claims are asserted on window interiors; boundary effects and "
        "labeling choices appear as caveats.");
  if (all || suite == "tdreduce")
    notes.push_back(
        "The verbatim multiplier reproduces the printed exponent and is expected to "
        "report MULTIPLIER-DISCREPANCY on forced potentials; the corrected multiplier "
        "passes the same residual harness.");
  return notes;
}

bool any_fail(const std::vector<CheckRecord>& results) {
  for (const CheckRecord& rec : results)
    if (rec.status == "FAIL") return true;
  return false;
}

}  // namespace sl2rep
