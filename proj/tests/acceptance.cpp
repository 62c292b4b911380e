// Acceptance gate: twelve always-on criteria with the thresholds pinned
// below.  One line per criterion.  DISCREPANCY marks a computed-vs-printed
// finding backed by measured values; it documents the mismatch and does not
// fail the gate.  The exit code is nonzero exactly when some criterion FAILs.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sl2rep/hyperfun.hpp"
#include "sl2rep/ktypes.hpp"
#include "sl2rep/report.hpp"
#include "sl2rep/liealg.hpp"
#include "sl2rep/structure.hpp"
#include "sl2rep/tdreduce.hpp"
#include "sl2rep/weyl.hpp"

using namespace sl2rep;
using cplx = std::complex<double>;

namespace {

// ---------------------------------------------------------------------------
// THRESHOLDS (pinned; no environment overrides)
// ---------------------------------------------------------------------------

struct GateThresholds {
  double radial_rel = 1e-10;       // 5: D-residual over local scale
  double eta_rel = 1e-10;          // 6: eta ladder deviation, annihilation included
  double e_support_rel = 1e-10;    // 7: leakage outside the predicted targets
  double e_magnitude_rel = 1e-9;   // 7: coefficient magnitude agreement
  double round_trip = 1e-12;       // 8: picture round-trip
  double pde_rel = 1e-6;           // 8: extrapolated Schrodinger residual
  double order_lo = 3.2;           // 8: residual(h)/residual(h/2) window
  double order_hi = 4.8;
  double group_rel = 1e-6;         // 9: extrapolated derivative checks
  double chi_harmonic = 1e-8;      // 11: chi2 vs cos t on |t| <= 1.2
  double wronskian = 1e-8;         // 11
  double chi_identities = 1e-7;    // 11
  double brackets = 1e-5;          // 11
  double transform_pass = 1e-5;    // 11: corrected-multiplier residual
  double zero_identity = 1e-13;    // 11: identity transform, exact in doubles
  double kummer_rel = 1e-10;       // 12
};

const GateThresholds kGate;
const mpq_class kMinusHalf{-1, 2};
const GaussianRational kSHalfI{mpq_class(0), mpq_class(1, 2)};

int g_failures = 0;
int g_discrepancies = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start)
        .count();
  }
};

void line(int id, const std::string& status, const std::string& text, double ms) {
  std::printf("[%2d] %-11s %s  (%.0f ms)\n", id, status.c_str(), text.c_str(), ms);
  if (status == "FAIL") ++g_failures;
  if (status == "DISCREPANCY") ++g_discrepancies;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string idx_str(const KTypeIndex& idx) {
  return "(q,l,m)=(" + std::to_string(idx.q) + "," + std::to_string(idx.l) + "," +
         std::to_string(idx.m) + ")";
}

double rel_diff(cplx a, cplx b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// ---------------------------------------------------------------------------
// 1-4: exact symbolic identities
// ---------------------------------------------------------------------------

void criterion_1_casimir() {
  Timer t;
  CasimirPair cas = casimir();
  bool ok = cas.omega ==
            parse_operator("1/2*(4*s*x^2*dt + x^2*dx^2 - (1 + 2*r)*x*dx + r*(r + 2))");
  line(1, ok ? "PASS" : "FAIL", "casimir closed form, exact and symbolic in r, s", t.ms());
}

void criterion_2_factorization() {
  Timer t;
  CasimirPair cas = casimir();
  WeylOperator at = cas.omega_prime.substitute(PR, GaussianRational(mpq_class(-1, 2)))
                        .substitute(PS, GaussianRational(mpq_class(0), mpq_class(1, 2)));
  ParamPoly lambda = ParamPoly::param(PLAMBDA);
  WeylOperator pot = schrodinger_free();
  pot.add_term(WeylKey{0, -2, 0, 0}, lambda * GaussianRational(-2));
  WeylOperator diff = at - WeylOperator::constant(lambda * GaussianRational(2)) -
                      op_mul(parse_operator("x^2"), pot);
  line(2, diff.is_zero() ? "PASS" : "FAIL",
       "factorization through x^2 at r=-1/2, s=i/2, exact in lambda", t.ms());
}

void criterion_3_heisenberg() {
  Timer t;
  WeylOperator computed = heis_commutator_identity();
  if (computed == parse_operator("4*lambda*(t*v - u)*x^-3")) {
    line(3, "PASS", "heisenberg commutator matches the stated 4*lambda*(t*v - u)*x^-3",
         t.ms());
  } else if (computed == parse_operator("-4*lambda*(t*v - u)*x^-3")) {
    line(3, "DISCREPANCY",
         "heisenberg commutator computes to -4*lambda*(t*v - u)*x^-3, the opposite sign "
         "of the stated 4*lambda*(t*v - u)*x^-3 (exact symbolic computation)",
         t.ms());
  } else {
    line(3, "FAIL", "heisenberg commutator computes to " + computed.str(), t.ms());
  }
}

void criterion_4_brackets() {
  Timer t;
  Sl2Triple gen = sl2_generators();
  CasimirPair cas = casimir();
  bool ok = (op_bracket(gen.h, gen.e_plus) - gen.e_plus * ParamPoly(2)).is_zero() &&
            (op_bracket(gen.h, gen.e_minus) + gen.e_minus * ParamPoly(2)).is_zero() &&
            (op_bracket(gen.e_plus, gen.e_minus) - gen.h).is_zero() &&
            op_bracket(cas.omega, gen.h).is_zero() &&
            op_bracket(cas.omega, gen.e_plus).is_zero() &&
            op_bracket(cas.omega, gen.e_minus).is_zero();
  line(4, ok ? "PASS" : "FAIL", "sl2 brackets and casimir centrality, exact", t.ms());
}

// ---------------------------------------------------------------------------
// 5-7: K-type and ladder sweeps
// ---------------------------------------------------------------------------

void criterion_5_radial() {
  Timer t;
  double worst = 0;
  std::string where = "none";
  for (int q = 0; q <= 3; ++q)
    for (int l = 0; l <= 6; ++l)
      for (int m : weights(q, l, -21, 21))
        for (int k = 1; k <= 60; ++k) {
          double y = 0.05 * k;
          KTypeIndex idx{q, l, m};
          double rel = std::abs(cond_D_residual(idx, y)) / cond_D_scale(idx, y);
          if (rel > worst) {
            worst = rel;
            where = idx_str(idx) + " y=" + num(y);
          }
        }
  bool ok = worst <= kGate.radial_rel;
  line(5, ok ? "PASS" : "FAIL",
       "radial annihilation over l<=6, |m|<=21, y in 0.05..3.00: worst " + num(worst) +
           (ok ? "" : " at " + where),
       t.ms());
}

void criterion_6_eta() {
  Timer t;
  std::vector<std::pair<double, double>> grid = ladder_grid(20);
  double worst = 0;
  std::string where = "none";
  bool signs_ok = true;
  for (int q = 0; q <= 3; ++q)
    for (int l = 0; l <= 6; ++l)
      for (int m : weights(q, l, -21, 21))
        for (GeneratorTag gen : {GeneratorTag::eta_plus, GeneratorTag::eta_minus}) {
          KTypeIndex idx{q, l, m};
          LadderReport rep = verify_ladder(gen, idx, grid);
          if (rep.deviation > worst) {
            worst = rep.deviation;
            where = std::string(generator_name(gen)) + " at " + idx_str(idx);
          }
          if (!rep.extracted.empty() && rep.fitted_sign != 1) signs_ok = false;
        }
  bool ok = worst <= kGate.eta_rel && signs_ok;
  line(6, ok ? "PASS" : "FAIL",
       "eta ladders with extremal annihilation, 20-point grids: worst " + num(worst) +
           (signs_ok ? "" : ", unexpected fitted sign") + (ok ? "" : " at " + where),
       t.ms());
}

void criterion_7_weight2() {
  Timer t;
  std::vector<std::pair<double, double>> grid = ladder_grid(16);
  double support = 0, magnitude = 0, law = 0, upward = 0;
  std::string worst_where = "none", example;
  int sign_flips = 0, reports = 0;
  std::size_t upward_terms = 0;
  for (int q = 0; q <= 3; ++q)
    for (int l = 0; l <= 6; ++l)
      for (int m : weights(q, l, -21, 21))
        for (GeneratorTag gen : {GeneratorTag::E_minus, GeneratorTag::E_plus}) {
          KTypeIndex idx{q, l, m};
          LadderReport rep = verify_ladder(gen, idx, grid);
          ++reports;
          if (rep.fitted_sign != 1) ++sign_flips;
          int dm = gen == GeneratorTag::E_minus ? -2 : 2;

          double resid = 0, scale = 1;
          for (auto [theta, y] : grid) {
            cplx a = apply_compact(gen, idx, theta, y);
            scale = std::max(scale, std::abs(a));
            for (const ExtractedTerm& term : rep.extracted)
              a -= term.measured * psi_jet(term.target, theta, y).value;
            resid = std::max(resid, std::abs(a));
          }
          support = std::max(support, resid / scale);

          for (const ExtractedTerm& term : rep.extracted) {
            if (term.target.m != m + dm || std::abs(term.target.l - l) != 1) support = 1;
            double measured = std::abs(term.measured);
            double printed =
                std::abs(cplx(term.predicted.re_double(), term.predicted.im_double()));
            if (gen == GeneratorTag::E_minus || term.target.l == l - 1) {
              double err = std::abs(measured - printed) / std::max(1.0, printed);
              if (err > magnitude) {
                magnitude = err;
                worst_where = std::string(generator_name(gen)) + " at " + idx_str(idx);
              }
            } else {
              ++upward_terms;
              upward = std::max(upward,
                                std::abs(measured - printed) / std::max(1.0, printed));
              law = std::max(law, std::abs(measured / printed - 2.0 / (2 * l + 1)));
              if (example.empty())
                example = idx_str(idx) + " measured " + num(measured) + " vs printed " +
                          term.predicted.str();
            }
          }
        }

  bool mechanics_ok = support <= kGate.e_support_rel && magnitude <= kGate.e_magnitude_rel &&
                      law <= kGate.e_magnitude_rel;
  if (!mechanics_ok) {
    line(7, "FAIL",
         "weight-2 ladders: support " + num(support) + ", matched magnitudes " +
             num(magnitude) + " (worst " + worst_where + "), upward law residual " +
             num(law),
         t.ms());
  } else if (upward <= kGate.e_magnitude_rel) {
    line(7, "PASS",
         "weight-2 ladders: exact support, magnitudes within tolerance, " +
             std::to_string(sign_flips) + "/" + std::to_string(reports) + " fitted signs -1",
         t.ms());
  } else {
    line(7, "DISCREPANCY",
         "weight-2 ladders: exact support and matched magnitudes except upward E_plus, "
         "where measured = 2/(2l+1) * printed on all " +
             std::to_string(upward_terms) + " targets (e.g. " + example + "); " +
             std::to_string(sign_flips) + "/" + std::to_string(reports) +
             " sign-only flips absorbed by the fitted sign",
         t.ms());
  }
}

// ---------------------------------------------------------------------------
// 8-9: pictures and group actions
// ---------------------------------------------------------------------------

void criterion_8_pictures() {
  Timer t;
  double worst_round = 0;
  {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> th(-4.0, 4.0), yd(-2.5, 2.5);
    std::uniform_int_distribution<int> pick(0, 3);
    const KTypeIndex indices[4] = {{1, 2, 5}, {0, 2, 8}, {3, 2, -5}, {2, 3, 4}};
    int done = 0;
    while (done < 50) {
      double theta = th(rng), y = yd(rng);
      if (std::fabs(std::remainder(theta - M_PI_2, M_PI)) < 0.05) continue;
      PictureFunction F = PictureFunction::ktype(indices[pick(rng)], kMinusHalf, kSHalfI);
      PictureFunction R = to_compact(to_noncompact(F));
      worst_round = std::max(worst_round, rel_diff(R.eval(theta, y), F.eval(theta, y)));
      ++done;
    }
  }

  const double h = kDefaultFdStep;
  double worst_pde = 0;
  const KTypeIndex picks[] = {{0, 0, 0}, {1, 0, 1},  {3, 1, -7}, {2, 3, 8},
                              {1, 4, 9}, {0, 5, 10}, {3, 6, -13}};
  for (const KTypeIndex& idx : picks) {
    mpq_class lambda = ktype_lambda(idx);
    PictureFunction f = to_noncompact(PictureFunction::ktype(idx, kMinusHalf, kSHalfI));
    for (auto [tt, xx] : {std::pair{0.0, 0.8}, {0.5, 1.6}, {-0.7, -1.1}}) {
      cplx r1 = schrodinger_residual(f, lambda, tt, xx, h);
      cplx r2 = schrodinger_residual(f, lambda, tt, xx, h / 2);
      worst_pde = std::max(worst_pde, std::abs((4.0 * r2 - r1) / 3.0) /
                                          schrodinger_scale(f, tt, xx, h));
    }
  }

  PictureFunction f = to_noncompact(PictureFunction::ktype({1, 2, 5}, kMinusHalf, kSHalfI));
  double ratio = std::abs(schrodinger_residual(f, 1, 0.4, 1.2, h)) /
                 std::abs(schrodinger_residual(f, 1, 0.4, 1.2, h / 2));

  bool ok = worst_round <= kGate.round_trip && worst_pde <= kGate.pde_rel &&
            ratio > kGate.order_lo && ratio < kGate.order_hi;
  line(8, ok ? "PASS" : "FAIL",
       "picture round-trip " + num(worst_round) + ", schrodinger residual " +
           num(worst_pde) + ", order ratio " + num(ratio),
       t.ms());
}

void criterion_9_group() {
  Timer t;
  const PictureFunction probes[] = {
      PictureFunction::custom(PictureFunction::Picture::kNoncompact, 1, kMinusHalf, kSHalfI,
                              [](double tt, double xx) {
                                double amp = std::exp(-(tt - 0.2) * (tt - 0.2) -
                                                      0.5 * (xx + 0.1) * (xx + 0.1));
                                return amp * std::polar(1.0, 0.3 * tt + 0.7 * xx -
                                                                 0.2 * tt * xx);
                              }),
      to_noncompact(PictureFunction::ktype({1, 2, 5}, kMinusHalf, kSHalfI))};
  const GroupElement dirs[] = {GroupElement::N(1), GroupElement::A(1), GroupElement::Nbar(1),
                               GroupElement::K(1), GroupElement::Heis(0, 0, 1),
                               GroupElement::Heis(1, 0.5, -0.3)};
  double worst = 0;
  const double delta = 1e-2;
  for (const PictureFunction& f : probes)
    for (const GroupElement& dir : dirs)
      for (auto [tt, xx] : {std::pair{0.2, 0.9}, {-0.4, -0.5}}) {
        cplx d1 = derivative_check(dir, f, tt, xx, delta);
        cplx d2 = derivative_check(dir, f, tt, xx, delta / 2);
        worst = std::max(worst, std::abs((4.0 * d2 - d1) / 3.0));
      }
  bool ok = worst <= kGate.group_rel;
  line(9, ok ? "PASS" : "FAIL",
       "five subgroup derivative checks, extrapolated: worst " + num(worst), t.ms());
}

// ---------------------------------------------------------------------------
// 10: structure theorems at truncation
// ---------------------------------------------------------------------------

void criterion_10_structure() {
  Timer t;
  int defects = 0;
  std::string first;
  for (int q = 0; q <= 3; ++q) {
    SeriesReport rep = composition_series(q, 6, 29);
    for (const ChainMemberReport& member : rep.chain)
      if (!member.invariant) {
        ++defects;
        if (first.empty()) first = "q=" + std::to_string(q) + " " + member.name;
      }
    for (bool ok : rep.verified_inclusions)
      if (!ok) {
        ++defects;
        if (first.empty()) first = "q=" + std::to_string(q) + " inclusion";
      }
    for (const SubquotientReport& sq : rep.subquotients)
      if (!sq.irreducible_interior || sq.interior_vertices == 0) {
        ++defects;
        if (first.empty()) first = "q=" + std::to_string(q) + " " + sq.name;
      }
    if (q % 2 == 0)
      for (int l = 0; l <= 6; ++l)
        if (detect_extremal(q, l).kind != Extremal::kNone) {
          ++defects;
          if (first.empty()) first = "q=" + std::to_string(q) + " extremal at l=" +
                                     std::to_string(l);
        }
  }
  line(10, defects == 0 ? "PASS" : "FAIL",
       defects == 0
           ? std::string("composition chains invariant, subquotients strongly connected, "
                         "even classes extremal-free (window 6, 29)")
           : std::to_string(defects) + " structural defects, first at " + first,
       t.ms());
}

// ---------------------------------------------------------------------------
// 11: time-dependent reduction
// ---------------------------------------------------------------------------

cplx free_gaussian(double t, double x) {
  cplx a = 1.0 + cplx(0, 1) * t;
  return std::exp(-x * x / (2.0 * a)) / std::sqrt(a);
}

cplx bracket_probe(double t, double x) {
  return std::exp(-t * t - x * x) * std::exp(cplx(0, 1) * (t + 2 * x));
}

void criterion_11_tdreduce() {
  Timer t;
  const std::vector<std::pair<double, double>> probes = {
      {0.2, 0.4}, {-0.3, 0.8}, {0.45, -0.6}, {0.0, 1.0}, {-0.45, -0.35}};
  std::vector<std::string> problems;

  double worst_chi = 0, worst_wronskian = 0, worst_identity = 0, worst_bracket = 0;
  for (const char* preset : {"zero", "harmonic", "linear"}) {
    PotentialSpec spec = std::string(preset) == "zero"       ? PotentialSpec::zero()
                         : std::string(preset) == "harmonic" ? PotentialSpec::harmonic()
                                                             : PotentialSpec::parse("g1=1; T=1.4");
    ChiSystem cs = solve_chi(spec, 1e-3);
    if (std::string(preset) == "harmonic")
      for (std::size_t i = 0; i < cs.t.size(); ++i) {
        if (std::abs(cs.t[i]) > 1.2) continue;
        worst_chi = std::max(worst_chi, std::abs(cs.chi2[i] - std::cos(cs.t[i])));
      }
    for (std::size_t i = 0; i < cs.t.size(); ++i)
      worst_wronskian = std::max(
          worst_wronskian,
          std::abs(cs.chi1p[i] * cs.chi2[i] - cs.chi1[i] * cs.chi2p[i] - 1.0));
    ChiIdentityResiduals ids = chi_identities_residual(cs);
    worst_identity = std::max({worst_identity, ids.a_identity, ids.phi_identity});
    worst_bracket = std::max(worst_bracket,
                             bracket_residual_L(cs, spec, bracket_probe, probes));
  }
  if (worst_chi > kGate.chi_harmonic) problems.push_back("chi2 vs cos " + num(worst_chi));
  if (worst_wronskian > kGate.wronskian)
    problems.push_back("wronskian " + num(worst_wronskian));
  if (worst_identity > kGate.chi_identities)
    problems.push_back("chi identities " + num(worst_identity));
  if (worst_bracket > kGate.brackets) problems.push_back("brackets " + num(worst_bracket));

  // Mechanics: the zero-potential transform is the identity.
  ChiSystem zero = solve_chi(PotentialSpec::zero(), 1e-3);
  double worst_zero = 0;
  for (MultiplierMode mode : {MultiplierMode::kVerbatim, MultiplierMode::kCorrected}) {
    GridFunction ft =
        transform_solution(zero, free_gaussian, -0.8, 0.8, 81, -2.0, 2.0, 81, mode);
    for (std::size_t it = 0; it < ft.ts.size(); ++it)
      for (std::size_t ix = 0; ix < ft.xs.size(); ++ix)
        worst_zero = std::max(worst_zero,
                              std::abs(ft.at(it, ix) - free_gaussian(ft.ts[it], ft.xs[ix])));
  }
  if (worst_zero > kGate.zero_identity)
    problems.push_back("zero-preset identity " + num(worst_zero));

  // Verdicts: corrected multiplier must certify; the verbatim multiplier is
  // run on the same grid and its verdict documented either way.
  ChiSystem harm = solve_chi(PotentialSpec::harmonic(), 1e-3);
  const std::vector<std::pair<double, double>> residual_probes = {
      {0.0, 0.5}, {0.25, 1.0}, {-0.25, -1.0}, {0.4, -0.5}, {-0.4, 0.8}, {0.1, -1.2}};
  GridFunction good = transform_solution(harm, free_gaussian, -0.6, 0.6, 241, -1.8, 1.8,
                                         361, MultiplierMode::kCorrected);
  TdResidualReport ok_rep = td_residual(good, harm.spec, residual_probes, kGate.transform_pass);
  if (ok_rep.verdict != "PASS")
    problems.push_back("corrected-multiplier residual " + num(ok_rep.max_residual));
  GridFunction bad = transform_solution(harm, free_gaussian, -0.6, 0.6, 241, -1.8, 1.8,
                                        361, MultiplierMode::kVerbatim);
  TdResidualReport bad_rep = td_residual(bad, harm.spec, residual_probes, kGate.transform_pass);

  if (!problems.empty()) {
    std::string text = "time-dependent reduction: ";
    for (std::size_t i = 0; i < problems.size(); ++i)
      text += (i ? "; " : "") + problems[i];
    line(11, "FAIL", text, t.ms());
    return;
  }
  std::string verdict_note =
      bad_rep.verdict == "PASS"
          ? "verbatim multiplier also passes"
          : "verbatim multiplier documented MULTIPLIER-DISCREPANCY (residual " +
                num(bad_rep.max_residual) + ", an order-one finding about the printed "
                                            "exponent; corrected multiplier residual " +
                num(ok_rep.max_residual) + ")";
  line(11, "PASS",
       "chi closed forms, wronskian, identities, brackets across the three presets; "
       "zero-preset identity " +
           num(worst_zero) + "; " + verdict_note,
       t.ms());
}

// ---------------------------------------------------------------------------
// 12: special-function layer
// ---------------------------------------------------------------------------

void criterion_12_special() {
  Timer t;
  std::vector<double> as;
  for (int k = -20; k <= 20; ++k) as.push_back(k / 4.0);
  const double bs[] = {0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5};
  const double zs[] = {0.5, 1, 2, 5, 10, 17, 25};

  double worst = 0;
  for (double a : as)
    for (double b : bs)
      for (double z : zs) {
        cplx f0 = kummer_m(a, b, z).value;
        cplx f1 = kummer_m_deriv(a, b, z, 1).value;
        cplx f2 = kummer_m_deriv(a, b, z, 2).value;
        cplx resid = z * f2 + (b - z) * f1 - a * f0;
        double scale = std::max({1.0, std::abs(z * f2), std::abs((b - z) * f1),
                                 std::abs(a * f0)});
        worst = std::max(worst, std::abs(resid) / scale);
        for (Contiguous rel : {Contiguous::U1, Contiguous::U2, Contiguous::U3,
                               Contiguous::U4})
          worst = std::max(worst, contiguous_residual(rel, a, b, z) /
                                      std::max(1.0, contiguous_scale(rel, a, b, z)));
      }
  bool ok = worst <= kGate.kummer_rel;
  line(12, ok ? "PASS" : "FAIL",
       "kummer ODE and four contiguous relations: worst " + num(worst), t.ms());
}

}  // namespace

int main() {
  std::printf("acceptance gate, library version %s\n", kVersionString);
  criterion_1_casimir();
  criterion_2_factorization();
  criterion_3_heisenberg();
  criterion_4_brackets();
  criterion_5_radial();
  criterion_6_eta();
  criterion_7_weight2();
  criterion_8_pictures();
  criterion_9_group();
  criterion_10_structure();
  criterion_11_tdreduce();
  criterion_12_special();
  std::printf("summary: 12 criteria, %d failed, %d documented discrepancies\n", g_failures,
              g_discrepancies);
  return g_failures == 0 ? 0 : 1;
}
