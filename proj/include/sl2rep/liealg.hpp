// Generator applications on closed-form K-types via exact jets, ladder
// coefficient verification with empirical sign fitting, and one-parameter
// group actions in the non-compact picture with derivative checks.
#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "sl2rep/ktypes.hpp"

namespace sl2rep {

// Closed enumeration of generators.  The first six act on the compact
// picture through exact jets; h and e± are the non-compact triple, realized
// on the compact side through the linear combinations
//   h = eta_plus + eta_minus,
//   e_plus  = -(i/2)(eta_plus - eta_minus - kappa),
//   e_minus = -(i/2)(eta_plus - eta_minus + kappa),
// and on the non-compact side through finite differences.
enum class GeneratorTag {
  kappa,
  eta_plus,
  eta_minus,
  E_plus,
  E_minus,
  omega_dd,
  h,
  e_plus,
  e_minus,
};

// Stable identifier for reports.
const char* generator_name(GeneratorTag gen);

// The generator's differential operator applied to Psi_index at (theta, y)
// using exact jets, with r = -1/2 and s = i/2 substituted.  Throws
// std::invalid_argument on an inadmissible index.
std::complex<double> apply_compact(GeneratorTag gen, const KTypeIndex& idx, double theta,
                                   double y);

// One predicted expansion term: exact coefficient times a target K-type.
struct LadderTerm {
  GaussianRational coeff;
  KTypeIndex target;
};

// Predicted expansion of gen applied to Psi_index, coefficients taken
// verbatim from the source formulas; zero-coefficient terms are omitted
// (degree 0 drops the downward target, degree 1 drops the upward target,
// extremal weights drop the annihilated direction).  Supported generators:
// kappa and omega_dd (diagonal), eta_pm (weight +-4 shifts), E_pm
// (weight +-2, degree +-1 shifts).  Throws std::invalid_argument on an
// inadmissible index or an unsupported generator.
std::vector<LadderTerm> ladder_terms(GeneratorTag gen, const KTypeIndex& idx);

// Coefficient of one target extracted from the jet evaluation by least
// squares over the probe grid, next to its predicted value.
struct ExtractedTerm {
  KTypeIndex target;
  std::complex<double> measured;
  GaussianRational predicted;
};

struct LadderReport {
  GeneratorTag gen;
  KTypeIndex index;
  // max |apply - sign * prediction| over the grid, divided by
  // max(1, max |apply|, max |prediction|).
  double deviation = 0;
  int fitted_sign = 1;  // sign in {+1, -1} minimizing the deviation
  std::size_t grid_points = 0;
  std::vector<ExtractedTerm> extracted;
};

// Compares apply_compact against the predicted expansion over the grid of
// (theta, y) probes.  Throws std::invalid_argument when the grid has fewer
// than 8 points.
LadderReport verify_ladder(GeneratorTag gen, const KTypeIndex& idx,
                           const std::vector<std::pair<double, double>>& grid);

// Deterministic low-discrepancy probe grid in theta x y, away from y = 0
// and the tan poles.
std::vector<std::pair<double, double>> ladder_grid(std::size_t n);

// The non-compact triple applied to a non-compact picture function through
// Richardson-extrapolated central differences; kappa and eta_pm through the
// combination identities.  E_pm and omega_dd are not supported here.
// Throws std::invalid_argument on picture or generator mismatch.
std::complex<double> apply_noncompact(GeneratorTag gen, const PictureFunction& f, double t,
                                      double x, double fd_step = kDefaultFdStep);

// Element of one of the five explicit one-parameter families acting on the
// non-compact picture.
struct GroupElement {
  enum class Family { kN, kA, kNbar, kK, kHeis };

  Family family = Family::kN;
  double tau = 0;           // parameter of the four SL2 families
  double u = 0, v = 0, w = 0;  // Heisenberg coordinates

  static GroupElement N(double tau);
  static GroupElement A(double tau);
  static GroupElement Nbar(double tau);
  static GroupElement K(double tau);
  static GroupElement Heis(double u, double v, double w);

  // Same family with all parameters scaled; the curve through the identity
  // used by derivative_check.
  GroupElement scaled(double c) const;
};

// The group element applied to f, evaluated at (t, x):
//   N(tau):    f(t - tau, x)
//   A(tau):    e^{r tau} f(e^{-2 tau} t, e^{-tau} x)
//   Nbar(tau): (1 - tau t)^r e^{-s tau x^2/(1 - tau t)} f(t/(1-tau t), x/(1-tau t))
//   K(tau):    (cos tau + t sin tau)^r e^{s x^2 sin tau/(cos tau + t sin tau)}
//                f((t cos tau - sin tau)/(cos tau + t sin tau), x/(cos tau + t sin tau))
//   Heis(u,v,w): e^{s(w + uv - 2vx - t v^2)} f(t, x - u + t v)
// Throws std::invalid_argument unless f is non-compact and std::domain_error
// when the chart denominator is not positive.
std::complex<double> group_action(const GroupElement& g, const PictureFunction& f, double t,
                                  double x);

// The half-integral cocycle factor of the element, reported at the fixed
// upper-half-plane probe z = i (principal roots); identically 1 for N and
// the Heisenberg family.
std::complex<double> epsilon_probe(const GroupElement& g);

// Central difference (action(g scaled by +delta) - action(-delta))/(2 delta)
// minus the family's generator applied to f:
//   N -> e_plus, A -> h, Nbar -> e_minus, K -> e_plus - e_minus,
//   Heis(u,v,w) -> (t v - u) f_x + s (w - 2 v x) f.
// Vanishes at O(delta^2) as delta -> 0.
std::complex<double> derivative_check(const GroupElement& direction, const PictureFunction& f,
                                      double t, double x, double delta);

}  // namespace sl2rep
