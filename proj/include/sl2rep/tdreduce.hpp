// Reduction machinery for time-dependent potentials
// V(t,x) = g2(t) x^2 + g1(t) x + g0(t) + lambda/x^2: the auxiliary ODE and
// chi-system, the three symmetry generators L_j, the change of variables
// with its multiplier, and FD residual certification of transformed
// solutions.
#pragma once

#include <gmpxx.h>

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace sl2rep {

// Real polynomial in t, coefficients constant-first.
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double t) const;
  double derivative(double t) const;
  bool is_zero() const;
  std::string str() const;
};

struct PotentialSpec {
  Polynomial g2, g1, g0;
  mpq_class lambda = 0;  // exact rational, >= 0
  double T = 1.0;        // half-width of the requested time interval

  static PotentialSpec zero(double T = 1.0);
  static PotentialSpec harmonic(double T = 1.4);
  // Text form "g2=<poly>; g1=<poly>; g0=<poly>; lambda=<rational>; T=<real>"
  // where <poly> is a comma-separated coefficient list (constant first) or
  // one of the presets zero, harmonic (= 1/2), constant(<c>).  Missing
  // fields default to zero (T to 1).
  static PotentialSpec parse(const std::string& text);
  std::string str() const;

  // Enforces lambda >= 0, T > 0, and lambda * g1 == 0; throws
  // std::invalid_argument on violation.
  void validate() const;
  double potential(double t, double x) const;
};

// Samples of the auxiliary system on the uniform grid t_k = k*h,
// k in [-n_minus, n_plus], truncated to the maximal subinterval around 0
// on which |chi2| >= 1e-3.  chi2 solves chi'' + 2 g2 chi = 0 with
// chi2(0) = 1, chi2'(0) = 0; chi1 = chi2 * Theta has Wronskian
// chi1' chi2 - chi1 chi2' = +1 (the recorded convention).  B_j is complex
// and x-dependent, so its t-sampled ingredients are stored and the value
// assembled on demand by B().
struct ChiSystem {
  PotentialSpec spec;
  double h = 0;
  int n_minus = 0, n_plus = 0;
  std::vector<double> t;  // node positions, size n_minus + n_plus + 1

  std::vector<double> chi1, chi2, chi1p, chi2p;
  std::vector<double> Theta;  // integral of 1/chi2^2 from 0
  std::vector<double> C1, C2;
  std::vector<double> Pc2;    // integral of C2/chi2^2 from 0
  std::vector<double> A1, A2, A3;
  std::vector<double> A1p, A2p, A3p;  // analytic derivatives
  std::vector<double> phi1, phi2, phi3;
  std::vector<double> phi1p, phi2p, phi3p;
  std::vector<double> phi1pp, phi2pp, phi3pp;  // via the ODE, not FD
  std::vector<double> D1, D2, D3;
  std::vector<double> Pcorr;  // integral of g0 + C2^2/(2 chi2^2) from 0

  int wronskian_sign = +1;
  bool truncated = false;
  std::string truncation_note;
  double richardson_error = 0;  // step-halving estimate of the chi2 error

  double valid_min() const { return t.front(); }
  double valid_max() const { return t.back(); }

  // Cubic interpolation of a sampled field at tt; throws std::domain_error
  // outside the valid interval.
  double eval(const std::vector<double>& field, double tt) const;

  // B_j(t,x) = -i/4 phi_j'' x^2 - i A_j' x + 1/4 phi_j' + i g0 phi_j + i D_j.
  std::complex<double> B(int j, double tt, double x) const;
};

// Integrates the auxiliary ODE (4th order, with a step-halving error
// estimate recorded) and fills every derived field by prefix quadrature.
// Throws std::invalid_argument on a bad spec or step, std::domain_error
// when the valid interval is shorter than 0.2.
ChiSystem solve_chi(const PotentialSpec& spec, double step = 1e-3);

struct ChiIdentityResiduals {
  double a_identity = 0;    // A1 = Theta^2 A2 + chi2 Theta Pc2
  double phi_identity = 0;  // phi1' = Theta^2 phi2' + 2 Theta
};
ChiIdentityResiduals chi_identities_residual(const ChiSystem& cs);

// One symmetry generator L_j = eps_j (phi_j dt + (phi_j'/2 x + A_j) dx + B_j).
// The signs eps = (+1, -1, -1) are the unique choice (up to an overall
// flip) satisfying [L3,L1] = -2 L1, [L3,L2] = 2 L2, [L2,L1] = L3; for the
// zero potential they reduce L1, L2, L3 to the noncompact e-, e+, h at
// r = -1/2, s = i/2.
struct LOperator {
  int j = 1;
  int epsilon = 1;
  const ChiSystem* cs = nullptr;

  double ct(double t) const;                          // coefficient of dt
  double cx(double t, double x) const;                // coefficient of dx
  std::complex<double> c0(double t, double x) const;  // multiplication term

  // L_j f at (t,x) with first derivatives by central differences of step
  // delta.
  std::complex<double> apply(
      const std::function<std::complex<double>(double, double)>& f, double t,
      double x, double delta) const;
};

std::array<LOperator, 3> generators_L(const ChiSystem& cs, const PotentialSpec& spec);

// Max over probes and the three bracket relations of the
// Richardson-extrapolated defect, relative to max(1, |L_j f|) at the probe.
double bracket_residual_L(const ChiSystem& cs, const PotentialSpec& spec,
                          const std::function<std::complex<double>(double, double)>& f,
                          const std::vector<std::pair<double, double>>& probes,
                          double delta = 1e-2);

// (Theta(t), x/chi2(t) + Pc2(t)); Theta is strictly increasing.
std::pair<double, double> gamma_map(const ChiSystem& cs, double t, double x);

struct GridFunction {
  std::vector<double> ts, xs;
  std::vector<std::complex<double>> samples;  // row-major, index it*xs.size()+ix
  double h_t = 0, h_x = 0;

  std::complex<double> at(std::size_t it, std::size_t ix) const {
    return samples[it * xs.size() + ix];
  }
};

// kVerbatim implements the displayed multiplier
//   exp(int_0^t B2(u,x)/chi2^2 + ((phi2'(u) x / 2 + A2(u))/chi2^2)^2 du)
// with the outer x captured in the integrand; kCorrected uses the
// PDE-derived multiplier
//   chi2^{-1/2} exp(i/2 (chi2'/chi2) x^2 - i (C2/chi2) x
//                   - i int_0^t (g0 + C2^2/(2 chi2^2)) du),
// which intertwines exactly.  The td_residual harness adjudicates.
enum class MultiplierMode { kVerbatim, kCorrected };

// f-tilde(t,x) = multiplier(t,x) * f(gamma(t,x)) sampled on the requested
// rectangle; throws std::domain_error when the t-range leaves the valid
// interval.
GridFunction transform_solution(
    const ChiSystem& cs, const std::function<std::complex<double>(double, double)>& f,
    double t_lo, double t_hi, std::size_t nt, double x_lo, double x_hi,
    std::size_t nx, MultiplierMode mode = MultiplierMode::kVerbatim);

struct ResidualProbe {
  double t = 0, x = 0, residual = 0;
};

struct TdResidualReport {
  double max_residual = 0;
  std::vector<ResidualProbe> profile;
  std::string verdict;  // "PASS" or "MULTIPLIER-DISCREPANCY"
};

// Richardson-extrapolated relative residual of
// 2i dt f + dxx f - 2 (g2 x^2 + g1 x + g0 + lambda/x^2) f at the grid nodes
// nearest the probes.  Probes must keep a two-node margin and, when
// lambda != 0, satisfy |x| >= 0.1.
TdResidualReport td_residual(const GridFunction& ft, const PotentialSpec& spec,
                             const std::vector<std::pair<double, double>>& probes,
                             double tol = 1e-5);

}  // namespace sl2rep
