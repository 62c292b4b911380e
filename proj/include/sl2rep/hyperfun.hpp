// Confluent hypergeometric function of the first kind by direct series, with
// truncation/conditioning estimates, exact-rational Pochhammer derivatives,
// contiguous-relation residuals, and closed-form jets of the K-type basis
// functions.
#pragma once

#include <complex>
#include <string>

#include "sl2rep/ktype_index.hpp"

namespace sl2rep {

struct KummerEval {
  std::complex<double> value;
  double abs_error_estimate = 0;  // tail majorant of the truncated series
  int terms_used = 0;
  double condition_estimate = 1;  // sum of |terms| / |sum|
};

// 1F1(a,b,z) summed term by term, term_{n+1} = term_n (a+n) z/((b+n)(n+1)),
// stopping after three consecutive terms below 2^-53 of the partial sum or
// on polynomial termination.  Uses compensated summation; falls back to
// double-double arithmetic when condition_estimate exceeds 1e8 and throws
// std::domain_error if even that tier stays above the threshold.  The env
// var SL2REP_PRECISION in {double, dd} pins the tier.
// Throws std::invalid_argument when b is zero or a negative integer and
// std::runtime_error past 10000 terms.
KummerEval kummer_m(double a, double b, double z);

// n-th derivative ((a)_n/(b)_n) 1F1(a+n,b+n,z); the Pochhammer ratio is
// computed in exact rational arithmetic before conversion.
KummerEval kummer_m_deriv(double a, double b, double z, int n);

enum class Contiguous { U1, U2, U3, U4 };

// |LHS| of the named contiguous relation at (a,b,z); the relations read
//   U1: b F(a,b) - b F(a-1,b) - z F(a,b+1) = 0
//   U2: b(1-b+z) F(a,b) + b(b-1) F(a-1,b-1) - a z F(a+1,b+1) = 0
//   U3: (a-1+z) F(a,b) + (b-a) F(a-1,b) + (1-b) F(a,b-1) = 0
//   U4: (a-b+1) F(a,b) - a F(a+1,b) + (b-1) F(a,b-1) = 0
// with the argument z suppressed.
double contiguous_residual(Contiguous rel, double a, double b, double z);
// Largest magnitude among the relation's three summands, for relative error.
double contiguous_scale(Contiguous rel, double a, double b, double z);

struct PsiJet {
  KTypeIndex index;
  double theta = 0, y = 0;
  std::complex<double> value, d_theta, d_y, d_yy;
};

// Jet of e^{-i m theta/2} e^{-y^2/2} y^l 1F1((1+2l-m)/4, l+1/2, y^2) at
// (theta, y); y < 0 uses the parity extension (-1)^l.  d_theta is exactly
// (-i m/2) value; d_y and d_yy come from the product rule with series
// derivatives, arranged so y = 0 evaluates without indeterminate forms.
// Throws std::invalid_argument on an inadmissible index.
PsiJet psi_jet(const KTypeIndex& idx, double theta, double y);

}  // namespace sl2rep
