// Admissible K-type lattice, eigenvalue/degree translation, compact and
// non-compact picture function models with their intertwining transforms,
// parity checks, and PDE residual certification of closed-form solutions.
#pragma once

#include <gmpxx.h>

#include <complex>
#include <functional>
#include <set>
#include <vector>

#include "sl2rep/hyperfun.hpp"
#include "sl2rep/ktype_index.hpp"
#include "sl2rep/rational.hpp"

namespace sl2rep {

// Casimir-normalized eigenvalue l(l-1)/2 of the index.
mpq_class ktype_lambda(const KTypeIndex& idx);

// Radial degrees compatible with the eigenvalue: {l} when 1+8*lambda is an
// odd perfect square and lambda > 0, {0,1} when lambda = 0, empty otherwise.
// Throws std::invalid_argument for negative lambda.
std::set<int> lambda_to_l(const mpq_class& lambda);

struct IndicialRoots {
  double l1 = 0, l2 = 0;  // (1 -+ sqrt(1+8 lambda))/2, l1 <= l2
  bool exact = false;     // roots are rational (1+8 lambda a rational square)
  mpq_class l1_exact, l2_exact;
};

// Frobenius exponents at y = 0 of the radial equation.
IndicialRoots indicial_roots(const mpq_class& lambda);

// Admissible weights m = 2l + q (mod 4) inside [m_min, m_max], ascending.
std::vector<int> weights(int q, int l, int m_min, int m_max);

// A function in one of the two picture models, carrying its character
// parameters.  Closed-form instances are linear combinations of K-types
// (compact picture); arbitrary evaluators cover wrapped transforms and
// synthetic probes.
class PictureFunction {
 public:
  enum class Picture { kCompact, kNoncompact };

  struct Term {
    std::complex<double> coeff;
    KTypeIndex index;
  };

  using Evaluator = std::function<std::complex<double>(double, double)>;

  // Single K-type or combination; compact picture; q taken from the first
  // index, all indices must share it and be admissible.
  static PictureFunction ktype(const KTypeIndex& idx, const mpq_class& r,
                               const GaussianRational& s);
  static PictureFunction ktype_combination(std::vector<Term> terms, const mpq_class& r,
                                           const GaussianRational& s);
  // Arbitrary evaluator with declared picture and parameters.
  static PictureFunction custom(Picture pic, int q, const mpq_class& r, const GaussianRational& s,
                                Evaluator fn);

  Picture picture() const { return picture_; }
  int q() const { return q_; }
  const mpq_class& r() const { return r_; }
  const GaussianRational& s() const { return s_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool closed_form() const { return !terms_.empty(); }

  // Evaluates at (theta, y) in the compact picture, (t, x) in the other.
  std::complex<double> eval(double a, double b) const;

 private:
  PictureFunction() = default;
  Picture picture_ = Picture::kCompact;
  int q_ = 0;
  mpq_class r_;
  GaussianRational s_;
  std::vector<Term> terms_;
  Evaluator fn_;
};

// f(t,x) = (1+t^2)^{r/2} e^{s t x^2/(1+t^2)} F(arctan t, x (1+t^2)^{-1/2}).
// Defined for all (t,x).  Throws std::invalid_argument unless F is compact.
PictureFunction to_noncompact(const PictureFunction& F);

// F(theta,y) = (cos theta)^r e^{-s y^2 tan theta} f(tan theta, y sec theta)
// on |theta| < pi/2, extended by F(theta'+j pi, y) = i^{-jq} F(theta',
// (-1)^j y); evaluation at odd multiples of pi/2 throws std::domain_error.
// Throws std::invalid_argument unless f is noncompact.
PictureFunction to_compact(const PictureFunction& f);

// F(theta + j pi, (-1)^j y) - i^{-jq} F(theta, y); vanishes for admissible
// closed forms.
std::complex<double> parity_residual(const PictureFunction& F, double theta, double y, int j);

// y^2 Psi_yy - (2 lambda - m y^2 + y^4) Psi via exact jets, and the matching
// magnitude scale max(1, |terms|).
std::complex<double> cond_D_residual(const KTypeIndex& idx, double y);
double cond_D_scale(const KTypeIndex& idx, double y);

// Central-difference residual of 2i f_t + f_xx - 2 lambda x^{-2} f on the
// five-point stencil of spacing h; throws std::invalid_argument when |x| is
// within h of 0.
std::complex<double> schrodinger_residual(const PictureFunction& f, const mpq_class& lambda,
                                          double t, double x, double h);
// max(1, max |f| over the stencil), the scale for relative residuals.
double schrodinger_scale(const PictureFunction& f, double t, double x, double h);

inline constexpr double kDefaultFdStep = 1e-3;

// i^k for any integer k.
std::complex<double> unit_power(int k);

}  // namespace sl2rep
