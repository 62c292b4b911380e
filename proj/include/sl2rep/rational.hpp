// Exact coefficient arithmetic: Gaussian rationals and polynomials in the
// commuting parameters r, s, lambda, u, v, w.
#pragma once

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <map>
#include <string>

namespace sl2rep {

// Element of Q(i), exact.
struct GaussianRational {
  mpq_class re, im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(long n) : re(n), im(0) {}
  GaussianRational(const mpq_class& r) : re(r), im(0) { re.canonicalize(); }
  GaussianRational(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }

  static GaussianRational i() { return GaussianRational(0, 1); }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  GaussianRational conj() const { return {re, -im}; }
  mpq_class norm() const { return re * re + im * im; }

  // Multiplicative inverse; throws std::domain_error on zero.
  GaussianRational inverse() const;

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  double re_double() const { return re.get_d(); }
  double im_double() const { return im.get_d(); }

  // Rendered in the operator-expression grammar, e.g. "3/2", "i", "1/2*i",
  // "(1+2*i)". Products of this string with further factors re-parse.
  std::string str() const;
};

// Indices of the parameter indeterminates.
enum Param : std::size_t { PR = 0, PS = 1, PLAMBDA = 2, PU = 3, PV = 4, PW = 5 };
inline constexpr std::size_t kNumParams = 6;
extern const char* const kParamNames[kNumParams];

// Polynomial in the six commuting parameters over Q(i).  Stored sparsely;
// no zero coefficients are kept, so equality is map equality.
struct ParamPoly {
  using Expo = std::array<int, kNumParams>;
  std::map<Expo, GaussianRational> terms;

  ParamPoly() = default;
  ParamPoly(const GaussianRational& c);
  ParamPoly(long n) : ParamPoly(GaussianRational(n)) {}

  static ParamPoly param(Param p);

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const;
  // Constant term (zero if absent).
  GaussianRational constant_value() const;

  ParamPoly& operator+=(const ParamPoly& o);
  ParamPoly& operator-=(const ParamPoly& o);
  ParamPoly operator*(const ParamPoly& o) const;
  ParamPoly& operator*=(const ParamPoly& o) { return *this = *this * o; }
  ParamPoly operator*(const GaussianRational& c) const;

  friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
  friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
  friend ParamPoly operator-(const ParamPoly& a) { return a * GaussianRational(-1); }
  friend bool operator==(const ParamPoly& a, const ParamPoly& b) { return a.terms == b.terms; }
  friend bool operator!=(const ParamPoly& a, const ParamPoly& b) { return !(a == b); }

  // Substitutes an exact value for one parameter.
  ParamPoly substitute(Param p, const GaussianRational& value) const;

  // Numeric evaluation with complex parameter values (pairs of doubles).
  void eval(const std::array<double, 2 * kNumParams>& vals, double& out_re, double& out_im) const;

  std::string str() const;

 private:
  void insert_term(const Expo& e, const GaussianRational& c);
};

}  // namespace sl2rep
