// Noncommutative algebra of differential operators in (t, x): polynomial in
// t, Laurent in x, derivatives dt and dx, coefficients in ParamPoly.  Every
// operator is kept in normal order (coefficients left, derivatives right),
// so equality is comparison of canonical term maps.
#pragma once

#include <map>
#include <string>
#include <tuple>

#include "sl2rep/rational.hpp"

namespace sl2rep {

// Normal-ordered monomial t^te x^xe dt^dte dx^dxe.  te, dte, dxe >= 0,
// xe may be negative.  Ordering is lexicographic in (te, xe, dte, dxe).
struct WeylKey {
  int te = 0, xe = 0, dte = 0, dxe = 0;

  friend bool operator==(const WeylKey&, const WeylKey&) = default;
  friend bool operator<(const WeylKey& a, const WeylKey& b) {
    return std::tie(a.te, a.xe, a.dte, a.dxe) < std::tie(b.te, b.xe, b.dte, b.dxe);
  }
};

struct WeylOperator {
  std::map<WeylKey, ParamPoly> terms;

  WeylOperator() = default;

  static WeylOperator zero() { return {}; }
  static WeylOperator constant(const ParamPoly& c) { return monomial(WeylKey{}, c); }
  static WeylOperator monomial(const WeylKey& k, const ParamPoly& c);

  bool is_zero() const { return terms.empty(); }
  std::size_t term_count() const { return terms.size(); }

  WeylOperator& operator+=(const WeylOperator& o);
  WeylOperator& operator-=(const WeylOperator& o);
  WeylOperator operator*(const WeylOperator& o) const;
  WeylOperator operator*(const ParamPoly& c) const;

  friend WeylOperator operator+(WeylOperator a, const WeylOperator& b) { return a += b; }
  friend WeylOperator operator-(WeylOperator a, const WeylOperator& b) { return a -= b; }
  friend WeylOperator operator-(const WeylOperator& a) { return a * ParamPoly(-1); }
  friend bool operator==(const WeylOperator& a, const WeylOperator& b) {
    return a.terms == b.terms;
  }
  friend bool operator!=(const WeylOperator& a, const WeylOperator& b) { return !(a == b); }

  // Substitutes an exact value for one parameter in every coefficient.
  WeylOperator substitute(Param p, const GaussianRational& value) const;

  // Canonical printed form in the operator-expression grammar; re-parses to
  // an equal operator.
  std::string str() const;

  void add_term(const WeylKey& k, const ParamPoly& c);
};

WeylOperator op_mul(const WeylOperator& a, const WeylOperator& b);
// AB - BA.
WeylOperator op_bracket(const WeylOperator& a, const WeylOperator& b);

// Parses the operator-expression grammar:
//   expr   := ('-')? term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' int)?
//   atom   := 't' | 'x' | 'dt' | 'dx' | 'i' | rational | param | '(' expr ')'
// '*' is mandatory; x may carry negative powers, t/dt/dx may not.
// Throws std::invalid_argument with a character position on bad input.
WeylOperator parse_operator(const std::string& text);

struct Sl2Triple {
  WeylOperator h, e_plus, e_minus;
};

// h = -x dx - 2 t dt + r,  e+ = -dt,  e- = t x dx + t^2 dt - (s x^2 + r t),
// with r and s symbolic.
Sl2Triple sl2_generators();

// (t v - u) dx + s (w - 2 v x), coefficients polynomial in the arguments.
WeylOperator heisenberg_generator(const ParamPoly& u, const ParamPoly& v, const ParamPoly& w);
// Fully symbolic u, v, w.
WeylOperator heisenberg_generator();

// (c t - a) x dx + (c t^2 - 2 a t - b) dt + (r a - c s x^2 - r c t) for an
// exact unimodular matrix; throws std::invalid_argument if ad - bc != 1.
WeylOperator gl_action_operator(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                                const mpq_class& d);

struct CasimirPair {
  WeylOperator omega;        // (1/2) h^2 - h + 2 e+ e-
  WeylOperator omega_prime;  // 2 omega - r (r + 2)
};

// Both operators composed from sl2_generators, symbolic in r and s.
CasimirPair casimir();

// 2 i dt + dx^2.
WeylOperator schrodinger_free();

// [box - 2 lambda x^-2, heisenberg_generator] with s = i/2 substituted,
// symbolic in lambda, u, v, w.
WeylOperator heis_commutator_identity();

struct IdentityCheck {
  std::string lhs, rhs;
  bool equal = false;
  std::string difference;  // canonical form of lhs - rhs
};

// Parses both sides and compares canonical forms.
IdentityCheck check_identity(const std::string& lhs, const std::string& rhs);

}  // namespace sl2rep
