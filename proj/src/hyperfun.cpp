#include "sl2rep/hyperfun.hpp"

#include <gmpxx.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace sl2rep {

namespace {

constexpr double kEps = 0x1p-53;
constexpr double kConditionLimit = 1e8;
constexpr int kMaxTerms = 10000;

bool nonpositive_integer(double v) { return v <= 0 && v == std::floor(v); }

// Error-free double-double arithmetic, enough for one guarded summation.
struct DD {
  double hi = 0, lo = 0;
};

DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

DD dd_add(const DD& a, const DD& b) {
  DD s = two_sum(a.hi, b.hi);
  double lo = s.lo + a.lo + b.lo;
  DD out = two_sum(s.hi, lo);
  return out;
}

DD dd_mul_d(const DD& a, double b) {
  double p = a.hi * b;
  double e = std::fma(a.hi, b, -p);
  double lo = e + a.lo * b;
  return two_sum(p, lo);
}

DD dd_div_d(const DD& a, double b) {
  double q1 = a.hi / b;
  double r = std::fma(-q1, b, a.hi) + a.lo;
  double q2 = r / b;
  return two_sum(q1, q2);
}

enum class Tier { kDouble, kDD };

Tier forced_tier(bool& forced) {
  forced = false;
  const char* env = std::getenv("SL2REP_PRECISION");
  if (env == nullptr) return Tier::kDouble;
  if (std::strcmp(env, "dd") == 0) {
    forced = true;
    return Tier::kDD;
  }
  if (std::strcmp(env, "double") == 0) {
    forced = true;
    return Tier::kDouble;
  }
  return Tier::kDouble;
}

KummerEval sum_series(double a, double b, double z, Tier tier) {
  // Accumulators: plain Neumaier pair for the double tier, double-double
  // otherwise.  The term itself is carried in double-double in both tiers
  // so the recurrence stays clean.
  DD term{1.0, 0.0};
  DD sum{0.0, 0.0};
  double comp = 0;
  double abs_sum = 0;
  int consecutive = 0;
  KummerEval out;

  for (int n = 0;; ++n) {
    if (n >= kMaxTerms) throw std::runtime_error("kummer_m: series did not converge");
    if (tier == Tier::kDouble) {
      double t = sum.hi + term.hi;
      if (std::fabs(sum.hi) >= std::fabs(term.hi))
        comp += (sum.hi - t) + term.hi;
      else
        comp += (term.hi - t) + sum.hi;
      sum.hi = t;
    } else {
      sum = dd_add(sum, term);
    }
    abs_sum += std::fabs(term.hi);
    out.terms_used = n + 1;

    double partial = tier == Tier::kDouble ? sum.hi + comp : sum.hi;
    if (std::fabs(term.hi) <= kEps * std::fabs(partial))
      ++consecutive;
    else
      consecutive = 0;

    DD next = dd_div_d(dd_mul_d(dd_mul_d(term, a + n), z), (b + n) * (n + 1));
    if (next.hi == 0 && next.lo == 0) {
      out.abs_error_estimate = 0;
      break;
    }
    // Ratio bound for the tail majorant past the next term.
    double rho = std::fabs((a + n + 1) * z / ((b + n + 1) * (n + 2)));
    if (consecutive >= 3 && rho < 0.9) {
      out.abs_error_estimate = std::fabs(next.hi) / (1 - rho);
      break;
    }
    term = next;
  }

  double value = tier == Tier::kDouble ? sum.hi + comp : sum.hi + sum.lo;
  out.value = value;
  out.condition_estimate =
      std::fabs(value) > 0 ? std::max(1.0, abs_sum / std::fabs(value))
                           : std::numeric_limits<double>::infinity();
  return out;
}

// Terminating series (a a nonpositive integer) summed in exact rational
// arithmetic: polynomial cases are the cancellation-prone ones, and the exact
// sum has no precision loss even at a root of the polynomial.
KummerEval sum_polynomial_exact(double a, double b, double z) {
  int len = 1 - static_cast<int>(a);
  if (len > kMaxTerms) throw std::runtime_error("kummer_m: series did not converge");
  mpq_class qb(b), qz(z);
  mpq_class term(1), sum(0), abs_sum(0);
  KummerEval out;
  for (int n = 0; n < len; ++n) {
    sum += term;
    abs_sum += abs(term);
    out.terms_used = n + 1;
    term *= (mpq_class(a) + n) * qz;
    term /= (qb + n) * (n + 1);
    if (term == 0) break;
  }
  out.value = sum.get_d();
  out.abs_error_estimate = 0;
  out.condition_estimate = sum != 0 ? std::max(1.0, mpq_class(abs_sum / abs(sum)).get_d())
                                    : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace

KummerEval kummer_m(double a, double b, double z) {
  if (nonpositive_integer(b))
    throw std::invalid_argument("kummer_m: b must not be zero or a negative integer");
  if (nonpositive_integer(a)) return sum_polynomial_exact(a, b, z);
  if (nonpositive_integer(b - a)) {
    // Kummer's transformation M(a,b,z) = e^z M(b-a,b,-z) turns this case
    // into a terminating series; the direct series may cancel to an exact
    // zero here (e.g. a=1/2, b=-1/2, z=1/2) and never resolve it.
    KummerEval out = sum_polynomial_exact(b - a, b, -z);
    out.value *= std::exp(z);
    out.abs_error_estimate = 2 * kEps * std::abs(out.value);
    return out;
  }
  bool forced = false;
  Tier tier = forced_tier(forced);
  KummerEval out = sum_series(a, b, z, tier);
  if (out.condition_estimate > kConditionLimit) {
    if (!forced && tier == Tier::kDouble) {
      out = sum_series(a, b, z, Tier::kDD);
    }
    if (out.condition_estimate > kConditionLimit)
      throw std::domain_error("kummer_m: catastrophic cancellation, condition estimate " +
                              std::to_string(out.condition_estimate));
  }
  return out;
}

KummerEval kummer_m_deriv(double a, double b, double z, int n) {
  if (n < 0) throw std::invalid_argument("kummer_m_deriv: order must be >= 0");
  if (n == 0) return kummer_m(a, b, z);
  // (a)_n/(b)_n exactly; doubles are exact binary rationals.
  mpq_class num(1), den(1);
  mpq_class qa(a), qb(b);
  for (int k = 0; k < n; ++k) {
    num *= qa + k;
    den *= qb + k;
  }
  if (den == 0) throw std::invalid_argument("kummer_m_deriv: shifted b hits a pole");
  mpq_class ratio = num / den;
  double scale = ratio.get_d();
  KummerEval inner = kummer_m(a + n, b + n, z);
  KummerEval out = inner;
  out.value *= scale;
  out.abs_error_estimate *= std::fabs(scale);
  return out;
}

namespace {

struct RelationTerms {
  std::complex<double> t1, t2, t3;
};

RelationTerms relation_terms(Contiguous rel, double a, double b, double z) {
  auto f = [z](double aa, double bb) { return kummer_m(aa, bb, z).value; };
  switch (rel) {
    case Contiguous::U1:
      return {b * f(a, b), -b * f(a - 1, b), -z * f(a, b + 1)};
    case Contiguous::U2:
      return {b * (1 - b + z) * f(a, b), b * (b - 1) * f(a - 1, b - 1), -a * z * f(a + 1, b + 1)};
    case Contiguous::U3:
      return {(a - 1 + z) * f(a, b), (b - a) * f(a - 1, b), (1 - b) * f(a, b - 1)};
    case Contiguous::U4:
      return {(a - b + 1) * f(a, b), -a * f(a + 1, b), (b - 1) * f(a, b - 1)};
  }
  throw std::invalid_argument("contiguous_residual: unknown relation");
}

}  // namespace

double contiguous_residual(Contiguous rel, double a, double b, double z) {
  RelationTerms t = relation_terms(rel, a, b, z);
  return std::abs(t.t1 + t.t2 + t.t3);
}

double contiguous_scale(Contiguous rel, double a, double b, double z) {
  RelationTerms t = relation_terms(rel, a, b, z);
  return std::max({std::abs(t.t1), std::abs(t.t2), std::abs(t.t3)});
}

namespace {

double powi(double y, int n) {
  double out = 1;
  for (int k = 0; k < n; ++k) out *= y;
  return out;
}

}  // namespace

PsiJet psi_jet(const KTypeIndex& idx, double theta, double y) {
  if (!admissible(idx)) throw std::invalid_argument("psi_jet: inadmissible K-type index");
  const int l = idx.l;
  const double a = (1.0 + 2 * l - idx.m) / 4.0;
  const double b = l + 0.5;
  const double z = y * y;

  const double m0 = kummer_m(a, b, z).value.real();
  const double m1 = kummer_m_deriv(a, b, z, 1).value.real();
  const double m2 = kummer_m_deriv(a, b, z, 2).value.real();

  // Radial part f = e^{-y^2/2} g with g = y^l M(y^2); the guards keep every
  // power of y nonnegative so y = 0 needs no special case.
  const double yl = powi(y, l);
  const double g = yl * m0;
  const double g1 = (l > 0 ? l * powi(y, l - 1) * m0 : 0.0) + 2 * powi(y, l + 1) * m1;
  const double g2 = (l > 1 ? l * (l - 1) * powi(y, l - 2) * m0 : 0.0) + (4 * l + 2) * yl * m1 +
                    4 * powi(y, l + 2) * m2;
  const double eg = std::exp(-z / 2);
  const double f = eg * g;
  const double f1 = eg * (g1 - y * g);
  const double f2 = eg * (g2 - 2 * y * g1 + (z - 1) * g);

  const std::complex<double> phase = std::polar(1.0, -idx.m * theta / 2);
  PsiJet jet;
  jet.index = idx;
  jet.theta = theta;
  jet.y = y;
  jet.value = phase * f;
  jet.d_theta = std::complex<double>(0, -idx.m / 2.0) * jet.value;
  jet.d_y = phase * f1;
  jet.d_yy = phase * f2;
  return jet;
}

}  // namespace sl2rep
