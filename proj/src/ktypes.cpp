#include "sl2rep/ktypes.hpp"

#include <cmath>
#include <stdexcept>

namespace sl2rep {

mpq_class ktype_lambda(const KTypeIndex& idx) {
  mpq_class lambda(idx.l * (idx.l - 1), 2);
  lambda.canonicalize();
  return lambda;
}

namespace {

// sqrt in Z if exact.
bool exact_sqrt(const mpz_class& n, mpz_class& root) {
  if (n < 0) return false;
  root = sqrt(n);
  return root * root == n;
}

}  // namespace

std::set<int> lambda_to_l(const mpq_class& lambda) {
  if (lambda < 0) throw std::invalid_argument("lambda_to_l: lambda must be >= 0");
  if (lambda == 0) return {0, 1};
  mpq_class disc = 1 + 8 * lambda;
  if (disc.get_den() != 1) return {};
  mpz_class root;
  if (!exact_sqrt(disc.get_num(), root)) return {};
  if (root % 2 == 0) return {};
  mpz_class l2 = (1 + root) / 2;
  if (!l2.fits_sint_p()) return {};
  return {static_cast<int>(l2.get_si())};
}

IndicialRoots indicial_roots(const mpq_class& lambda) {
  if (lambda < 0) throw std::invalid_argument("indicial_roots: lambda must be >= 0");
  mpq_class disc = 1 + 8 * lambda;
  IndicialRoots out;
  mpz_class rn, rd;
  if (exact_sqrt(disc.get_num(), rn) && exact_sqrt(disc.get_den(), rd)) {
    mpq_class root{rn, rd};
    root.canonicalize();
    out.exact = true;
    out.l1_exact = (1 - root) / 2;
    out.l2_exact = (1 + root) / 2;
    out.l1 = out.l1_exact.get_d();
    out.l2 = out.l2_exact.get_d();
  } else {
    double root = std::sqrt(disc.get_d());
    out.l1 = (1 - root) / 2;
    out.l2 = (1 + root) / 2;
  }
  return out;
}

std::vector<int> weights(int q, int l, int m_min, int m_max) {
  if (m_min > m_max) throw std::invalid_argument("weights: empty window");
  std::vector<int> out;
  int target = 2 * l + q;
  // First admissible m >= m_min.
  int delta = ((target - m_min) % 4 + 4) % 4;
  for (int m = m_min + delta; m <= m_max; m += 4) out.push_back(m);
  return out;
}

std::complex<double> unit_power(int k) {
  switch ((k % 4 + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

PictureFunction PictureFunction::ktype(const KTypeIndex& idx, const mpq_class& r,
                                       const GaussianRational& s) {
  return ktype_combination({{std::complex<double>(1, 0), idx}}, r, s);
}

PictureFunction PictureFunction::ktype_combination(std::vector<Term> terms, const mpq_class& r,
                                                   const GaussianRational& s) {
  if (terms.empty())
    throw std::invalid_argument("PictureFunction: empty K-type combination");
  for (const Term& term : terms) {
    if (!admissible(term.index))
      throw std::invalid_argument("PictureFunction: inadmissible K-type index");
    if (term.index.q != terms.front().index.q)
      throw std::invalid_argument("PictureFunction: mixed parity classes");
  }
  PictureFunction out;
  out.picture_ = Picture::kCompact;
  out.q_ = terms.front().index.q;
  out.r_ = r;
  out.s_ = s;
  out.terms_ = std::move(terms);
  return out;
}

PictureFunction PictureFunction::custom(Picture pic, int q, const mpq_class& r,
                                        const GaussianRational& s, Evaluator fn) {
  PictureFunction out;
  out.picture_ = pic;
  out.q_ = q;
  out.r_ = r;
  out.s_ = s;
  out.fn_ = std::move(fn);
  return out;
}

std::complex<double> PictureFunction::eval(double a, double b) const {
  if (!terms_.empty()) {
    std::complex<double> sum = 0;
    for (const Term& term : terms_) sum += term.coeff * psi_jet(term.index, a, b).value;
    return sum;
  }
  return fn_(a, b);
}

PictureFunction to_noncompact(const PictureFunction& F) {
  if (F.picture() != PictureFunction::Picture::kCompact)
    throw std::invalid_argument("to_noncompact: input must be compact-picture");
  double rd = F.r().get_d();
  std::complex<double> sc(F.s().re_double(), F.s().im_double());
  PictureFunction src = F;
  auto fn = [src, rd, sc](double t, double x) {
    double w = 1 + t * t;
    double theta = std::atan(t);
    double y = x / std::sqrt(w);
    std::complex<double> pref = std::pow(w, rd / 2) * std::exp(sc * (t * x * x / w));
    return pref * src.eval(theta, y);
  };
  return PictureFunction::custom(PictureFunction::Picture::kNoncompact, F.q(), F.r(), F.s(), fn);
}

PictureFunction to_compact(const PictureFunction& f) {
  if (f.picture() != PictureFunction::Picture::kNoncompact)
    throw std::invalid_argument("to_compact: input must be noncompact-picture");
  double rd = f.r().get_d();
  std::complex<double> sc(f.s().re_double(), f.s().im_double());
  int q = f.q();
  PictureFunction src = f;
  auto fn = [src, rd, sc, q](double theta, double y) {
    // Reduce to the principal strip; the parity rule supplies the phase.
    double j = std::nearbyint(theta / M_PI);
    double th = theta - j * M_PI;
    if (std::fabs(th) > M_PI_2 - 1e-9)
      throw std::domain_error("to_compact: evaluation at a tan pole");
    int ji = static_cast<int>(j);
    double yy = ji % 2 == 0 ? y : -y;
    double tn = std::tan(th);
    double cs = std::cos(th);
    std::complex<double> pref =
        unit_power(-ji * q) * std::pow(cs, rd) * std::exp(-sc * (yy * yy * tn));
    return pref * src.eval(tn, yy / cs);
  };
  return PictureFunction::custom(PictureFunction::Picture::kCompact, q, f.r(), f.s(), fn);
}

std::complex<double> parity_residual(const PictureFunction& F, double theta, double y, int j) {
  if (F.picture() != PictureFunction::Picture::kCompact)
    throw std::invalid_argument("parity_residual: input must be compact-picture");
  double yy = j % 2 == 0 ? y : -y;
  return F.eval(theta + j * M_PI, yy) - unit_power(-j * F.q()) * F.eval(theta, y);
}

std::complex<double> cond_D_residual(const KTypeIndex& idx, double y) {
  PsiJet jet = psi_jet(idx, 0, y);
  double z = y * y;
  double lam = ktype_lambda(idx).get_d();
  return z * jet.d_yy - (2 * lam - idx.m * z + z * z) * jet.value;
}

double cond_D_scale(const KTypeIndex& idx, double y) {
  PsiJet jet = psi_jet(idx, 0, y);
  double z = y * y;
  double lam = ktype_lambda(idx).get_d();
  return std::max(
      {1.0, std::abs(z * jet.d_yy), std::abs((2 * lam - idx.m * z + z * z) * jet.value)});
}

std::complex<double> schrodinger_residual(const PictureFunction& f, const mpq_class& lambda,
                                          double t, double x, double h) {
  if (f.picture() != PictureFunction::Picture::kNoncompact)
    throw std::invalid_argument("schrodinger_residual: input must be noncompact-picture");
  if (std::fabs(x) <= h)
    throw std::invalid_argument("schrodinger_residual: x too close to the singular line");
  std::complex<double> fc = f.eval(t, x);
  std::complex<double> ft = (f.eval(t + h, x) - f.eval(t - h, x)) / (2 * h);
  std::complex<double> fxx = (f.eval(t, x + h) - 2.0 * fc + f.eval(t, x - h)) / (h * h);
  return std::complex<double>(0, 2) * ft + fxx - 2 * lambda.get_d() / (x * x) * fc;
}

double schrodinger_scale(const PictureFunction& f, double t, double x, double h) {
  double m = 1;
  for (std::complex<double> v : {f.eval(t, x), f.eval(t + h, x), f.eval(t - h, x),
                                 f.eval(t, x + h), f.eval(t, x - h)})
    m = std::max(m, std::abs(v));
  return m;
}

}  // namespace sl2rep
