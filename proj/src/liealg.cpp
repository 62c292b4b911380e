#include "sl2rep/liealg.hpp"

#include <cmath>
#include <stdexcept>

namespace sl2rep {

namespace {

using cplx = std::complex<double>;

const cplx kI{0, 1};

struct NcJet {
  cplx value, d_t, d_x;
};

// First-order jet of a non-compact picture function by Richardson-
// extrapolated central differences.
NcJet nc_jet(const PictureFunction& f, double t, double x, double h) {
  NcJet out;
  out.value = f.eval(t, x);
  auto dt = [&](double hh) { return (f.eval(t + hh, x) - f.eval(t - hh, x)) / (2 * hh); };
  auto dx = [&](double hh) { return (f.eval(t, x + hh) - f.eval(t, x - hh)) / (2 * hh); };
  out.d_t = (4.0 * dt(h / 2) - dt(h)) / 3.0;
  out.d_x = (4.0 * dx(h / 2) - dx(h)) / 3.0;
  return out;
}

cplx s_of(const PictureFunction& f) {
  return {f.s().re_double(), f.s().im_double()};
}

}  // namespace

const char* generator_name(GeneratorTag gen) {
  switch (gen) {
    case GeneratorTag::kappa: return "kappa";
    case GeneratorTag::eta_plus: return "eta_plus";
    case GeneratorTag::eta_minus: return "eta_minus";
    case GeneratorTag::E_plus: return "E_plus";
    case GeneratorTag::E_minus: return "E_minus";
    case GeneratorTag::omega_dd: return "omega_dd";
    case GeneratorTag::h: return "h";
    case GeneratorTag::e_plus: return "e_plus";
    case GeneratorTag::e_minus: return "e_minus";
  }
  return "unknown";
}

std::complex<double> apply_compact(GeneratorTag gen, const KTypeIndex& idx, double theta,
                                   double y) {
  switch (gen) {
    case GeneratorTag::h:
      return apply_compact(GeneratorTag::eta_plus, idx, theta, y) +
             apply_compact(GeneratorTag::eta_minus, idx, theta, y);
    case GeneratorTag::e_plus:
      return -0.5 * kI *
             (apply_compact(GeneratorTag::eta_plus, idx, theta, y) -
              apply_compact(GeneratorTag::eta_minus, idx, theta, y) -
              apply_compact(GeneratorTag::kappa, idx, theta, y));
    case GeneratorTag::e_minus:
      return -0.5 * kI *
             (apply_compact(GeneratorTag::eta_plus, idx, theta, y) -
              apply_compact(GeneratorTag::eta_minus, idx, theta, y) +
              apply_compact(GeneratorTag::kappa, idx, theta, y));
    default:
      break;
  }
  PsiJet jet = psi_jet(idx, theta, y);
  switch (gen) {
    case GeneratorTag::kappa:
      return kI * jet.d_theta;
    case GeneratorTag::eta_plus:
      return 0.5 * std::polar(1.0, -2 * theta) *
             (-y * jet.d_y - kI * jet.d_theta + (y * y - 0.5) * jet.value);
    case GeneratorTag::eta_minus:
      return 0.5 * std::polar(1.0, 2 * theta) *
             (-y * jet.d_y + kI * jet.d_theta + (-y * y - 0.5) * jet.value);
    case GeneratorTag::E_plus:
      return -std::polar(1.0, -theta) * (jet.d_y - y * jet.value);
    case GeneratorTag::E_minus:
      return -std::polar(1.0, theta) * (jet.d_y + y * jet.value);
    case GeneratorTag::omega_dd:
      return y * y * (2.0 * kI * jet.d_theta - y * y * jet.value + jet.d_yy);
    default:
      throw std::invalid_argument("apply_compact: unsupported generator");
  }
}

std::vector<LadderTerm> ladder_terms(GeneratorTag gen, const KTypeIndex& idx) {
  if (!admissible(idx)) throw std::invalid_argument("ladder_terms: inadmissible index");
  const int q = idx.q, l = idx.l, m = idx.m;
  std::vector<LadderTerm> out;
  auto push = [&out](mpq_class c, KTypeIndex target) {
    c.canonicalize();
    if (c != 0) out.push_back({GaussianRational(c), target});
  };
  switch (gen) {
    case GeneratorTag::kappa:
      push(mpq_class{m, 2}, idx);
      break;
    case GeneratorTag::omega_dd:
      push(mpq_class{l * (l - 1)}, idx);
      break;
    case GeneratorTag::eta_plus:
      push(mpq_class{-(2 * l + 1 + m), 4}, {q, l, m + 4});
      break;
    case GeneratorTag::eta_minus:
      push(mpq_class{-(2 * l + 1 - m), 4}, {q, l, m - 4});
      break;
    case GeneratorTag::E_minus:
      push(mpq_class{(1 + 2 * l - m) * (l - 1), (2 * l - 1) * (2 * l + 1)}, {q, l + 1, m - 2});
      push(mpq_class{-l}, {q, l - 1, m - 2});
      break;
    case GeneratorTag::E_plus:
      push(mpq_class{(1 + 2 * l + m) * (l - 1), 2 * (2 * l - 1)}, {q, l + 1, m + 2});
      push(mpq_class{-l}, {q, l - 1, m + 2});
      break;
    default:
      throw std::invalid_argument("ladder_terms: unsupported generator");
  }
  return out;
}

LadderReport verify_ladder(GeneratorTag gen, const KTypeIndex& idx,
                           const std::vector<std::pair<double, double>>& grid) {
  if (grid.size() < 8)
    throw std::invalid_argument("verify_ladder: grid needs at least 8 points");
  std::vector<LadderTerm> terms = ladder_terms(gen, idx);
  const std::size_t n = grid.size(), nterms = terms.size();

  std::vector<cplx> applied(n), predicted(n);
  std::vector<std::vector<cplx>> targets(nterms, std::vector<cplx>(n));
  for (std::size_t i = 0; i < n; ++i) {
    auto [theta, y] = grid[i];
    applied[i] = apply_compact(gen, idx, theta, y);
    predicted[i] = 0;
    for (std::size_t j = 0; j < nterms; ++j) {
      targets[j][i] = psi_jet(terms[j].target, theta, y).value;
      cplx cj{terms[j].coeff.re_double(), terms[j].coeff.im_double()};
      predicted[i] += cj * targets[j][i];
    }
  }

  double scale = 1, dev_plus = 0, dev_minus = 0;
  for (std::size_t i = 0; i < n; ++i) {
    scale = std::max({scale, std::abs(applied[i]), std::abs(predicted[i])});
    dev_plus = std::max(dev_plus, std::abs(applied[i] - predicted[i]));
    dev_minus = std::max(dev_minus, std::abs(applied[i] + predicted[i]));
  }

  LadderReport rep;
  rep.gen = gen;
  rep.index = idx;
  rep.grid_points = n;
  if (dev_plus <= dev_minus) {
    rep.fitted_sign = 1;
    rep.deviation = dev_plus / scale;
  } else {
    rep.fitted_sign = -1;
    rep.deviation = dev_minus / scale;
  }

  // Least-squares extraction of the measured coefficient on each target.
  if (nterms == 1) {
    cplx gram = 0, rhs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      gram += std::conj(targets[0][i]) * targets[0][i];
      rhs += std::conj(targets[0][i]) * applied[i];
    }
    rep.extracted.push_back({terms[0].target, rhs / gram, terms[0].coeff});
  } else if (nterms == 2) {
    cplx g11 = 0, g12 = 0, g22 = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      g11 += std::conj(targets[0][i]) * targets[0][i];
      g12 += std::conj(targets[0][i]) * targets[1][i];
      g22 += std::conj(targets[1][i]) * targets[1][i];
      b1 += std::conj(targets[0][i]) * applied[i];
      b2 += std::conj(targets[1][i]) * applied[i];
    }
    cplx g21 = std::conj(g12);
    cplx det = g11 * g22 - g12 * g21;
    rep.extracted.push_back({terms[0].target, (g22 * b1 - g12 * b2) / det, terms[0].coeff});
    rep.extracted.push_back({terms[1].target, (g11 * b2 - g21 * b1) / det, terms[1].coeff});
  }
  return rep;
}

std::vector<std::pair<double, double>> ladder_grid(std::size_t n) {
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double a = std::fmod((static_cast<double>(i) + 0.5) * 0.6180339887498949, 1.0);
    double b = std::fmod((static_cast<double>(i) + 0.5) * 0.5545497022963564, 1.0);
    out.emplace_back(-1.2 + 2.4 * a, 0.35 + 2.05 * b);
  }
  return out;
}

std::complex<double> apply_noncompact(GeneratorTag gen, const PictureFunction& f, double t,
                                      double x, double fd_step) {
  if (f.picture() != PictureFunction::Picture::kNoncompact)
    throw std::invalid_argument("apply_noncompact: input must be noncompact-picture");
  NcJet jet = nc_jet(f, t, x, fd_step);
  double rd = f.r().get_d();
  cplx sc = s_of(f);
  cplx ep = -jet.d_t;
  cplx hv = -x * jet.d_x - 2 * t * jet.d_t + rd * jet.value;
  cplx em = t * x * jet.d_x + t * t * jet.d_t - (sc * (x * x) + rd * t) * jet.value;
  switch (gen) {
    case GeneratorTag::e_plus: return ep;
    case GeneratorTag::h: return hv;
    case GeneratorTag::e_minus: return em;
    case GeneratorTag::kappa: return kI * (em - ep);
    case GeneratorTag::eta_plus: return 0.5 * (hv + kI * (ep + em));
    case GeneratorTag::eta_minus: return 0.5 * (hv - kI * (ep + em));
    default:
      throw std::invalid_argument("apply_noncompact: unsupported generator");
  }
}

GroupElement GroupElement::N(double tau) { return {Family::kN, tau, 0, 0, 0}; }
GroupElement GroupElement::A(double tau) { return {Family::kA, tau, 0, 0, 0}; }
GroupElement GroupElement::Nbar(double tau) { return {Family::kNbar, tau, 0, 0, 0}; }
GroupElement GroupElement::K(double tau) { return {Family::kK, tau, 0, 0, 0}; }
GroupElement GroupElement::Heis(double u, double v, double w) {
  return {Family::kHeis, 0, u, v, w};
}

GroupElement GroupElement::scaled(double c) const {
  GroupElement out = *this;
  out.tau *= c;
  out.u *= c;
  out.v *= c;
  out.w *= c;
  return out;
}

std::complex<double> group_action(const GroupElement& g, const PictureFunction& f, double t,
                                  double x) {
  if (f.picture() != PictureFunction::Picture::kNoncompact)
    throw std::invalid_argument("group_action: input must be noncompact-picture");
  double rd = f.r().get_d();
  cplx sc = s_of(f);
  switch (g.family) {
    case GroupElement::Family::kN:
      return f.eval(t - g.tau, x);
    case GroupElement::Family::kA:
      return std::exp(rd * g.tau) * f.eval(std::exp(-2 * g.tau) * t, std::exp(-g.tau) * x);
    case GroupElement::Family::kNbar: {
      double den = 1 - g.tau * t;
      if (den <= 0) throw std::domain_error("group_action: chart violation");
      return std::pow(den, rd) * std::exp(-sc * (g.tau * x * x / den)) *
             f.eval(t / den, x / den);
    }
    case GroupElement::Family::kK: {
      double den = std::cos(g.tau) + t * std::sin(g.tau);
      if (den <= 0) throw std::domain_error("group_action: chart violation");
      return std::pow(den, rd) * std::exp(sc * (x * x * std::sin(g.tau) / den)) *
             f.eval((t * std::cos(g.tau) - std::sin(g.tau)) / den, x / den);
    }
    case GroupElement::Family::kHeis:
      return std::exp(sc * (g.w + g.u * g.v - 2 * g.v * x - t * g.v * g.v)) *
             f.eval(t, x - g.u + t * g.v);
  }
  throw std::invalid_argument("group_action: unknown family");
}

std::complex<double> epsilon_probe(const GroupElement& g) {
  switch (g.family) {
    case GroupElement::Family::kN:
      return {1, 0};
    case GroupElement::Family::kA:
      return {std::exp(-g.tau / 2), 0};
    case GroupElement::Family::kNbar:
      return std::sqrt(cplx{1, g.tau});
    case GroupElement::Family::kK:
      return std::sqrt(cplx{std::cos(g.tau), -std::sin(g.tau)});
    case GroupElement::Family::kHeis:
      return {1, 0};
  }
  return {1, 0};
}

std::complex<double> derivative_check(const GroupElement& direction, const PictureFunction& f,
                                      double t, double x, double delta) {
  cplx plus = group_action(direction.scaled(delta), f, t, x);
  cplx minus = group_action(direction.scaled(-delta), f, t, x);
  cplx fd = (plus - minus) / (2 * delta);
  cplx op;
  switch (direction.family) {
    case GroupElement::Family::kN:
      op = apply_noncompact(GeneratorTag::e_plus, f, t, x);
      break;
    case GroupElement::Family::kA:
      op = apply_noncompact(GeneratorTag::h, f, t, x);
      break;
    case GroupElement::Family::kNbar:
      op = apply_noncompact(GeneratorTag::e_minus, f, t, x);
      break;
    case GroupElement::Family::kK:
      op = apply_noncompact(GeneratorTag::e_plus, f, t, x) -
           apply_noncompact(GeneratorTag::e_minus, f, t, x);
      break;
    case GroupElement::Family::kHeis: {
      NcJet jet = nc_jet(f, t, x, kDefaultFdStep);
      op = (t * direction.v - direction.u) * jet.d_x +
           s_of(f) * (direction.w - 2 * direction.v * x) * jet.value;
      break;
    }
  }
  return fd - op;
}

}  // namespace sl2rep
