// Time-dependent reduction: auxiliary ODE march, chi-system quadrature,
// symmetry generators, change of variables with multiplier, FD residuals.
#include "sl2rep/tdreduce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sl2rep {

namespace {

using cplx = std::complex<double>;

constexpr double kChiFloor = 1e-3;
constexpr double kMinValidLength = 0.2;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Polynomial parse_poly(const std::string& raw) {
  std::string s = trim(raw);
  if (s.empty() || s == "zero") return {};
  if (s == "harmonic") return {{0.5}};
  if (s.rfind("constant(", 0) == 0 && s.back() == ')')
    return {{std::stod(s.substr(9, s.size() - 10))}};
  Polynomial p;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string piece = trim(s.substr(pos, comma == std::string::npos ? comma : comma - pos));
    if (piece.empty()) throw std::invalid_argument("PotentialSpec: empty coefficient");
    std::size_t used = 0;
    p.coeffs.push_back(std::stod(piece, &used));
    if (used != piece.size())
      throw std::invalid_argument("PotentialSpec: bad coefficient '" + piece + "'");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return p;
}

void rk4_step(const Polynomial& g2, double t, double hs, double& c, double& cp) {
  auto acc = [&](double tt, double cc) { return -2.0 * g2(tt) * cc; };
  double k1c = cp, k1p = acc(t, c);
  double k2c = cp + 0.5 * hs * k1p, k2p = acc(t + 0.5 * hs, c + 0.5 * hs * k1c);
  double k3c = cp + 0.5 * hs * k2p, k3p = acc(t + 0.5 * hs, c + 0.5 * hs * k2c);
  double k4c = cp + hs * k3p, k4p = acc(t + hs, c + hs * k3c);
  c += hs / 6 * (k1c + 2 * k2c + 2 * k3c + k4c);
  cp += hs / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
}

struct SideMarch {
  std::vector<double> c, cp;  // index k holds the node at t = dir*k*h
};

// Integrates outward from 0 with substeps h/refine, keeping h-grid nodes
// while |chi2| stays above the floor.
SideMarch march_side(const Polynomial& g2, double h, int dir, int n_req, int refine) {
  SideMarch out;
  double c = 1.0, cp = 0.0;
  out.c.push_back(c);
  out.cp.push_back(cp);
  double hs = dir * h / refine;
  for (int k = 1; k <= n_req; ++k) {
    double t0 = dir * (k - 1) * h;
    double c_start = c;
    bool dead = false;
    for (int s = 0; s < refine; ++s) {
      rk4_step(g2, t0 + s * hs, hs, c, cp);
      // A sign change flags a zero crossed inside the step even when the
      // endpoint values sit above the floor.
      if (std::abs(c) < kChiFloor || c * c_start <= 0) {
        dead = true;
        break;
      }
    }
    if (dead) break;
    out.c.push_back(c);
    out.cp.push_back(cp);
  }
  return out;
}

// Prefix integrals over ascending nodes 0, h, 2h, ...: Simpson panels on
// even offsets, a three-point end correction on odd ones (O(h^4) overall).
std::vector<double> ascending_prefix(const std::vector<double>& f, double h) {
  std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    if (j == 1) {
      if (n > 2)
        out[1] = h / 12 * (5 * f[0] + 8 * f[1] - f[2]);
      else
        out[1] = h / 2 * (f[0] + f[1]);
    } else if (j % 2 == 0) {
      out[j] = out[j - 2] + h / 3 * (f[j - 2] + 4 * f[j - 1] + f[j]);
    } else {
      out[j] = out[j - 1] + h / 12 * (-f[j - 2] + 8 * f[j - 1] + 5 * f[j]);
    }
  }
  return out;
}

// Signed prefix integral from the zero node across the whole grid.
std::vector<double> prefix_integral(const std::vector<double>& f, std::size_t zero_pos,
                                    double h) {
  std::vector<double> plus(f.begin() + static_cast<std::ptrdiff_t>(zero_pos), f.end());
  std::vector<double> minus(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(zero_pos) + 1);
  std::reverse(minus.begin(), minus.end());
  std::vector<double> pp = ascending_prefix(plus, h);
  std::vector<double> pm = ascending_prefix(minus, h);
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 0; i < pp.size(); ++i) out[zero_pos + i] = pp[i];
  for (std::size_t i = 0; i < pm.size(); ++i) out[zero_pos - i] = -pm[i];
  return out;
}

const std::vector<double>& pick(int j, const std::vector<double>& a,
                                const std::vector<double>& b, const std::vector<double>& c) {
  if (j == 1) return a;
  if (j == 2) return b;
  if (j == 3) return c;
  throw std::invalid_argument("tdreduce: generator index must be 1, 2, or 3");
}

}  // namespace

double Polynomial::operator()(double t) const {
  double v = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * t + coeffs[i];
  return v;
}

double Polynomial::derivative(double t) const {
  double v = 0;
  for (std::size_t i = coeffs.size(); i-- > 1;) v = v * t + coeffs[i] * static_cast<double>(i);
  return v;
}

bool Polynomial::is_zero() const {
  for (double c : coeffs)
    if (c != 0) return false;
  return true;
}

std::string Polynomial::str() const {
  if (is_zero()) return "zero";
  std::string out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) out += ",";
    out += format_double(coeffs[i]);
  }
  return out;
}

PotentialSpec PotentialSpec::zero(double T) { return {{}, {}, {}, 0, T}; }

PotentialSpec PotentialSpec::harmonic(double T) { return {{{0.5}}, {}, {}, 0, T}; }

PotentialSpec PotentialSpec::parse(const std::string& text) {
  PotentialSpec spec;
  spec.T = 1.0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t semi = text.find(';', pos);
    std::string field =
        trim(text.substr(pos, semi == std::string::npos ? semi : semi - pos));
    pos = (semi == std::string::npos) ? text.size() : semi + 1;
    if (field.empty()) continue;
    std::size_t eq = field.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("PotentialSpec: field without '=': " + field);
    std::string key = trim(field.substr(0, eq));
    std::string value = trim(field.substr(eq + 1));
    if (key == "g2")
      spec.g2 = parse_poly(value);
    else if (key == "g1")
      spec.g1 = parse_poly(value);
    else if (key == "g0")
      spec.g0 = parse_poly(value);
    else if (key == "lambda") {
      try {
        spec.lambda = mpq_class(value);
      } catch (const std::exception&) {
        throw std::invalid_argument("PotentialSpec: bad rational '" + value + "'");
      }
      if (spec.lambda.get_den() == 0)
        throw std::invalid_argument("PotentialSpec: zero denominator in lambda");
      spec.lambda.canonicalize();
    } else if (key == "T")
      spec.T = std::stod(value);
    else
      throw std::invalid_argument("PotentialSpec: unknown field '" + key + "'");
  }
  spec.validate();
  return spec;
}

std::string PotentialSpec::str() const {
  return "g2=" + g2.str() + "; g1=" + g1.str() + "; g0=" + g0.str() +
         "; lambda=" + lambda.get_str() + "; T=" + format_double(T);
}

void PotentialSpec::validate() const {
  if (!(T > 0) || !std::isfinite(T))
    throw std::invalid_argument("PotentialSpec: T must be positive and finite");
  if (lambda < 0) throw std::invalid_argument("PotentialSpec: lambda must be >= 0");
  if (lambda != 0 && !g1.is_zero())
    throw std::invalid_argument("PotentialSpec: lambda * g1 must vanish identically");
  for (const Polynomial* p : {&g2, &g1, &g0})
    for (double c : p->coeffs)
      if (!std::isfinite(c))
        throw std::invalid_argument("PotentialSpec: nonfinite coefficient");
}

double PotentialSpec::potential(double t, double x) const {
  double v = g2(t) * x * x + g1(t) * x + g0(t);
  if (lambda != 0) {
    if (x == 0) throw std::domain_error("PotentialSpec: potential singular at x = 0");
    v += lambda.get_d() / (x * x);
  }
  return v;
}

double ChiSystem::eval(const std::vector<double>& field, double tt) const {
  if (tt < t.front() - 1e-12 || tt > t.back() + 1e-12)
    throw std::domain_error("tdreduce: evaluation outside the valid interval");
  int n = static_cast<int>(t.size());
  double u = (tt - t.front()) / h;
  if (n < 4) {
    int i = std::clamp(static_cast<int>(std::floor(u)), 0, n - 2);
    double s = u - i;
    return (1 - s) * field[i] + s * field[i + 1];
  }
  int i = std::clamp(static_cast<int>(std::floor(u)), 1, n - 3);
  double s = u - i;
  double w0 = -s * (s - 1) * (s - 2) / 6;
  double w1 = (s + 1) * (s - 1) * (s - 2) / 2;
  double w2 = -(s + 1) * s * (s - 2) / 2;
  double w3 = (s + 1) * s * (s - 1) / 6;
  return w0 * field[i - 1] + w1 * field[i] + w2 * field[i + 1] + w3 * field[i + 2];
}

std::complex<double> ChiSystem::B(int j, double tt, double x) const {
  double pp = eval(pick(j, phi1pp, phi2pp, phi3pp), tt);
  double ap = eval(pick(j, A1p, A2p, A3p), tt);
  double p = eval(pick(j, phi1p, phi2p, phi3p), tt);
  double ph = eval(pick(j, phi1, phi2, phi3), tt);
  double d = eval(pick(j, D1, D2, D3), tt);
  return {0.25 * p, -0.25 * pp * x * x - ap * x + spec.g0(tt) * ph + d};
}

ChiSystem solve_chi(const PotentialSpec& spec, double step) {
  spec.validate();
  if (!(step > 0) || !std::isfinite(step))
    throw std::invalid_argument("solve_chi: step must be positive");

  int n_req = std::max(1, static_cast<int>(std::lround(spec.T / step)));
  double h = spec.T / n_req;

  SideMarch plus = march_side(spec.g2, h, +1, n_req, 2);
  SideMarch minus = march_side(spec.g2, h, -1, n_req, 2);
  SideMarch plus_coarse = march_side(spec.g2, h, +1, n_req, 1);
  SideMarch minus_coarse = march_side(spec.g2, h, -1, n_req, 1);

  ChiSystem cs;
  cs.spec = spec;
  cs.h = h;
  cs.n_plus = static_cast<int>(plus.c.size()) - 1;
  cs.n_minus = static_cast<int>(minus.c.size()) - 1;
  cs.truncated = cs.n_plus < n_req || cs.n_minus < n_req;
  if (cs.truncated) {
    cs.truncation_note = "chi2 reached the floor " + format_double(kChiFloor) +
                         "; valid interval truncated to [" +
                         format_double(-cs.n_minus * h) + ", " +
                         format_double(cs.n_plus * h) + "]";
    if ((cs.n_plus + cs.n_minus) * h < kMinValidLength)
      throw std::domain_error("solve_chi: valid interval shorter than " +
                              format_double(kMinValidLength) + " (" +
                              cs.truncation_note + ")");
  }
  for (std::size_t k = 0; k < std::min(plus.c.size(), plus_coarse.c.size()); ++k)
    cs.richardson_error =
        std::max(cs.richardson_error, std::abs(plus.c[k] - plus_coarse.c[k]));
  for (std::size_t k = 0; k < std::min(minus.c.size(), minus_coarse.c.size()); ++k)
    cs.richardson_error =
        std::max(cs.richardson_error, std::abs(minus.c[k] - minus_coarse.c[k]));

  std::size_t n = static_cast<std::size_t>(cs.n_minus + cs.n_plus + 1);
  std::size_t zp = static_cast<std::size_t>(cs.n_minus);
  cs.t.resize(n);
  cs.chi2.resize(n);
  cs.chi2p.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int k = static_cast<int>(i) - cs.n_minus;
    cs.t[i] = k * h;
    cs.chi2[i] = k >= 0 ? plus.c[static_cast<std::size_t>(k)]
                        : minus.c[static_cast<std::size_t>(-k)];
    cs.chi2p[i] = k >= 0 ? plus.cp[static_cast<std::size_t>(k)]
                         : minus.cp[static_cast<std::size_t>(-k)];
  }

  auto sampled = [&](const std::function<double(std::size_t)>& fn) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = fn(i);
    return v;
  };

  cs.Theta = prefix_integral(
      sampled([&](std::size_t i) { return 1.0 / (cs.chi2[i] * cs.chi2[i]); }), zp, h);
  cs.chi1 = sampled([&](std::size_t i) { return cs.chi2[i] * cs.Theta[i]; });
  cs.chi1p =
      sampled([&](std::size_t i) { return cs.chi2p[i] * cs.Theta[i] + 1.0 / cs.chi2[i]; });
  cs.C2 = prefix_integral(
      sampled([&](std::size_t i) { return cs.chi2[i] * spec.g1(cs.t[i]); }), zp, h);
  cs.C1 = prefix_integral(
      sampled([&](std::size_t i) { return cs.chi1[i] * spec.g1(cs.t[i]); }), zp, h);
  cs.Pc2 = prefix_integral(
      sampled([&](std::size_t i) { return cs.C2[i] / (cs.chi2[i] * cs.chi2[i]); }), zp, h);

  cs.A1 = sampled([&](std::size_t i) { return -cs.chi1[i] * cs.C1[i]; });
  cs.A2 = sampled([&](std::size_t i) { return -cs.chi2[i] * cs.C2[i]; });
  cs.A3 = sampled(
      [&](std::size_t i) { return -(cs.chi1[i] * cs.C2[i] + cs.chi2[i] * cs.C1[i]); });
  cs.A1p = sampled([&](std::size_t i) {
    return -cs.chi1p[i] * cs.C1[i] - cs.chi1[i] * cs.chi1[i] * spec.g1(cs.t[i]);
  });
  cs.A2p = sampled([&](std::size_t i) {
    return -cs.chi2p[i] * cs.C2[i] - cs.chi2[i] * cs.chi2[i] * spec.g1(cs.t[i]);
  });
  cs.A3p = sampled([&](std::size_t i) {
    return -(cs.chi1p[i] * cs.C2[i] + cs.chi2p[i] * cs.C1[i] +
             2 * cs.chi1[i] * cs.chi2[i] * spec.g1(cs.t[i]));
  });

  cs.phi1 = sampled([&](std::size_t i) { return cs.chi1[i] * cs.chi1[i]; });
  cs.phi2 = sampled([&](std::size_t i) { return cs.chi2[i] * cs.chi2[i]; });
  cs.phi3 = sampled([&](std::size_t i) { return 2 * cs.chi1[i] * cs.chi2[i]; });
  cs.phi1p = sampled([&](std::size_t i) { return 2 * cs.chi1[i] * cs.chi1p[i]; });
  cs.phi2p = sampled([&](std::size_t i) { return 2 * cs.chi2[i] * cs.chi2p[i]; });
  cs.phi3p = sampled(
      [&](std::size_t i) { return 2 * (cs.chi1p[i] * cs.chi2[i] + cs.chi1[i] * cs.chi2p[i]); });
  // Second derivatives through the ODE chi'' = -2 g2 chi.
  cs.phi1pp = sampled([&](std::size_t i) {
    return 2 * cs.chi1p[i] * cs.chi1p[i] - 4 * spec.g2(cs.t[i]) * cs.phi1[i];
  });
  cs.phi2pp = sampled([&](std::size_t i) {
    return 2 * cs.chi2p[i] * cs.chi2p[i] - 4 * spec.g2(cs.t[i]) * cs.phi2[i];
  });
  cs.phi3pp = sampled([&](std::size_t i) {
    return 4 * cs.chi1p[i] * cs.chi2p[i] - 4 * spec.g2(cs.t[i]) * cs.phi3[i];
  });

  cs.D1 = sampled([&](std::size_t i) { return -0.5 * cs.C1[i] * cs.C1[i]; });
  cs.D2 = sampled([&](std::size_t i) { return -0.5 * cs.C2[i] * cs.C2[i]; });
  cs.D3 = sampled([&](std::size_t i) { return -cs.C1[i] * cs.C2[i]; });

  cs.Pcorr = prefix_integral(sampled([&](std::size_t i) {
                               double c2 = cs.chi2[i];
                               return spec.g0(cs.t[i]) +
                                      cs.C2[i] * cs.C2[i] / (2 * c2 * c2);
                             }),
                             zp, h);
  return cs;
}

ChiIdentityResiduals chi_identities_residual(const ChiSystem& cs) {
  ChiIdentityResiduals out;
  for (std::size_t i = 0; i < cs.t.size(); ++i) {
    double th = cs.Theta[i];
    double a = cs.A1[i] - (th * th * cs.A2[i] + cs.chi2[i] * th * cs.Pc2[i]);
    double p = cs.phi1p[i] - (th * th * cs.phi2p[i] + 2 * th);
    out.a_identity = std::max(out.a_identity, std::abs(a));
    out.phi_identity = std::max(out.phi_identity, std::abs(p));
  }
  return out;
}

double LOperator::ct(double tt) const {
  return epsilon * cs->eval(pick(j, cs->phi1, cs->phi2, cs->phi3), tt);
}

double LOperator::cx(double tt, double x) const {
  double phip = cs->eval(pick(j, cs->phi1p, cs->phi2p, cs->phi3p), tt);
  double a = cs->eval(pick(j, cs->A1, cs->A2, cs->A3), tt);
  return epsilon * (0.5 * phip * x + a);
}

std::complex<double> LOperator::c0(double tt, double x) const {
  return static_cast<double>(epsilon) * cs->B(j, tt, x);
}

std::complex<double> LOperator::apply(const std::function<cplx(double, double)>& f,
                                      double t, double x, double delta) const {
  cplx ft = (f(t + delta, x) - f(t - delta, x)) / (2 * delta);
  cplx fx = (f(t, x + delta) - f(t, x - delta)) / (2 * delta);
  return ct(t) * ft + cx(t, x) * fx + c0(t, x) * f(t, x);
}

std::array<LOperator, 3> generators_L(const ChiSystem& cs, const PotentialSpec& spec) {
  if (spec.str() != cs.spec.str())
    throw std::invalid_argument("generators_L: spec does not match the chi-system");
  return {LOperator{1, +1, &cs}, LOperator{2, -1, &cs}, LOperator{3, -1, &cs}};
}

double bracket_residual_L(const ChiSystem& cs, const PotentialSpec& spec,
                          const std::function<cplx(double, double)>& f,
                          const std::vector<std::pair<double, double>>& probes,
                          double delta) {
  if (!(delta > 0)) throw std::invalid_argument("bracket_residual_L: delta must be positive");
  std::array<LOperator, 3> L = generators_L(cs, spec);

  double worst = 0;
  for (const auto& [pt, px] : probes) {
    // Defects of the three relations at one FD step.
    auto defects = [&](double d) {
      auto applied = [&](int a) {
        return [&, a, d](double tt, double xx) { return L[static_cast<std::size_t>(a)].apply(f, tt, xx, d); };
      };
      auto comm = [&](int a, int b) {
        return L[static_cast<std::size_t>(a)].apply(applied(b), pt, px, d) -
               L[static_cast<std::size_t>(b)].apply(applied(a), pt, px, d);
      };
      cplx l1 = L[0].apply(f, pt, px, d);
      cplx l2 = L[1].apply(f, pt, px, d);
      cplx l3 = L[2].apply(f, pt, px, d);
      return std::array<cplx, 6>{comm(2, 0) + 2.0 * l1, comm(2, 1) - 2.0 * l2,
                                 comm(1, 0) - l3, l1, l2, l3};
    };
    std::array<cplx, 6> coarse = defects(delta);
    std::array<cplx, 6> fine = defects(delta / 2);
    double scale = std::max({1.0, std::abs(fine[3]), std::abs(fine[4]), std::abs(fine[5])});
    for (int r = 0; r < 3; ++r) {
      cplx ext = (4.0 * fine[static_cast<std::size_t>(r)] - coarse[static_cast<std::size_t>(r)]) / 3.0;
      worst = std::max(worst, std::abs(ext) / scale);
    }
  }
  return worst;
}

std::pair<double, double> gamma_map(const ChiSystem& cs, double t, double x) {
  double th = cs.eval(cs.Theta, t);
  double c2 = cs.eval(cs.chi2, t);
  double pc = cs.eval(cs.Pc2, t);
  return {th, x / c2 + pc};
}

GridFunction transform_solution(const ChiSystem& cs,
                                const std::function<cplx(double, double)>& f,
                                double t_lo, double t_hi, std::size_t nt, double x_lo,
                                double x_hi, std::size_t nx, MultiplierMode mode) {
  if (nt < 2 || nx < 2 || !(t_hi > t_lo) || !(x_hi > x_lo))
    throw std::invalid_argument("transform_solution: malformed grid request");
  if (t_lo < cs.valid_min() - 1e-12 || t_hi > cs.valid_max() + 1e-12)
    throw std::domain_error("transform_solution: t-range leaves the valid interval");

  GridFunction out;
  out.h_t = (t_hi - t_lo) / static_cast<double>(nt - 1);
  out.h_x = (x_hi - x_lo) / static_cast<double>(nx - 1);
  out.ts.resize(nt);
  out.xs.resize(nx);
  for (std::size_t i = 0; i < nt; ++i) out.ts[i] = t_lo + static_cast<double>(i) * out.h_t;
  for (std::size_t i = 0; i < nx; ++i) out.xs[i] = x_lo + static_cast<double>(i) * out.h_x;
  out.samples.resize(nt * nx);

  // Verbatim multiplier: exponent P2(t) x^2 + P1(t) x + P0(t) with the
  // prefix integrands read off from B2/chi2^2 + ((phi2' x/2 + A2)/chi2^2)^2.
  std::size_t n = cs.t.size();
  std::size_t zp = static_cast<std::size_t>(cs.n_minus);
  std::vector<double> p2re(n), p2im(n), p1re(n), p1im(n), p0re(n), p0im(n);
  if (mode == MultiplierMode::kVerbatim) {
    std::vector<double> i2re(n), i2im(n), i1re(n), i1im(n), i0re(n), i0im(n);
    for (std::size_t i = 0; i < n; ++i) {
      double c2sq = cs.chi2[i] * cs.chi2[i];
      double c4 = c2sq * c2sq;
      i2re[i] = 0.25 * cs.phi2p[i] * cs.phi2p[i] / c4;
      i2im[i] = -0.25 * cs.phi2pp[i] / c2sq;
      i1re[i] = cs.phi2p[i] * cs.A2[i] / c4;
      i1im[i] = -cs.A2p[i] / c2sq;
      i0re[i] = 0.25 * cs.phi2p[i] / c2sq + cs.A2[i] * cs.A2[i] / c4;
      i0im[i] = (cs.spec.g0(cs.t[i]) * cs.phi2[i] + cs.D2[i]) / c2sq;
    }
    p2re = prefix_integral(i2re, zp, cs.h);
    p2im = prefix_integral(i2im, zp, cs.h);
    p1re = prefix_integral(i1re, zp, cs.h);
    p1im = prefix_integral(i1im, zp, cs.h);
    p0re = prefix_integral(i0re, zp, cs.h);
    p0im = prefix_integral(i0im, zp, cs.h);
  }

  for (std::size_t it = 0; it < nt; ++it) {
    double tt = out.ts[it];
    auto [th, xi0] = gamma_map(cs, tt, 0.0);
    double c2 = cs.eval(cs.chi2, tt);
    cplx mult_base;
    cplx mult_x, mult_x2;  // exponent pieces, by power of x
    if (mode == MultiplierMode::kVerbatim) {
      mult_x2 = {cs.eval(p2re, tt), cs.eval(p2im, tt)};
      mult_x = {cs.eval(p1re, tt), cs.eval(p1im, tt)};
      mult_base = {cs.eval(p0re, tt), cs.eval(p0im, tt)};
    } else {
      if (!(c2 > 0))
        throw std::domain_error("transform_solution: chi2 must stay positive");
      double c2p = cs.eval(cs.chi2p, tt);
      double c2v = cs.eval(cs.C2, tt);
      double pcorr = cs.eval(cs.Pcorr, tt);
      mult_x2 = cplx(0, 0.5 * c2p / c2);
      mult_x = cplx(0, -c2v / c2);
      mult_base = cplx(-0.5 * std::log(c2), -pcorr);
    }
    for (std::size_t ix = 0; ix < nx; ++ix) {
      double xx = out.xs[ix];
      cplx expo = mult_x2 * xx * xx + mult_x * xx + mult_base;
      double xi = xx / c2 + xi0;
      out.samples[it * nx + ix] = std::exp(expo) * f(th, xi);
    }
  }
  return out;
}

TdResidualReport td_residual(const GridFunction& ft, const PotentialSpec& spec,
                             const std::vector<std::pair<double, double>>& probes,
                             double tol) {
  std::size_t nt = ft.ts.size(), nx = ft.xs.size();
  if (nt < 5 || nx < 5)
    throw std::invalid_argument("td_residual: grid must be at least 5x5");
  TdResidualReport report;
  double lambda_d = spec.lambda.get_d();
  for (const auto& [pt, px] : probes) {
    long it = std::lround((pt - ft.ts[0]) / ft.h_t);
    long ix = std::lround((px - ft.xs[0]) / ft.h_x);
    if (it < 2 || it > static_cast<long>(nt) - 3 || ix < 2 || ix > static_cast<long>(nx) - 3)
      throw std::invalid_argument("td_residual: probe too close to the grid edge");
    std::size_t i = static_cast<std::size_t>(it), k = static_cast<std::size_t>(ix);
    double tv = ft.ts[i], xv = ft.xs[k];
    if (lambda_d != 0 && std::abs(xv) < 0.1)
      throw std::invalid_argument("td_residual: probes must keep |x| >= 0.1 when lambda != 0");
    double v = spec.potential(tv, xv);
    cplx fc = ft.at(i, k);
    auto residual_at = [&](std::size_t s) {
      double dt = static_cast<double>(s) * ft.h_t;
      double dx = static_cast<double>(s) * ft.h_x;
      cplx dtv = (ft.at(i + s, k) - ft.at(i - s, k)) / (2 * dt);
      cplx dxx = (ft.at(i, k + s) - 2.0 * fc + ft.at(i, k - s)) / (dx * dx);
      return cplx(0, 2) * dtv + dxx - 2.0 * v * fc;
    };
    cplx ext = (4.0 * residual_at(1) - residual_at(2)) / 3.0;
    double scale = 1.0;
    for (std::size_t s = 1; s <= 2; ++s)
      scale = std::max({scale, std::abs(ft.at(i + s, k)), std::abs(ft.at(i - s, k)),
                        std::abs(ft.at(i, k + s)), std::abs(ft.at(i, k - s))});
    scale = std::max(scale, std::abs(fc));
    double rel = std::abs(ext) / scale;
    report.profile.push_back({tv, xv, rel});
    report.max_residual = std::max(report.max_residual, rel);
  }
  report.verdict = report.max_residual <= tol ? "PASS" : "MULTIPLIER-DISCREPANCY";
  return report;
}

}  // namespace sl2rep
