#include "sl2rep/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace sl2rep {

const char* const kParamNames[kNumParams] = {"r", "s", "lambda", "u", "v", "w"};

GaussianRational GaussianRational::inverse() const {
  mpq_class n = norm();
  if (n == 0) throw std::domain_error("GaussianRational: division by zero");
  return {re / n, -im / n};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  mpq_class nre = re * o.re - im * o.im;
  mpq_class nim = re * o.im + im * o.re;
  re = std::move(nre);
  im = std::move(nim);
  return *this;
}

namespace {

// Prints |q| * i^{is_imag}, q nonzero, as a grammar factor chain.
std::string magnitude_factor(const mpq_class& q, bool is_imag) {
  mpq_class a = abs(q);
  if (a == 1) return is_imag ? "i" : "1";
  std::string s = a.get_str();
  return is_imag ? s + "*i" : s;
}

}  // namespace

std::string GaussianRational::str() const {
  if (is_zero()) return "0";
  if (im == 0) {
    std::string body = magnitude_factor(re, false);
    return re < 0 ? "-" + body : body;
  }
  if (re == 0) {
    std::string body = magnitude_factor(im, true);
    return im < 0 ? "-" + body : body;
  }
  // Both parts nonzero: parenthesized sum so products re-parse.
  std::string s = "(";
  s += (re < 0 ? "-" : "") + magnitude_factor(re, false);
  s += (im < 0 ? "-" : "+") + magnitude_factor(im, true);
  s += ")";
  return s;
}

ParamPoly::ParamPoly(const GaussianRational& c) {
  if (!c.is_zero()) terms.emplace(Expo{}, c);
}

ParamPoly ParamPoly::param(Param p) {
  ParamPoly out;
  Expo e{};
  e[p] = 1;
  out.terms.emplace(e, GaussianRational(1));
  return out;
}

bool ParamPoly::is_constant() const {
  if (terms.empty()) return true;
  return terms.size() == 1 && terms.begin()->first == Expo{};
}

GaussianRational ParamPoly::constant_value() const {
  auto it = terms.find(Expo{});
  return it == terms.end() ? GaussianRational() : it->second;
}

void ParamPoly::insert_term(const Expo& e, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms.emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& o) {
  for (const auto& [e, c] : o.terms) insert_term(e, c);
  return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& o) {
  for (const auto& [e, c] : o.terms) insert_term(e, -c);
  return *this;
}

ParamPoly ParamPoly::operator*(const ParamPoly& o) const {
  ParamPoly out;
  for (const auto& [ea, ca] : terms) {
    for (const auto& [eb, cb] : o.terms) {
      Expo e;
      for (std::size_t k = 0; k < kNumParams; ++k) e[k] = ea[k] + eb[k];
      out.insert_term(e, ca * cb);
    }
  }
  return out;
}

ParamPoly ParamPoly::operator*(const GaussianRational& c) const {
  ParamPoly out;
  if (c.is_zero()) return out;
  for (const auto& [e, v] : terms) out.terms.emplace(e, v * c);
  return out;
}

ParamPoly ParamPoly::substitute(Param p, const GaussianRational& value) const {
  ParamPoly out;
  for (const auto& [e, c] : terms) {
    GaussianRational pw(1);
    for (int k = 0; k < e[p]; ++k) pw *= value;
    Expo ne = e;
    ne[p] = 0;
    out.insert_term(ne, c * pw);
  }
  return out;
}

void ParamPoly::eval(const std::array<double, 2 * kNumParams>& vals, double& out_re,
                     double& out_im) const {
  out_re = 0;
  out_im = 0;
  for (const auto& [e, c] : terms) {
    double pr = c.re.get_d(), pi = c.im.get_d();
    for (std::size_t k = 0; k < kNumParams; ++k) {
      for (int j = 0; j < e[k]; ++j) {
        double vr = vals[2 * k], vi = vals[2 * k + 1];
        double nr = pr * vr - pi * vi;
        pi = pr * vi + pi * vr;
        pr = nr;
      }
    }
    out_re += pr;
    out_im += pi;
  }
}

std::string ParamPoly::str() const {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms) {
    // Pull the sign of the leading component into the separator.
    bool neg = (c.re != 0) ? (c.re < 0) : (c.im < 0);
    GaussianRational mag = neg ? -c : c;
    std::string coeff = mag.str();
    std::string body;
    bool have_params = false;
    for (std::size_t k = 0; k < kNumParams; ++k) {
      if (e[k] == 0) continue;
      if (!body.empty()) body += "*";
      body += kParamNames[k];
      if (e[k] != 1) body += "^" + std::to_string(e[k]);
      have_params = true;
    }
    std::string piece;
    if (!have_params) {
      piece = coeff;
    } else if (coeff == "1") {
      piece = body;
    } else {
      piece = coeff + "*" + body;
    }
    if (first) {
      out = (neg ? "-" : "") + piece;
      first = false;
    } else {
      out += (neg ? " - " : " + ") + piece;
    }
  }
  return out;
}

}  // namespace sl2rep
