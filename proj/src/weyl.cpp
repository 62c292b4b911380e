#include "sl2rep/weyl.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

namespace sl2rep {

namespace {

mpz_class binom(int n, int k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

// n (n-1) ... (n-k+1); valid for negative n.
mpz_class falling(long n, int k) {
  mpz_class out = 1;
  for (int j = 0; j < k; ++j) out *= mpz_class(n - j);
  return out;
}

}  // namespace

WeylOperator WeylOperator::monomial(const WeylKey& k, const ParamPoly& c) {
  WeylOperator out;
  out.add_term(k, c);
  return out;
}

void WeylOperator::add_term(const WeylKey& k, const ParamPoly& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms.emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

WeylOperator& WeylOperator::operator+=(const WeylOperator& o) {
  for (const auto& [k, c] : o.terms) add_term(k, c);
  return *this;
}

WeylOperator& WeylOperator::operator-=(const WeylOperator& o) {
  for (const auto& [k, c] : o.terms) add_term(k, -c);
  return *this;
}

WeylOperator WeylOperator::operator*(const ParamPoly& c) const {
  WeylOperator out;
  for (const auto& [k, v] : terms) out.add_term(k, v * c);
  return out;
}

WeylOperator WeylOperator::operator*(const WeylOperator& o) const { return op_mul(*this, o); }

WeylOperator op_mul(const WeylOperator& a, const WeylOperator& b) {
  WeylOperator out;
  for (const auto& [ka, pa] : a.terms) {
    for (const auto& [kb, pb] : b.terms) {
      // Normal-order dt^c1 dx^d1 past t^a2 x^b2:
      //   dt^c1 t^a2 = sum_j C(c1,j) fall(a2,j) t^(a2-j) dt^(c1-j)
      //   dx^d1 x^b2 = sum_k C(d1,k) fall(b2,k) x^(b2-k) dx^(d1-k)
      // The x sum is finite even for Laurent b2 because k <= d1.
      ParamPoly pab = pa * pb;
      int jmax = std::min(ka.dte, kb.te);
      int kmax = kb.xe >= 0 ? std::min(ka.dxe, kb.xe) : ka.dxe;
      for (int j = 0; j <= jmax; ++j) {
        mpz_class cj = binom(ka.dte, j) * falling(kb.te, j);
        if (cj == 0) continue;
        for (int k = 0; k <= kmax; ++k) {
          mpz_class ck = binom(ka.dxe, k) * falling(kb.xe, k);
          if (ck == 0) continue;
          WeylKey nk{ka.te + kb.te - j, ka.xe + kb.xe - k, ka.dte + kb.dte - j,
                     ka.dxe + kb.dxe - k};
          out.add_term(nk, pab * GaussianRational(mpq_class(cj * ck)));
        }
      }
    }
  }
  return out;
}

WeylOperator op_bracket(const WeylOperator& a, const WeylOperator& b) {
  return op_mul(a, b) - op_mul(b, a);
}

WeylOperator WeylOperator::substitute(Param p, const GaussianRational& value) const {
  WeylOperator out;
  for (const auto& [k, c] : terms) out.add_term(k, c.substitute(p, value));
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string key_body(const WeylKey& k) {
  std::string out;
  auto put = [&out](const char* sym, int e) {
    if (e == 0) return;
    if (!out.empty()) out += "*";
    out += sym;
    if (e != 1) out += "^" + std::to_string(e);
  };
  put("t", k.te);
  put("x", k.xe);
  put("dt", k.dte);
  put("dx", k.dxe);
  return out;
}

std::string param_body(const ParamPoly::Expo& e) {
  std::string out;
  for (std::size_t k = 0; k < kNumParams; ++k) {
    if (e[k] == 0) continue;
    if (!out.empty()) out += "*";
    out += kParamNames[k];
    if (e[k] != 1) out += "^" + std::to_string(e[k]);
  }
  return out;
}

std::string join_factors(const std::string& coeff, const std::string& params,
                         const std::string& ops) {
  std::string out;
  if (coeff != "1" || (params.empty() && ops.empty())) out = coeff;
  for (const std::string& part : {params, ops}) {
    if (part.empty()) continue;
    if (!out.empty()) out += "*";
    out += part;
  }
  return out;
}

}  // namespace

std::string WeylOperator::str() const {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [key, poly] : terms) {
    bool neg = false;
    std::string piece;
    std::string ops = key_body(key);
    if (poly.terms.size() == 1) {
      const auto& [expo, c] = *poly.terms.begin();
      neg = (c.re != 0) ? (c.re < 0) : (c.im < 0);
      GaussianRational mag = neg ? -c : c;
      piece = join_factors(mag.str(), param_body(expo), ops);
    } else {
      piece = "(" + poly.str() + ")";
      if (!ops.empty()) piece += "*" + ops;
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

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  enum Kind { END, PLUS, MINUS, STAR, CARET, LPAREN, RPAREN, IDENT, NUMBER } kind;
  std::string text;
  mpq_class value;
  std::size_t pos;
};

[[noreturn]] void parse_fail(std::size_t pos, const std::string& what) {
  throw std::invalid_argument("parse error at position " + std::to_string(pos) + ": " + what);
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> toks;
  std::size_t i = 0;
  while (i < text.size()) {
    char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    std::size_t pos = i;
    switch (ch) {
      case '+': toks.push_back({Token::PLUS, "+", 0, pos}); ++i; continue;
      case '-': toks.push_back({Token::MINUS, "-", 0, pos}); ++i; continue;
      case '*': toks.push_back({Token::STAR, "*", 0, pos}); ++i; continue;
      case '^': toks.push_back({Token::CARET, "^", 0, pos}); ++i; continue;
      case '(': toks.push_back({Token::LPAREN, "(", 0, pos}); ++i; continue;
      case ')': toks.push_back({Token::RPAREN, ")", 0, pos}); ++i; continue;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string num;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) num += text[i++];
      // A '/' followed by digits continues the rational literal.
      if (i + 1 < text.size() && text[i] == '/' &&
          std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
        std::string den;
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) den += text[i++];
        if (mpz_class(den) == 0) parse_fail(pos, "zero denominator");
        mpq_class q{mpz_class(num), mpz_class(den)};
        q.canonicalize();
        toks.push_back({Token::NUMBER, num + "/" + den, q, pos});
      } else {
        toks.push_back({Token::NUMBER, num, mpq_class(mpz_class(num)), pos});
      }
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string id;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        id += text[i++];
      toks.push_back({Token::IDENT, id, 0, pos});
      continue;
    }
    parse_fail(pos, std::string("unexpected character '") + ch + "'");
  }
  toks.push_back({Token::END, "", 0, text.size()});
  return toks;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  WeylOperator run() {
    WeylOperator out = expr();
    if (peek().kind != Token::END) parse_fail(peek().pos, "trailing input");
    return out;
  }

 private:
  std::vector<Token> toks_;
  std::size_t at_ = 0;

  const Token& peek() const { return toks_[at_]; }
  Token take() { return toks_[at_++]; }
  bool accept(Token::Kind k) {
    if (peek().kind == k) {
      ++at_;
      return true;
    }
    return false;
  }

  WeylOperator expr() {
    bool neg = accept(Token::MINUS);
    WeylOperator out = term();
    if (neg) out = -out;
    for (;;) {
      if (accept(Token::PLUS)) {
        out += term();
      } else if (accept(Token::MINUS)) {
        out -= term();
      } else {
        return out;
      }
    }
  }

  WeylOperator term() {
    WeylOperator out = factor();
    while (accept(Token::STAR)) out = op_mul(out, factor());
    return out;
  }

  // Symbol classes that admit direct exponent keys.
  enum class AtomKind { GENERIC, T, X, DT, DX };

  WeylOperator factor() {
    AtomKind kind = AtomKind::GENERIC;
    std::size_t apos = peek().pos;
    WeylOperator base = atom(kind);
    if (!accept(Token::CARET)) return base;
    std::size_t epos = peek().pos;
    bool eneg = accept(Token::MINUS);
    if (peek().kind != Token::NUMBER) parse_fail(peek().pos, "expected integer exponent");
    Token num = take();
    if (num.text.find('/') != std::string::npos) parse_fail(epos, "exponent must be an integer");
    if (!num.value.get_num().fits_sint_p()) parse_fail(epos, "exponent out of range");
    int e = static_cast<int>(num.value.get_num().get_si());
    if (eneg) e = -e;
    switch (kind) {
      case AtomKind::T:
        if (e < 0) parse_fail(apos, "negative power of t is not allowed");
        return WeylOperator::monomial(WeylKey{e, 0, 0, 0}, ParamPoly(1));
      case AtomKind::X:
        return WeylOperator::monomial(WeylKey{0, e, 0, 0}, ParamPoly(1));
      case AtomKind::DT:
        if (e < 0) parse_fail(apos, "negative power of dt is not allowed");
        return WeylOperator::monomial(WeylKey{0, 0, e, 0}, ParamPoly(1));
      case AtomKind::DX:
        if (e < 0) parse_fail(apos, "negative power of dx is not allowed");
        return WeylOperator::monomial(WeylKey{0, 0, 0, e}, ParamPoly(1));
      case AtomKind::GENERIC:
        break;
    }
    if (e < 0) parse_fail(apos, "negative power is only supported on x");
    if (e > 64) parse_fail(epos, "exponent too large");
    WeylOperator out = WeylOperator::constant(ParamPoly(1));
    for (int k = 0; k < e; ++k) out = op_mul(out, base);
    return out;
  }

  WeylOperator atom(AtomKind& kind) {
    const Token& tok = peek();
    switch (tok.kind) {
      case Token::NUMBER: {
        Token num = take();
        return WeylOperator::constant(ParamPoly(GaussianRational(num.value)));
      }
      case Token::LPAREN: {
        take();
        WeylOperator inner = expr();
        if (!accept(Token::RPAREN)) parse_fail(peek().pos, "expected ')'");
        return inner;
      }
      case Token::IDENT: {
        Token id = take();
        if (id.text == "t") {
          kind = AtomKind::T;
          return WeylOperator::monomial(WeylKey{1, 0, 0, 0}, ParamPoly(1));
        }
        if (id.text == "x") {
          kind = AtomKind::X;
          return WeylOperator::monomial(WeylKey{0, 1, 0, 0}, ParamPoly(1));
        }
        if (id.text == "dt") {
          kind = AtomKind::DT;
          return WeylOperator::monomial(WeylKey{0, 0, 1, 0}, ParamPoly(1));
        }
        if (id.text == "dx") {
          kind = AtomKind::DX;
          return WeylOperator::monomial(WeylKey{0, 0, 0, 1}, ParamPoly(1));
        }
        if (id.text == "i") return WeylOperator::constant(ParamPoly(GaussianRational::i()));
        for (std::size_t p = 0; p < kNumParams; ++p) {
          if (id.text == kParamNames[p])
            return WeylOperator::constant(ParamPoly::param(static_cast<Param>(p)));
        }
        parse_fail(id.pos, "unknown identifier '" + id.text + "'");
      }
      default:
        parse_fail(tok.pos, "expected atom");
    }
  }
};

}  // namespace

WeylOperator parse_operator(const std::string& text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Named operators

Sl2Triple sl2_generators() {
  ParamPoly r = ParamPoly::param(PR);
  ParamPoly s = ParamPoly::param(PS);
  Sl2Triple g;
  g.h.add_term(WeylKey{0, 1, 0, 1}, ParamPoly(-1));
  g.h.add_term(WeylKey{1, 0, 1, 0}, ParamPoly(-2));
  g.h.add_term(WeylKey{}, r);
  g.e_plus.add_term(WeylKey{0, 0, 1, 0}, ParamPoly(-1));
  g.e_minus.add_term(WeylKey{1, 1, 0, 1}, ParamPoly(1));
  g.e_minus.add_term(WeylKey{2, 0, 1, 0}, ParamPoly(1));
  g.e_minus.add_term(WeylKey{0, 2, 0, 0}, -s);
  g.e_minus.add_term(WeylKey{1, 0, 0, 0}, -r);
  return g;
}

WeylOperator heisenberg_generator(const ParamPoly& u, const ParamPoly& v, const ParamPoly& w) {
  ParamPoly s = ParamPoly::param(PS);
  WeylOperator out;
  out.add_term(WeylKey{1, 0, 0, 1}, v);
  out.add_term(WeylKey{0, 0, 0, 1}, -u);
  out.add_term(WeylKey{}, s * w);
  out.add_term(WeylKey{0, 1, 0, 0}, s * v * GaussianRational(-2));
  return out;
}

WeylOperator heisenberg_generator() {
  return heisenberg_generator(ParamPoly::param(PU), ParamPoly::param(PV), ParamPoly::param(PW));
}

WeylOperator gl_action_operator(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                                const mpq_class& d) {
  if (a * d - b * c != 1) throw std::invalid_argument("gl_action_operator: determinant must be 1");
  ParamPoly r = ParamPoly::param(PR);
  ParamPoly s = ParamPoly::param(PS);
  auto q = [](const mpq_class& v) { return GaussianRational(v); };
  WeylOperator out;
  out.add_term(WeylKey{1, 1, 0, 1}, ParamPoly(q(c)));
  out.add_term(WeylKey{0, 1, 0, 1}, ParamPoly(q(-a)));
  out.add_term(WeylKey{2, 0, 1, 0}, ParamPoly(q(c)));
  out.add_term(WeylKey{1, 0, 1, 0}, ParamPoly(q(-2 * a)));
  out.add_term(WeylKey{0, 0, 1, 0}, ParamPoly(q(-b)));
  out.add_term(WeylKey{}, r * q(a));
  out.add_term(WeylKey{0, 2, 0, 0}, s * q(-c));
  out.add_term(WeylKey{1, 0, 0, 0}, r * q(-c));
  return out;
}

CasimirPair casimir() {
  auto [h, ep, em] = sl2_generators();
  ParamPoly half(GaussianRational(mpq_class(1, 2)));
  CasimirPair out;
  out.omega = op_mul(h, h) * half - h + op_mul(ep, em) * ParamPoly(2);
  ParamPoly r = ParamPoly::param(PR);
  out.omega_prime = out.omega * ParamPoly(2) - WeylOperator::constant(r * r + r * ParamPoly(2));
  return out;
}

WeylOperator schrodinger_free() {
  WeylOperator out;
  out.add_term(WeylKey{0, 0, 1, 0}, ParamPoly(GaussianRational(0, 2)));
  out.add_term(WeylKey{0, 0, 0, 2}, ParamPoly(1));
  return out;
}

WeylOperator heis_commutator_identity() {
  ParamPoly lambda = ParamPoly::param(PLAMBDA);
  WeylOperator a = schrodinger_free();
  a.add_term(WeylKey{0, -2, 0, 0}, lambda * GaussianRational(-2));
  WeylOperator p = heisenberg_generator().substitute(PS, GaussianRational(0, mpq_class(1, 2)));
  return op_bracket(a, p);
}

IdentityCheck check_identity(const std::string& lhs, const std::string& rhs) {
  IdentityCheck out;
  out.lhs = lhs;
  out.rhs = rhs;
  WeylOperator diff = parse_operator(lhs) - parse_operator(rhs);
  out.equal = diff.is_zero();
  out.difference = diff.str();
  return out;
}

}  // namespace sl2rep
