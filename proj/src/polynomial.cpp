#include "mvrelax/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "mvrelax/error.hpp"

namespace mvrelax {

namespace {

double ipow(double base, int k) {
  double r = 1.0;
  for (; k > 0; k >>= 1) {
    if (k & 1) r *= base;
    base *= base;
  }
  return r;
}

constexpr std::array<std::string_view, kNumVars> kVarNames = {"t", "x", "y",
                                                              "z0", "z1"};

// Recursive-descent parser over a restricted grammar:
//   expr   := term (('+'|'-') term)*
//   term   := unary ('*' unary)*
//   unary  := ('-'|'+') unary | power
//   power  := atom ('^' integer)?
//   atom   := number | variable | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Polynomial run() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InvalidInput("polynomial-parse",
                       fmt::format("cannot parse polynomial '{}' at offset {}: {}",
                                   s_, pos_, msg));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    while (accept('*')) acc *= unary();
    return acc;
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (accept('^')) {
      skip();
      int k = 0;
      const char* first = s_.data() + pos_;
      auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), k);
      if (ec != std::errc() || k < 0) fail("expected nonnegative integer exponent");
      pos_ += static_cast<std::size_t>(ptr - first);
      return base.pow(k);
    }
    return base;
  }

  Polynomial atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      if (!accept(')')) fail("missing ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const char* first = s_.data() + pos_;
      auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
      if (ec != std::errc()) fail("bad number");
      pos_ += static_cast<std::size_t>(ptr - first);
      return Polynomial(v);
    }
    // Longest match first so that "z0" is not read as "z".
    for (int v = kNumVars - 1; v >= 0; --v) {
      const auto name = kVarNames[static_cast<std::size_t>(v)];
      if (s_.substr(pos_, name.size()) == name) {
        pos_ += name.size();
        return Polynomial::variable(static_cast<Var>(v));
      }
    }
    fail("unknown symbol");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

int total_degree(const Exponents& e) {
  int d = 0;
  for (int k : e) d += k;
  return d;
}

std::string_view var_name(Var v) { return kVarNames[static_cast<std::size_t>(v)]; }

bool GradedLexLess::operator()(const Exponents& a, const Exponents& b) const {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Polynomial::Polynomial(double c) {
  if (c != 0.0) terms_.emplace(Exponents{}, c);
}

Polynomial Polynomial::variable(Var v) {
  Exponents e{};
  e[static_cast<std::size_t>(v)] = 1;
  return monomial(e);
}

Polynomial Polynomial::monomial(const Exponents& e, double coefficient) {
  Polynomial p;
  for (int k : e)
    if (k < 0)
      throw InvalidInput("negative-exponent", "monomial with negative exponent");
  p.add_term(e, coefficient);
  return p;
}

Polynomial Polynomial::parse(std::string_view text) { return Parser(text).run(); }

void Polynomial::add_term(const Exponents& e, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

int Polynomial::degree() const {
  // Graded order: the last term has the highest total degree.
  return terms_.empty() ? 0 : total_degree(terms_.rbegin()->first);
}

int Polynomial::degree_in(Var v) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[static_cast<std::size_t>(v)]);
  return d;
}

double Polynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::operator()(const Point& p) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c;
    for (int v = 0; v < kNumVars; ++v)
      if (e[static_cast<std::size_t>(v)] != 0)
        m *= ipow(p[static_cast<std::size_t>(v)], e[static_cast<std::size_t>(v)]);
    sum += m;
  }
  return sum;
}

Polynomial Polynomial::derivative(Var v) const {
  const auto k = static_cast<std::size_t>(v);
  Polynomial out;
  for (const auto& [key, c] : terms_) {
    Exponents e = key;
    if (e[k] == 0) continue;
    const double factor = e[k];
    --e[k];
    out.add_term(e, c * factor);
  }
  return out;
}

Polynomial Polynomial::substitute(Var v, const Polynomial& p) const {
  const auto k = static_cast<std::size_t>(v);
  const int dmax = degree_in(v);
  std::vector<Polynomial> powers{Polynomial(1.0)};
  for (int j = 1; j <= dmax; ++j) powers.push_back(powers.back() * p);

  Polynomial out;
  for (const auto& [key, c] : terms_) {
    Exponents e = key;
    const int j = e[k];
    e[k] = 0;
    out += monomial(e, c) * powers[static_cast<std::size_t>(j)];
  }
  return out;
}

Polynomial Polynomial::pin(Var v, double value) const {
  const auto k = static_cast<std::size_t>(v);
  Polynomial out;
  for (const auto& [key, c] : terms_) {
    Exponents e = key;
    const int j = e[k];
    e[k] = 0;
    out.add_term(e, c * ipow(value, j));
  }
  return out;
}

Polynomial Polynomial::integrate(Var v, double lo, double hi) const {
  const auto k = static_cast<std::size_t>(v);
  Polynomial out;
  for (const auto& [key, c] : terms_) {
    Exponents e = key;
    const int j = e[k] + 1;
    e[k] = 0;
    out.add_term(e, c * (ipow(hi, j) - ipow(lo, j)) / j);
  }
  return out;
}

Polynomial Polynomial::pow(int k) const {
  Polynomial result(1.0);
  Polynomial base = *this;
  for (; k > 0; k >>= 1) {
    if (k & 1) result *= base;
    if (k > 1) base *= base;
  }
  return result;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  Polynomial out;
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e{};
      for (std::size_t v = 0; v < e.size(); ++v) e[v] = ea[v] + eb[v];
      out.add_term(e, ca * cb);
    }
  }
  terms_ = std::move(out.terms_);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const double mag = std::abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (int v = 0; v < kNumVars; ++v) {
      const int k = e[static_cast<std::size_t>(v)];
      if (k == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += kVarNames[static_cast<std::size_t>(v)];
      if (k > 1) mono += fmt::format("^{}", k);
    }
    if (mono.empty()) {
      out += fmt::format("{}", mag);
    } else if (mag == 1.0) {
      out += mono;
    } else {
      out += fmt::format("{}*{}", mag, mono);
    }
  }
  return out;
}

}  // namespace mvrelax
