#pragma once

#include <cctype>
#include <stdexcept>
#include <string>

#include "neron/poly.hpp"

namespace neron {

// Canonical rendering: terms in ring order, monomial variables by ascending
// index, '^' for powers, '*' between factors, no whitespace.  parse() of the
// output reproduces the polynomial exactly.
template <class K>
std::string to_string(const Poly<K>& f) {
  if (f.is_zero()) return "0";
  const Ring& ring = *f.ring();
  std::string out;
  for (const auto& t : f.terms()) {
    std::string mono;
    for (int v = 0; v < ring.nvars(); ++v) {
      if (t.mono[v] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += ring.var_name(v);
      if (t.mono[v] > 1) mono += '^' + std::to_string(t.mono[v]);
    }
    std::string piece;
    if (mono.empty()) {
      piece = t.coeff.str();
    } else if (t.coeff.is_one()) {
      piece = mono;
    } else if ((-t.coeff).is_one()) {
      piece = "-" + mono;
    } else {
      piece = t.coeff.str() + "*" + mono;
    }
    if (!out.empty() && piece[0] != '-') out += '+';
    out += piece;
  }
  return out;
}

template <class K>
class PolyParser {
 public:
  PolyParser(RingPtr ring, const std::string& src) : ring_(std::move(ring)), src_(src) {}

  Poly<K> parse() {
    Poly<K> f = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("trailing input");
    return f;
  }

 private:
  Poly<K> expr() {
    bool neg = accept('-');
    Poly<K> f = term();
    if (neg) f = -f;
    for (;;) {
      if (accept('+'))
        f += term();
      else if (accept('-'))
        f -= term();
      else
        return f;
    }
  }

  Poly<K> term() {
    Poly<K> f = factor();
    while (accept('*')) f *= factor();
    return f;
  }

  Poly<K> factor() {
    Poly<K> f = atom();
    if (accept('^')) {
      long e = integer();
      f = f.pow(e);
    }
    return f;
  }

  Poly<K> atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string lit = digits();
      if (accept('/')) lit += '/' + digits();
      return Poly<K>::constant(ring_, coeff_from_string<K>(ring_->field, lit));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string name;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        name += src_[pos_++];
      return Poly<K>::variable(ring_, ring_->var(name));
    }
    if (accept('(')) {
      Poly<K> f = expr();
      expect(')');
      return f;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string digits() {
    skip_ws();
    std::string s;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
      s += src_[pos_++];
    if (s.empty()) fail("expected a number");
    return s;
  }
  long integer() { return std::stol(digits()); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("parse error at offset " + std::to_string(pos_) + ": " + msg +
                                " in \"" + src_ + "\"");
  }

  RingPtr ring_;
  const std::string& src_;
  size_t pos_ = 0;
};

template <class K>
Poly<K> parse_poly(const RingPtr& ring, const std::string& src) {
  return PolyParser<K>(ring, src).parse();
}

}  // namespace neron
