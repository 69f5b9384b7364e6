#pragma once

#include <gmp.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace neron {

// Exact rational number, value semantics over mpq_t.  Always canonical
// (gcd(num,den)=1, den>0), so operator== is bitwise equality of limbs.
class Rat {
 public:
  Rat() { mpq_init(q_); }
  Rat(long n) {
    mpq_init(q_);
    mpq_set_si(q_, n, 1);
  }
  Rat(long n, unsigned long d) {
    mpq_init(q_);
    mpq_set_si(q_, n, d);
    mpq_canonicalize(q_);
  }
  explicit Rat(const std::string& s) {
    mpq_init(q_);
    if (mpq_set_str(q_, s.c_str(), 10) != 0) {
      mpq_clear(q_);
      throw std::invalid_argument("bad rational literal: " + s);
    }
    mpq_canonicalize(q_);
  }
  Rat(const Rat& o) {
    mpq_init(q_);
    mpq_set(q_, o.q_);
  }
  Rat(Rat&& o) noexcept {
    mpq_init(q_);
    mpq_swap(q_, o.q_);
  }
  Rat& operator=(const Rat& o) {
    if (this != &o) mpq_set(q_, o.q_);
    return *this;
  }
  Rat& operator=(Rat&& o) noexcept {
    mpq_swap(q_, o.q_);
    return *this;
  }
  ~Rat() { mpq_clear(q_); }

  bool is_zero() const { return mpq_sgn(q_) == 0; }
  bool is_one() const { return mpq_cmp_si(q_, 1, 1) == 0; }
  int sgn() const { return mpq_sgn(q_); }

  Rat operator-() const {
    Rat r;
    mpq_neg(r.q_, q_);
    return r;
  }
  Rat& operator+=(const Rat& o) {
    mpq_add(q_, q_, o.q_);
    return *this;
  }
  Rat& operator-=(const Rat& o) {
    mpq_sub(q_, q_, o.q_);
    return *this;
  }
  Rat& operator*=(const Rat& o) {
    mpq_mul(q_, q_, o.q_);
    return *this;
  }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    mpq_div(q_, q_, o.q_);
    return *this;
  }
  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  Rat inv() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    Rat r;
    mpq_inv(r.q_, q_);
    return r;
  }

  friend bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.q_, b.q_) != 0; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return mpq_cmp(a.q_, b.q_) < 0; }

  // "a" when the denominator is 1, "a/b" otherwise; b > 0.
  std::string str() const {
    char* s = mpq_get_str(nullptr, 10, q_);
    std::string out(s);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(s, out.size() + 1);
    return out;
  }

  bool denominator_is_one() const { return mpz_cmp_si(mpq_denref(q_), 1) == 0; }
  double to_double() const { return mpq_get_d(q_); }

  // Accumulates gcd of numerators and lcm of denominators; dividing a
  // coefficient list by the resulting g/l leaves coprime integers.
  void content_step(mpz_t g, mpz_t l) const {
    mpz_gcd(g, g, mpq_numref(q_));
    mpz_lcm(l, l, mpq_denref(q_));
  }
  static Rat from_mpz_frac(const mpz_t n, const mpz_t d) {
    Rat r;
    mpz_set(mpq_numref(r.q_), n);
    mpz_set(mpq_denref(r.q_), d);
    mpq_canonicalize(r.q_);
    return r;
  }

 private:
  mpq_t q_;
};

}  // namespace neron
