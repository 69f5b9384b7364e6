#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace neron {

// Prime field element; carries its modulus so templated code needs no field
// context object.  Invariant: 0 <= v < p, or p == 0 for the context-free zero
// produced by value-initialization (absorbed on first arithmetic contact).
class Fp {
 public:
  Fp() : v_(0), p_(0) {}
  Fp(long long v, long long p) : p_(p) {
    if (p <= 1) throw std::invalid_argument("modulus must be a prime > 1");
    v_ = v % p;
    if (v_ < 0) v_ += p;
  }

  long long value() const { return v_; }
  long long modulus() const { return p_; }

  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  Fp operator-() const { return raw(v_ == 0 ? 0 : p_ - v_, p_); }
  Fp& operator+=(const Fp& o) {
    join(o);
    if (p_ == 0) return *this;
    v_ += o.v_;
    if (v_ >= p_) v_ -= p_;
    return *this;
  }
  Fp& operator-=(const Fp& o) {
    join(o);
    if (p_ == 0) return *this;
    v_ -= o.v_;
    if (v_ < 0) v_ += p_;
    return *this;
  }
  Fp& operator*=(const Fp& o) {
    join(o);
    if (p_ == 0) return *this;
    v_ = mulmod(v_, o.v_, p_);
    return *this;
  }
  Fp& operator/=(const Fp& o) { return *this *= o.inv(); }
  friend Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
  friend Fp operator/(Fp a, const Fp& b) { return a /= b; }

  Fp inv() const {
    if (v_ == 0) throw std::domain_error("inverse of zero");
    // extended Euclid; p_ prime so gcd is 1
    long long a = v_, b = p_, x0 = 1, x1 = 0;
    while (b != 0) {
      long long t = a / b;
      a -= t * b;
      std::swap(a, b);
      x0 -= t * x1;
      std::swap(x0, x1);
    }
    return Fp(x0, p_);
  }

  friend bool operator==(const Fp& a, const Fp& b) {
    if (a.p_ != 0 && b.p_ != 0 && a.p_ != b.p_)
      throw std::invalid_argument("mixed moduli");
    return a.v_ == b.v_;
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

  std::string str() const { return std::to_string(v_); }

 private:
  static Fp raw(long long v, long long p) {
    Fp r;
    r.v_ = v;
    r.p_ = p;
    return r;
  }
  void join(const Fp& o) {
    if (p_ == 0) p_ = o.p_;
    else if (o.p_ != 0 && o.p_ != p_)
      throw std::invalid_argument("mixed moduli");
  }
  static long long mulmod(long long a, long long b, long long p) {
    return static_cast<long long>(static_cast<__int128>(a) * b % p);
  }

  long long v_;
  long long p_;
};

}  // namespace neron
