#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "symcone/errors.hpp"

namespace symcone {

/// Exact rational number. Always reduced with a positive denominator.
class Rational {
 public:
  Rational() = default;

  template <std::integral I>
  Rational(I value) : q_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)

  Rational(long num, long den) {
    require(den != 0, ErrorKind::MalformedInput, "zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }

  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
  explicit Rational(const mpz_class& z) : q_(z) {}

  /// Parses "p/q" or "p" (optional leading '-'). Rejects decimals, exponents
  /// and zero denominators.
  static Rational parse(std::string_view text) {
    auto bad = [&](const char* why) {
      fail(ErrorKind::MalformedInput, "bad rational \"" + std::string(text) + "\": " + why);
    };
    if (text.empty()) bad("empty");
    auto slash = text.find('/');
    auto digits_ok = [](std::string_view s, bool allow_sign) {
      if (!s.empty() && allow_sign && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    std::string_view num = text.substr(0, slash);
    if (!digits_ok(num, true)) bad("numerator is not an integer");
    std::string num_s(num);
    if (num_s.front() == '+') num_s.erase(0, 1);
    mpz_class n(num_s, 10);
    mpz_class d(1);
    if (slash != std::string_view::npos) {
      std::string_view den = text.substr(slash + 1);
      if (!digits_ok(den, false)) bad("denominator is not a positive integer");
      d = mpz_class(std::string(den), 10);
      if (d == 0) bad("zero denominator");
    }
    mpq_class q(n, d);
    q.canonicalize();
    return Rational(std::move(q));
  }

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  const mpq_class& get() const noexcept { return q_; }
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  double to_double() const { return q_.get_d(); }

  Rational abs() const { return Rational(mpq_class(::abs(q_))); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    require(!o.is_zero(), ErrorKind::Singularity, "division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class q_{0};
};

/// 2^-n as an exact rational.
inline Rational dyadic(unsigned n) {
  mpz_class den = 1;
  den <<= n;
  return Rational(mpq_class(mpz_class(1), den));
}

}  // namespace symcone
