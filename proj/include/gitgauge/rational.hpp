#pragma once

#include <gmpxx.h>

#include <climits>
#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gitgauge {

/// Thrown for malformed input (bad rational strings, dimension mismatches,
/// violated preconditions). The CLI maps it to exit code 1.
class input_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a well-formed request has no finite answer (unbounded
/// families, empty semistable loci). The CLI maps it to exit code 2.
class infeasible_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Exact rational number, always reduced with positive denominator.
///
/// Thin value wrapper over GMP's mpq_class so that every arithmetic
/// expression materializes a reduced value (no expression templates leak
/// into `auto` variables).
class Rational {
public:
  Rational() = default;
  Rational(int v) : value_(v) {}                 // NOLINT(google-explicit-constructor)
  Rational(long v) : value_(v) {}                // NOLINT(google-explicit-constructor)
  Rational(long long v) : value_(mpz_from(v)) {} // NOLINT(google-explicit-constructor)
  Rational(const mpz_class& v) : value_(v) {}    // NOLINT(google-explicit-constructor)
  explicit Rational(const mpq_class& v) : value_(v) { value_.canonicalize(); }

  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw input_error("rational with zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }
  Rational(long long num, long long den) : Rational(mpz_from(num), mpz_from(den)) {}

  /// Parses "p/q" or "p" (optional leading minus). Decimal notation is rejected.
  static Rational parse(std::string_view text) {
    auto fail = [&] { return input_error("malformed rational '" + std::string(text) + "'"); };
    if (text.empty()) throw fail();
    auto valid_int = [](std::string_view s, bool allow_sign) {
      if (s.empty()) return false;
      std::size_t i = 0;
      if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
      if (i == s.size()) return false;
      for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
      return true;
    };
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false)) throw fail();
    std::string n(num);
    if (!n.empty() && n[0] == '+') n.erase(0, 1);
    mpz_class d{std::string(den)};
    if (d == 0) throw fail();
    return Rational(mpz_class(n), d);
  }

  const mpq_class& raw() const { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }

  /// "p" for integers, "p/q" otherwise.
  std::string str() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  Rational floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return Rational(q);
  }
  Rational ceil() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return Rational(q);
  }
  Rational abs() const { return sign() < 0 ? -*this : *this; }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
  static mpz_class mpz_from(long long v) {
    mpz_class z;
    // mpz_set_si takes a long; long long may be wider on some platforms.
    if (v >= LONG_MIN && v <= LONG_MAX) {
      z = static_cast<long>(v);
    } else {
      z = std::to_string(v);
    }
    return z;
  }

  mpq_class value_;
};

using RationalVector = std::vector<Rational>;

inline RationalVector to_rational(const std::vector<long long>& v) {
  return RationalVector(v.begin(), v.end());
}

inline std::string to_string(const RationalVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i].str();
  }
  return out + ")";
}

}  // namespace gitgauge
