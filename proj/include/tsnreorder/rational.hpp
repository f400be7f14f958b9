#pragma once

// Exact rational numbers with a +infinity sentinel.
//
// All times (seconds) and sizes (bytes) in the library are held as Rat so that
// bound computations are bit-exact and reproducible across runs.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace tsnreorder {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Rat {
 public:
  Rat() = default;
  Rat(int v) : value_(v) {}                // NOLINT(google-explicit-constructor)
  Rat(long v) : value_(v) {}               // NOLINT(google-explicit-constructor)
  Rat(long long v) : value_(v) {}          // NOLINT(google-explicit-constructor)
  Rat(unsigned long v) : value_(v) {}      // NOLINT(google-explicit-constructor)
  Rat(unsigned long long v) : value_(v) {} // NOLINT(google-explicit-constructor)
  explicit Rat(BigRational v) : value_(std::move(v)) {}
  Rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    value_ = BigRational(num, den);
  }

  static Rat infinity() {
    Rat r;
    r.infinite_ = true;
    return r;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  // Only meaningful for finite values.
  const BigRational& value() const {
    require_finite("value");
    return value_;
  }
  BigInt numerator() const { return boost::multiprecision::numerator(value()); }
  BigInt denominator() const { return boost::multiprecision::denominator(value()); }

  bool is_zero() const { return !infinite_ && value_ == 0; }
  bool is_integer() const { return !infinite_ && denominator() == 1; }
  int sign() const {
    if (infinite_) return 1;
    return value_ < 0 ? -1 : (value_ > 0 ? 1 : 0);
  }

  double to_double() const {
    if (infinite_) return std::numeric_limits<double>::infinity();
    return value_.convert_to<double>();
  }

  Rat operator-() const {
    require_finite("negation");
    return Rat(BigRational(-value_));
  }

  Rat& operator+=(const Rat& o) {
    if (infinite_ || o.infinite_) {
      infinite_ = true;
      value_ = 0;
    } else {
      value_ += o.value_;
    }
    return *this;
  }
  Rat& operator-=(const Rat& o) {
    if (o.infinite_) throw std::domain_error("Rat: subtracting infinity");
    if (!infinite_) value_ -= o.value_;
    return *this;
  }
  Rat& operator*=(const Rat& o) {
    if (infinite_ || o.infinite_) {
      const Rat& fin = infinite_ ? o : *this;
      if (fin.infinite_ || fin.value_ > 0) {
        infinite_ = true;
        value_ = 0;
        return *this;
      }
      throw std::domain_error("Rat: infinity times non-positive value");
    }
    value_ *= o.value_;
    return *this;
  }
  Rat& operator/=(const Rat& o) {
    if (o.infinite_) throw std::domain_error("Rat: division by infinity");
    if (o.value_ == 0) throw std::domain_error("Rat: division by zero");
    if (infinite_) {
      if (o.value_ < 0) throw std::domain_error("Rat: infinity divided by negative value");
      return *this;
    }
    value_ /= o.value_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    if (a.infinite_ || b.infinite_) {
      if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
      return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  void require_finite(const char* what) const {
    if (infinite_) throw std::domain_error(std::string("Rat: ") + what + " of infinity");
  }

  BigRational value_{0};
  bool infinite_ = false;
};

inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }
inline Rat min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline Rat positive_part(const Rat& x) { return x.sign() < 0 ? Rat(0) : x; }

inline BigInt floor_int(const Rat& x) {
  BigInt n = x.numerator();
  BigInt d = x.denominator();
  BigInt q = n / d;  // truncates toward zero
  if (n % d != 0 && n < 0) q -= 1;
  return q;
}

inline BigInt ceil_int(const Rat& x) {
  BigInt n = x.numerator();
  BigInt d = x.denominator();
  BigInt q = n / d;
  if (n % d != 0 && n > 0) q += 1;
  return q;
}

inline Rat from_int(const BigInt& v) { return Rat(v, BigInt(1)); }

inline Rat pow10(int e) {
  BigInt p = 1;
  for (int i = 0; i < (e < 0 ? -e : e); ++i) p *= 10;
  return e < 0 ? Rat(BigInt(1), p) : from_int(p);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline Rat parse_decimal(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  BigInt digits = 0;
  int scale = 0;
  bool any = false;
  bool dot = false;
  std::size_t i = 0;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any = true;
      if (dot) ++scale;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!any) throw ParseError("not a number: '" + std::string(whole) + "'");
  int exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw ParseError("not a number: '" + std::string(whole) + "'");
    std::string_view rest = s.substr(i + 1);
    bool eneg = false;
    if (!rest.empty() && (rest.front() == '+' || rest.front() == '-')) {
      eneg = rest.front() == '-';
      rest.remove_prefix(1);
    }
    if (rest.empty() || rest.size() > 3) throw ParseError("bad exponent: '" + std::string(whole) + "'");
    for (char c : rest) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw ParseError("bad exponent: '" + std::string(whole) + "'");
      }
      exponent = exponent * 10 + (c - '0');
    }
    if (eneg) exponent = -exponent;
  }
  Rat r = from_int(digits) * pow10(exponent - scale);
  return neg ? -r : r;
}

}  // namespace detail

/// Parses "6400", "-1.5", "125e6", "0.5e-6", "1/3" or "inf" exactly.
inline Rat parse_rat(std::string_view text) {
  std::string_view s = detail::trim(text);
  if (s == "inf" || s == "+inf" || s == "infinity") return Rat::infinity();
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rat num = detail::parse_decimal(detail::trim(s.substr(0, slash)), text);
    Rat den = detail::parse_decimal(detail::trim(s.substr(slash + 1)), text);
    if (den.is_zero()) throw ParseError("zero denominator: '" + std::string(text) + "'");
    return num / den;
  }
  return detail::parse_decimal(s, text);
}

/// Parses a duration in seconds; accepts an optional unit suffix s, ms, us or ns.
inline Rat parse_time(std::string_view text) {
  std::string_view s = detail::trim(text);
  auto ends_with = [&](std::string_view suf) {
    return s.size() > suf.size() && s.substr(s.size() - suf.size()) == suf;
  };
  if (ends_with("ms")) return parse_rat(s.substr(0, s.size() - 2)) * pow10(-3);
  if (ends_with("us")) return parse_rat(s.substr(0, s.size() - 2)) * pow10(-6);
  if (ends_with("ns")) return parse_rat(s.substr(0, s.size() - 2)) * pow10(-9);
  if (ends_with("s") && s != "s") return parse_rat(s.substr(0, s.size() - 1));
  return parse_rat(s);
}

/// Exact text form: a terminating decimal when one exists, otherwise "p/q".
inline std::string to_string(const Rat& r) {
  if (r.is_infinite()) return "inf";
  BigInt num = r.numerator();
  BigInt den = r.denominator();
  if (den == 1) return num.str();
  BigInt d = den;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return num.str() + "/" + den.str();
  int places = twos > fives ? twos : fives;
  BigInt scaled = num * pow10(places).numerator() / den;
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string digits = scaled.str();
  if (static_cast<int>(digits.size()) <= places) {
    digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
  }
  digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  return (neg ? "-" : "") + digits;
}

/// Rounds half away from zero to `places` decimals and prints with exactly that many.
inline std::string to_fixed(const Rat& r, int places) {
  if (r.is_infinite()) return "inf";
  Rat scaled = r * pow10(places);
  bool neg = scaled.sign() < 0;
  if (neg) scaled = -scaled;
  BigInt q = floor_int(scaled + Rat(BigInt(1), BigInt(2)));
  std::string digits = q.str();
  if (places > 0) {
    if (static_cast<int>(digits.size()) <= places) {
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  }
  if (neg && q != 0) digits.insert(0, "-");
  return digits;
}

inline Rat micros(const Rat& seconds) { return seconds * pow10(6); }

inline std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << to_string(r); }

namespace literals {
inline Rat operator""_r(const char* s, std::size_t n) { return parse_rat(std::string_view(s, n)); }
inline Rat operator""_us(const char* s, std::size_t n) {
  return parse_rat(std::string_view(s, n)) * pow10(-6);
}
}  // namespace literals

}  // namespace tsnreorder
