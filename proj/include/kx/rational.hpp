#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "kx/core.hpp"

namespace kx {

// Exact rational on int64 numerator/denominator.  All oracle values,
// scale factors and approximation ratios go through this type; there is
// no floating point anywhere on the optimization path.  Values that
// leave the int64 range after reduction raise OverflowError rather than
// degrading silently.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(long long n) : num_(n) {}  // NOLINT: implicit by design of call sites
  Rational(long long n, long long d) {
    if (d == 0) throw DomainError("rational with zero denominator");
    norm(static_cast<__int128>(n), static_cast<__int128>(d));
  }

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ < 0 ? -1 : num_ > 0 ? 1 : 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.den_ +
                    static_cast<__int128>(b.num_) * a.den_,
                static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.den_ -
                    static_cast<__int128>(b.num_) * a.den_,
                static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.num_,
                static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DomainError("rational division by zero");
    return make(static_cast<__int128>(a.num_) * b.den_,
                static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const { return make(-static_cast<__int128>(num_), den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less
           : l > r ? std::strong_ordering::greater
                   : std::strong_ordering::equal;
  }

  // floor(num/den), exact for negatives.
  long long floor() const {
    long long q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  // floor(*this / d); d must be positive.
  long long floor_div(const Rational& d) const {
    if (d.sign() <= 0) throw ContractError("floor_div by non-positive rational");
    return (*this / d).floor();
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Fixed-point decimal rendering (round half away from zero).
  std::string decimal(int places) const {
    __int128 scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    __int128 v = static_cast<__int128>(num_) * scale;
    __int128 d = den_;
    bool neg = v < 0;
    if (neg) v = -v;
    __int128 scaled = (v + d / 2) / d;
    __int128 ip = scaled / scale, fp = scaled % scale;
    std::string frac(places, '0');
    for (int i = places - 1; i >= 0; --i, fp /= 10)
      frac[i] = static_cast<char>('0' + static_cast<int>(fp % 10));
    std::string out = std::to_string(static_cast<long long>(ip));
    if (places > 0) out += "." + frac;
    return neg ? "-" + out : out;
  }

  // Accepts "p", "p/q" and decimal literals like "0.25".
  static Rational parse(const std::string& s) {
    if (s.empty()) throw DomainError("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      return Rational(parse_ll(s.substr(0, slash)), parse_ll(s.substr(slash + 1)));
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
      if (fp.empty() || fp.size() > 18) throw DomainError("bad decimal literal: " + s);
      long long den = 1;
      for (size_t i = 0; i < fp.size(); ++i) den *= 10;
      long long whole = ip.empty() || ip == "-" ? 0 : parse_ll(ip);
      long long frac = parse_ll(fp);
      bool neg = !ip.empty() && ip[0] == '-';
      __int128 num = static_cast<__int128>(whole < 0 ? -whole : whole) * den + frac;
      if (neg || whole < 0) num = -num;
      return make(num, den);
    }
    return Rational(parse_ll(s));
  }

 private:
  long long num_ = 0;
  long long den_ = 1;

  static long long parse_ll(const std::string& s) {
    size_t pos = 0;
    long long v;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw DomainError("bad integer literal: " + s);
    }
    if (pos != s.size()) throw DomainError("bad integer literal: " + s);
    return v;
  }

  static Rational make(__int128 n, __int128 d) {
    Rational r;
    r.norm(n, d);
    return r;
  }

  void norm(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 g = gcd128(a, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim)
      throw OverflowError("rational exceeds 64-bit range");
    num_ = static_cast<long long>(n);
    den_ = static_cast<long long>(d);
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
};

}  // namespace kx
