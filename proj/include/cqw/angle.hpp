#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <regex>
#include <string>
#include <string_view>
#include <system_error>

#include "cqw/error.hpp"

namespace cqw {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Rotation angle held as an exact rational multiple of pi plus a real offset.
///
/// The walk's phase structure depends on whether an angle is an exact
/// rational of pi (periodic revivals, flat bands at odd multiples of pi/T),
/// so literals such as 7pi/5 stay symbolic and disorder enters only through
/// the offset. The fraction is always kept in lowest terms with a positive
/// denominator.
class Angle {
 public:
  constexpr Angle() = default;

  Angle(std::int64_t numerator, std::int64_t denominator, double offset = 0.0)
      : numerator_(numerator), denominator_(denominator), offset_(offset) {
    if (denominator_ == 0) {
      throw InvalidArgument("angle denominator must be nonzero");
    }
    if (denominator_ < 0) {
      numerator_ = -numerator_;
      denominator_ = -denominator_;
    }
    const std::int64_t g = std::gcd(numerator_, denominator_);
    if (g > 1) {
      numerator_ /= g;
      denominator_ /= g;
    }
  }

  static Angle from_radians(double value) { return Angle(0, 1, value); }

  std::int64_t numerator() const noexcept { return numerator_; }
  std::int64_t denominator() const noexcept { return denominator_; }
  double offset() const noexcept { return offset_; }

  // True when the angle is a pure rational multiple of pi.
  bool exact() const noexcept { return offset_ == 0.0; }

  double value() const noexcept {
    return kPi * static_cast<double>(numerator_) /
               static_cast<double>(denominator_) +
           offset_;
  }

  Angle plus(double delta) const {
    Angle out = *this;
    out.offset_ += delta;
    return out;
  }

  /// The same angle with its value wrapped into [0, 2pi).
  Angle reduced() const {
    const std::int64_t period = 2 * denominator_;
    std::int64_t num = numerator_ % period;
    if (num < 0) num += period;
    Angle out(num, denominator_, offset_);
    if (out.offset_ == 0.0) return out;
    for (int pass = 0; pass < 2; ++pass) {
      const double v = out.value();
      if (v >= 0.0 && v < kTwoPi) break;
      out.offset_ -= kTwoPi * std::floor(v / kTwoPi);
      if (out.value() >= kTwoPi) out.offset_ -= kTwoPi;
      if (out.value() < 0.0) out.offset_ += kTwoPi;
    }
    return out;
  }

  friend bool operator==(const Angle&, const Angle&) = default;

 private:
  std::int64_t numerator_ = 0;
  std::int64_t denominator_ = 1;
  double offset_ = 0.0;
};

namespace detail {

inline std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_decimal(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size() ||
      !std::isfinite(v)) {
    throw InvalidArgument("not a number: '" + std::string(text) + "'");
  }
  return v;
}

inline std::int64_t parse_integer(const std::string& text) {
  std::int64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw InvalidArgument("integer out of range in angle literal: '" + text + "'");
  }
  return v;
}

}  // namespace detail

/// Canonical text form: "7pi/5", "pi", "-pi/2", "0"; decimals print in
/// shortest round-trip form; mixed angles print as "7pi/5+0.25".
inline std::string to_string(const Angle& a) {
  std::string out;
  if (a.numerator() != 0 || a.exact()) {
    const std::int64_t num = a.numerator();
    if (num == 0) {
      out = "0";
    } else {
      if (num < 0) out += '-';
      const std::int64_t mag = num < 0 ? -num : num;
      if (mag != 1) out += std::to_string(mag);
      out += "pi";
      if (a.denominator() != 1) out += "/" + std::to_string(a.denominator());
    }
  }
  if (!a.exact()) {
    if (out.empty()) return detail::shortest(a.offset());
    if (a.offset() >= 0.0) out += '+';
    out += detail::shortest(a.offset());
  }
  return out;
}

/// Parses an angle literal. Accepted forms: "pi", "2pi", "7pi/5", "7*pi/5",
/// "-pi/2", an optional decimal tail ("pi/3+0.1"), or plain decimal radians.
inline Angle parse_angle(std::string_view text) {
  std::string s;
  s.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == ' ' || c == '\t') continue;
    // UTF-8 for the Greek letter pi.
    if (static_cast<unsigned char>(c) == 0xCF && i + 1 < text.size() &&
        static_cast<unsigned char>(text[i + 1]) == 0x80) {
      s += "pi";
      ++i;
      continue;
    }
    s += c;
  }
  if (s.empty()) throw InvalidArgument("empty angle literal");

  static const std::regex rational(R"(^([+-]?)(\d*)\*?pi(?:/(\d+))?([+-].+)?$)",
                                   std::regex::icase);
  std::smatch m;
  if (std::regex_match(s, m, rational)) {
    std::int64_t num = m[2].length() > 0 ? detail::parse_integer(m[2].str()) : 1;
    if (m[1].str() == "-") num = -num;
    const std::int64_t den = m[3].matched ? detail::parse_integer(m[3].str()) : 1;
    if (den == 0) throw InvalidArgument("angle denominator must be nonzero: '" + s + "'");
    const double offset = m[4].matched ? detail::parse_decimal(m[4].str()) : 0.0;
    return Angle(num, den, offset);
  }
  return Angle::from_radians(detail::parse_decimal(s));
}

}  // namespace cqw
