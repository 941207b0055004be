#pragma once

// Line-oriented text formats. Values are written in shortest round-trip
// decimal form, so write -> read -> write reproduces the bytes.
//
//   SO3FT v1 B=<B> flavor=<real|complex>    then  l m n <value> | l m n <re> <im>   (nonzero entries)
//   S2FT v1 B=<B> flavor=real               then  l m <value>                       (nonzero entries)
//   SO3GRID v1 B=<B> flavor=<real|complex>  then  j1 k j2 <value> | j1 k j2 <re> <im>   (every node)
//   S2GRID v1 B=<B>                         then  k j <value>                        (every node)
//
// Blank lines and lines starting with '#' are ignored on input. Malformed
// input raises FormatError naming the offending line.

#include <charconv>
#include <cmath>
#include <complex>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <variant>
#include <vector>

#include "so3ft/coefficients.hpp"

namespace so3ft {

class FormatError : public std::runtime_error {
 public:
  FormatError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

using AnySO3Coefficients = std::variant<RealCoefficients, ComplexCoefficients>;
using AnySO3Samples = std::variant<RealSamples, ComplexSamples>;

/// Shortest decimal string that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

struct Header {
  std::string magic;
  int bandwidth = 0;
  Flavor flavor = Flavor::real;
};

template <class T>
T parse_number(const std::string& token, int line) {
  T v{};
  const char* end = token.data() + token.size();
  const auto res = std::from_chars(token.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw FormatError(line, "cannot parse number '" + token + "'");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) throw FormatError(line, "non-finite value '" + token + "'");
  }
  return v;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank, non-comment line split on whitespace; false at EOF.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      tokens.clear();
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (tokens.empty() || tokens[0][0] == '#') continue;
      return true;
    }
    return false;
  }

  int line() const { return line_no_; }
  [[noreturn]] void fail(const std::string& what) const { throw FormatError(line_no_, what); }

  template <class T>
  T number(const std::string& token) const {
    return parse_number<T>(token, line_no_);
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

inline std::string_view strip_key(const LineReader& r, const std::string& token, std::string_view key) {
  if (token.rfind(key, 0) != 0) r.fail("expected '" + std::string(key) + "...' in header, got '" + token + "'");
  return std::string_view(token).substr(key.size());
}

inline Header read_header(LineReader& r, std::string_view magic, bool has_flavor) {
  std::vector<std::string> t;
  if (!r.next(t)) throw FormatError(r.line(), "missing '" + std::string(magic) + " v1' header");
  const std::size_t expected = has_flavor ? 4 : 3;
  if (t[0] != magic) r.fail("expected '" + std::string(magic) + "' header, got '" + t[0] + "'");
  if (t.size() < 2 || t[1] != "v1") r.fail("unsupported version");
  if (t.size() != expected && !(magic == "S2FT" && t.size() == 4)) r.fail("malformed header");
  Header h;
  h.magic = t[0];
  h.bandwidth = r.number<int>(std::string(strip_key(r, t[2], "B=")));
  if (h.bandwidth < 1 || h.bandwidth > kMaxBandwidth) r.fail("bandwidth out of range");
  if (t.size() == 4) {
    try {
      h.flavor = parse_flavor(std::string(strip_key(r, t[3], "flavor=")));
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
    if (magic == "S2FT" && h.flavor != Flavor::real) r.fail("S2FT files are real");
  }
  return h;
}

inline std::string header_line(std::string_view magic, int bandwidth, std::string_view flavor) {
  std::string s = std::string(magic) + " v1 B=" + std::to_string(bandwidth);
  if (!flavor.empty()) s += " flavor=" + std::string(flavor);
  return s;
}

template <class Scalar>
void write_value(std::ostream& out, const Scalar& v) {
  if constexpr (std::is_same_v<Scalar, double>) {
    out << ' ' << format_double(v);
  } else {
    out << ' ' << format_double(v.real()) << ' ' << format_double(v.imag());
  }
}

template <class Scalar>
Scalar read_value(const LineReader& r, const std::vector<std::string>& t, std::size_t first) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return r.template number<double>(t[first]);
  } else {
    return {r.template number<double>(t[first]), r.template number<double>(t[first + 1])};
  }
}

template <class Scalar>
constexpr std::size_t value_width() {
  return std::is_same_v<Scalar, double> ? 1 : 2;
}

template <class Scalar>
SO3Coefficients<Scalar> read_so3_body(LineReader& r, int bandwidth) {
  SO3Coefficients<Scalar> c(bandwidth);
  std::vector<std::vector<char>> seen(static_cast<std::size_t>(bandwidth));
  for (int l = 0; l < bandwidth; ++l) seen[static_cast<std::size_t>(l)].assign((2 * l + 1) * (2 * l + 1), 0);
  std::vector<std::string> t;
  while (r.next(t)) {
    if (t.size() != 3 + value_width<Scalar>()) r.fail("expected 'l m n' and " + std::to_string(value_width<Scalar>()) + " value(s)");
    const int l = r.number<int>(t[0]), m = r.number<int>(t[1]), n = r.number<int>(t[2]);
    if (l < 0 || l >= bandwidth || std::abs(m) > l || std::abs(n) > l) r.fail("index out of range");
    char& flag = seen[static_cast<std::size_t>(l)][static_cast<std::size_t>((m + l) * (2 * l + 1) + n + l)];
    if (flag) r.fail("duplicate entry");
    flag = 1;
    c(l, m, n) = read_value<Scalar>(r, t, 3);
  }
  return c;
}

template <class Scalar>
SO3Samples<Scalar> read_samples_body(LineReader& r, int bandwidth) {
  SO3Samples<Scalar> s(bandwidth);
  const int side = s.side();
  std::vector<char> seen(s.values().size(), 0);
  std::size_t count = 0;
  std::vector<std::string> t;
  while (r.next(t)) {
    if (t.size() != 3 + value_width<Scalar>()) r.fail("expected 'j1 k j2' and " + std::to_string(value_width<Scalar>()) + " value(s)");
    const int j1 = r.number<int>(t[0]), k = r.number<int>(t[1]), j2 = r.number<int>(t[2]);
    if (j1 < 0 || j1 >= side || k < 0 || k >= side || j2 < 0 || j2 >= side) r.fail("grid index out of range");
    const std::size_t i = s.index(j1, k, j2);
    if (seen[i]) r.fail("duplicate node");
    seen[i] = 1;
    ++count;
    s.values()[i] = read_value<Scalar>(r, t, 3);
  }
  if (count != seen.size())
    throw FormatError(r.line(), "expected " + std::to_string(seen.size()) + " nodes, got " + std::to_string(count));
  return s;
}

}  // namespace detail

template <class Scalar>
void write_coefficients(std::ostream& out, const SO3Coefficients<Scalar>& c) {
  out << detail::header_line("SO3FT", c.bandwidth(), to_string(SO3Coefficients<Scalar>::flavor)) << '\n';
  for (int l = 0; l < c.bandwidth(); ++l)
    for (int m = -l; m <= l; ++m)
      for (int n = -l; n <= l; ++n) {
        const Scalar v = c(l, m, n);
        if (v == Scalar(0.0)) continue;
        out << l << ' ' << m << ' ' << n;
        detail::write_value(out, v);
        out << '\n';
      }
}

inline void write_coefficients(std::ostream& out, const S2Coefficients& c) {
  out << detail::header_line("S2FT", c.bandwidth(), "real") << '\n';
  for (int l = 0; l < c.bandwidth(); ++l)
    for (int m = -l; m <= l; ++m) {
      if (c(l, m) == 0.0) continue;
      out << l << ' ' << m;
      detail::write_value(out, c(l, m));
      out << '\n';
    }
}

template <class Scalar>
void write_samples(std::ostream& out, const SO3Samples<Scalar>& s) {
  const Flavor flavor = std::is_same_v<Scalar, double> ? Flavor::real : Flavor::complex;
  out << detail::header_line("SO3GRID", s.bandwidth(), to_string(flavor)) << '\n';
  const int side = s.side();
  for (int j1 = 0; j1 < side; ++j1)
    for (int k = 0; k < side; ++k)
      for (int j2 = 0; j2 < side; ++j2) {
        out << j1 << ' ' << k << ' ' << j2;
        detail::write_value(out, s(j1, k, j2));
        out << '\n';
      }
}

inline void write_samples(std::ostream& out, const S2Samples& s) {
  out << detail::header_line("S2GRID", s.bandwidth(), "") << '\n';
  for (int k = 0; k < s.side(); ++k)
    for (int j = 0; j < s.side(); ++j) {
      out << k << ' ' << j;
      detail::write_value(out, s(k, j));
      out << '\n';
    }
}

inline AnySO3Coefficients read_so3_coefficients(std::istream& in) {
  detail::LineReader r(in);
  const detail::Header h = detail::read_header(r, "SO3FT", true);
  if (h.flavor == Flavor::real) return detail::read_so3_body<double>(r, h.bandwidth);
  return detail::read_so3_body<std::complex<double>>(r, h.bandwidth);
}

inline S2Coefficients read_s2_coefficients(std::istream& in) {
  detail::LineReader r(in);
  const detail::Header h = detail::read_header(r, "S2FT", false);
  S2Coefficients c(h.bandwidth);
  std::vector<std::vector<char>> seen(static_cast<std::size_t>(h.bandwidth));
  for (int l = 0; l < h.bandwidth; ++l) seen[static_cast<std::size_t>(l)].assign(2 * l + 1, 0);
  std::vector<std::string> t;
  while (r.next(t)) {
    if (t.size() != 3) r.fail("expected 'l m value'");
    const int l = r.number<int>(t[0]), m = r.number<int>(t[1]);
    if (l < 0 || l >= h.bandwidth || std::abs(m) > l) r.fail("index out of range");
    char& flag = seen[static_cast<std::size_t>(l)][static_cast<std::size_t>(m + l)];
    if (flag) r.fail("duplicate entry");
    flag = 1;
    c(l, m) = r.number<double>(t[2]);
  }
  return c;
}

inline AnySO3Samples read_so3_samples(std::istream& in) {
  detail::LineReader r(in);
  const detail::Header h = detail::read_header(r, "SO3GRID", true);
  if (h.flavor == Flavor::real) return detail::read_samples_body<double>(r, h.bandwidth);
  return detail::read_samples_body<std::complex<double>>(r, h.bandwidth);
}

inline S2Samples read_s2_samples(std::istream& in) {
  detail::LineReader r(in);
  const detail::Header h = detail::read_header(r, "S2GRID", false);
  S2Samples s(h.bandwidth);
  std::vector<char> seen(s.values().size(), 0);
  std::size_t count = 0;
  std::vector<std::string> t;
  while (r.next(t)) {
    if (t.size() != 3) r.fail("expected 'k j value'");
    const int k = r.number<int>(t[0]), j = r.number<int>(t[1]);
    if (k < 0 || k >= s.side() || j < 0 || j >= s.side()) r.fail("grid index out of range");
    const std::size_t i = static_cast<std::size_t>(k * s.side() + j);
    if (seen[i]) r.fail("duplicate node");
    seen[i] = 1;
    ++count;
    s(k, j) = r.number<double>(t[2]);
  }
  if (count != seen.size())
    throw FormatError(r.line(), "expected " + std::to_string(seen.size()) + " nodes, got " + std::to_string(count));
  return s;
}

}  // namespace so3ft
