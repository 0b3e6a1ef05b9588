#include "charlab/rational.hpp"

#include "charlab/error.hpp"
#include "charlab/rng.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace charlab {

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  if (s.empty()) throw ParameterError("malformed number: '" + std::string(whole) + "'");
  std::int64_t v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParameterError("malformed number: '" + std::string(whole) + "'");
    if (v > (INT64_MAX - 9) / 10) throw ParameterError("number too large: '" + std::string(whole) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::int64_t num = parse_int(s.substr(0, slash), text);
    std::int64_t den = parse_int(s.substr(slash + 1), text);
    if (den == 0) throw ParameterError("zero denominator: '" + std::string(text) + "'");
    Rational r(num, den);
    return negative ? -r : r;
  }
  std::int64_t exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view ex = s.substr(e + 1);
    bool neg_exp = false;
    if (!ex.empty() && (ex.front() == '-' || ex.front() == '+')) {
      neg_exp = ex.front() == '-';
      ex.remove_prefix(1);
    }
    exponent = parse_int(ex, text);
    if (neg_exp) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string_view int_part = s, frac_part;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) throw ParameterError("malformed number: '" + std::string(text) + "'");
  std::int64_t num = int_part.empty() ? 0 : parse_int(int_part, text);
  std::int64_t den = 1;
  for (char c : frac_part) {
    if (!std::isdigit(static_cast<unsigned char>(c)) || den > INT64_MAX / 10 || num > (INT64_MAX - 9) / 10)
      throw ParameterError("malformed or over-precise number: '" + std::string(text) + "'");
    num = num * 10 + (c - '0');
    den *= 10;
  }
  Rational r(num, den);
  for (; exponent > 0; --exponent) r *= 10;
  for (; exponent < 0; ++exponent) r /= 10;
  return negative ? -r : r;
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::int64_t ceil_mul(const Rational& r, std::int64_t n) {
  const __int128 num = static_cast<__int128>(r.numerator()) * n;
  const __int128 den = r.denominator();
  __int128 q = num / den;
  if (num % den != 0 && num > 0) ++q;
  return static_cast<std::int64_t>(q);
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational out(1);
  for (unsigned i = 0; i < exponent; ++i) out *= base;
  return out;
}

std::vector<std::size_t> Rng::sample(std::size_t n, std::size_t k) {
  k = std::min(k, n);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  // Partial Fisher-Yates over the first k slots.
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + below(n - i);
    std::swap(all[i], all[j]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace charlab
