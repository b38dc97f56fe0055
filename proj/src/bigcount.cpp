#include "hamlab/bigcount.hpp"

#include "hamlab/error.hpp"

#include <cmath>
#include <limits>

namespace hamlab {

BigCount::BigCount(unsigned __int128 v) {
  value_ = static_cast<std::uint64_t>(v >> 64);
  value_ <<= 64;
  value_ += static_cast<std::uint64_t>(v);
}

BigCount::BigCount(Rep v) : value_(std::move(v)) {
  if (value_.sign() < 0) throw PreconditionError("BigCount: negative value");
}

BigCount BigCount::from_string(std::string_view decimal) {
  if (decimal.empty()) throw ParseError("BigCount: empty string");
  for (char c : decimal)
    if (c < '0' || c > '9') throw ParseError("BigCount: not a decimal count: " + std::string(decimal));
  return BigCount(Rep(std::string(decimal)));
}

BigCount BigCount::factorial(unsigned k) {
  Rep r = 1;
  for (unsigned i = 2; i <= k; ++i) r *= i;
  return BigCount(std::move(r));
}

BigCount BigCount::binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return BigCount{};
  k = std::min(k, n - k);
  Rep r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return BigCount(std::move(r));
}

bool BigCount::fits_u64() const { return value_ <= std::numeric_limits<std::uint64_t>::max(); }

std::uint64_t BigCount::to_u64() const {
  if (!fits_u64()) throw CapacityError("BigCount does not fit in 64 bits: " + to_string());
  return value_.convert_to<std::uint64_t>();
}

double BigCount::log() const {
  if (value_.is_zero()) return -std::numeric_limits<double>::infinity();
  const unsigned msb = boost::multiprecision::msb(value_);
  if (msb < 1000) return std::log(value_.convert_to<double>());
  // Keep the top 64 bits and account for the shift separately.
  const unsigned shift = msb - 63;
  Rep top, rest;
  boost::multiprecision::divide_qr(value_, Rep(1) << shift, top, rest);
  return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

double BigCount::to_double() const { return value_.convert_to<double>(); }

BigCount BigCount::divided_exactly(std::uint64_t d) const {
  if (d == 0) throw PreconditionError("BigCount: division by zero");
  Rep q, r;
  boost::multiprecision::divide_qr(value_, Rep(d), q, r);
  if (!r.is_zero()) throw PreconditionError("BigCount: " + to_string() + " not divisible by " + std::to_string(d));
  return BigCount(std::move(q));
}

BigCount choose_two(const BigCount& m) {
  if (m.is_zero()) return BigCount{};
  BigCount::Rep v = m.rep();
  return BigCount(BigCount::Rep(v * (v - 1) / 2));
}

}  // namespace hamlab
