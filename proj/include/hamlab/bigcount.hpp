#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace hamlab {

/// Exact nonnegative integer used for every count the library returns
/// (h(G), factor censuses, permanents, matchings).
class BigCount {
 public:
  using Rep = boost::multiprecision::cpp_int;

  BigCount() = default;
  BigCount(std::uint64_t v) : value_(v) {}  // NOLINT(implicit)
  explicit BigCount(unsigned __int128 v);
  explicit BigCount(Rep v);

  static BigCount from_string(std::string_view decimal);
  static BigCount factorial(unsigned k);
  static BigCount binomial(std::uint64_t n, std::uint64_t k);

  std::string to_string() const { return value_.str(); }
  bool is_zero() const { return value_.is_zero(); }
  bool fits_u64() const;
  std::uint64_t to_u64() const;  // throws if it does not fit
  /// Natural log; -inf for zero. Accurate to double precision for any size.
  double log() const;
  double to_double() const;

  BigCount& operator+=(const BigCount& o) { value_ += o.value_; return *this; }
  BigCount& operator*=(const BigCount& o) { value_ *= o.value_; return *this; }
  /// Exact division; throws PreconditionError if `d` does not divide.
  BigCount divided_exactly(std::uint64_t d) const;

  friend BigCount operator+(BigCount a, const BigCount& b) { return a += b; }
  friend BigCount operator*(BigCount a, const BigCount& b) { return a *= b; }
  friend bool operator==(const BigCount& a, const BigCount& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const BigCount& a, const BigCount& b) {
    int c = a.value_.compare(b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  const Rep& rep() const { return value_; }

 private:
  Rep value_;
};

/// C(m, 2) for an exact count m.
BigCount choose_two(const BigCount& m);

}  // namespace hamlab
