#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace qbessel {

/// Neumaier's variant of Kahan summation. Unlike plain Kahan it stays exact
/// when an addend is larger in magnitude than the running sum, which happens
/// constantly in alternating q-series.
///
/// Also tracks the sum of absolute values, the conditioning scale of a
/// cancelling sum.
template <typename Scalar>
class CompensatedSum {
 public:
  CompensatedSum() = default;

  CompensatedSum& operator+=(const Scalar& value) {
    using std::abs;
    const Scalar t = sum_ + value;
    if (abs(sum_) >= abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    abs_sum_ += abs(value);
    return *this;
  }

  Scalar value() const { return sum_ + compensation_; }
  Scalar abs_sum() const { return abs_sum_; }

  /// True once a remaining tail of size `tail` is below eps relative to the
  /// partial sum, or below the rounding floor of the accumulated terms (which
  /// ends sums that cancel to nearly zero).
  bool converged(const Scalar& tail, const Scalar& eps) const {
    using std::abs;
    const Scalar floor = std::numeric_limits<Scalar>::epsilon() * std::numeric_limits<Scalar>::epsilon();
    return tail <= eps * abs(value()) || tail <= floor * abs_sum_;
  }

 private:
  Scalar sum_{0};
  Scalar compensation_{0};
  Scalar abs_sum_{0};
};

template <typename Scalar>
class CompensatedSum<std::complex<Scalar>> {
 public:
  CompensatedSum& operator+=(const std::complex<Scalar>& value) {
    re_ += value.real();
    im_ += value.imag();
    using std::abs;
    abs_sum_ += abs(value);
    return *this;
  }

  std::complex<Scalar> value() const { return {re_.value(), im_.value()}; }
  Scalar abs_sum() const { return abs_sum_; }

  bool converged(const Scalar& tail, const Scalar& eps) const {
    using std::abs;
    const Scalar floor = std::numeric_limits<Scalar>::epsilon() * std::numeric_limits<Scalar>::epsilon();
    return tail <= eps * abs(value()) || tail <= floor * abs_sum_;
  }

 private:
  CompensatedSum<Scalar> re_;
  CompensatedSum<Scalar> im_;
  Scalar abs_sum_{0};
};

}  // namespace qbessel
