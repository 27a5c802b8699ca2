#pragma once

namespace ptrig::detail {

// Compensated (Kahan) accumulator for long sums of small terms.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double term) {
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace ptrig::detail
