#pragma once

namespace scrank {

// Neumaier compensated summation in long double. Used for potential values,
// whose per-iteration decreases can be ~1e-11 on sums of magnitude ~1e6.
struct NeumaierSum {
  long double sum = 0.0L;
  long double comp = 0.0L;

  void add(long double x) {
    const long double t = sum + x;
    const long double abs_sum = sum < 0 ? -sum : sum;
    const long double abs_x = x < 0 ? -x : x;
    if (abs_sum >= abs_x) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  long double value() const { return sum + comp; }
};

}  // namespace scrank
