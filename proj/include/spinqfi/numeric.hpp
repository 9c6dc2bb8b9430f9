#pragma once

#include <cmath>
#include <limits>
#include <span>

#include "spinqfi/model.hpp"

namespace spinqfi {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Component-wise compensated sum of 3-vectors.
class CompensatedVec3 {
 public:
  void add(const Vec3& v) {
    x_.add(v.x);
    y_.add(v.y);
    z_.add(v.z);
  }
  [[nodiscard]] Vec3 value() const { return {x_.value(), y_.value(), z_.value()}; }

 private:
  CompensatedSum x_, y_, z_;
};

/// log(sum exp(v_i)) with a single max shift.
inline double log_sum_exp(std::span<const double> v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  CompensatedSum s;
  for (double x : v) s.add(std::exp(x - mx));
  return mx + std::log(s.value());
}

}  // namespace spinqfi
