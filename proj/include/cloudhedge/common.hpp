#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace cloudhedge {

// Thrown when an input violates a documented precondition.
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a fitting problem is degenerate (e.g. no time spread).
class fit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& what) {
  if (!condition) throw validation_error(what);
}

template <typename Derived>
bool strictly_increasing(const Eigen::DenseBase<Derived>& v) {
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

// Neumaier-compensated accumulator. Totals built with it are bit-stable
// for a fixed addition order, which is part of the pricing contract.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace cloudhedge
