#pragma once

namespace mf::detail {

/// Kahan compensated accumulator: reductions stay deterministic and keep
/// ~1 ulp accuracy regardless of field size.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace mf::detail
