#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ecsafe/curve.hpp"

namespace ecsafe::detail {

inline std::uint64_t point_key(const Point& P) {
  if (P.is_infinity()) return 0x9e3779b97f4a7c15ULL;
  const std::uint64_t x = mpz_getlimbn(P.x().get_mpz_t(), 0);
  const std::uint64_t y = mpz_getlimbn(P.y().get_mpz_t(), 0);
  return x * 0xff51afd7ed558ccdULL ^ (y + 0x632be59bd9b4e5f1ULL);
}

/// Table of j*P for j in [0, m). Construction stops at the first j > 0 with
/// j*P = infinity, which is then the exact order of P.
class BabySteps {
 public:
  BabySteps(const Curve& E, const Point& P, std::uint64_t m, std::uint64_t* ops) {
    points_.reserve(m);
    index_.reserve(m);
    Point R;
    for (std::uint64_t j = 0; j < m; ++j) {
      if (j > 0 && R.is_infinity()) {
        small_order_ = j;
        break;
      }
      index_.emplace(point_key(R), j);
      points_.push_back(R);
      if (j + 1 < m) {
        R = E.add(R, P);
        if (ops) ++*ops;
      }
    }
  }

  std::optional<std::uint64_t> small_order() const { return small_order_; }

  std::optional<std::uint64_t> lookup(const Point& R) const {
    auto [lo, hi] = index_.equal_range(point_key(R));
    for (auto it = lo; it != hi; ++it)
      if (points_[it->second] == R) return it->second;
    return std::nullopt;
  }

 private:
  std::unordered_multimap<std::uint64_t, std::uint64_t> index_;
  std::vector<Point> points_;
  std::optional<std::uint64_t> small_order_;
};

}  // namespace ecsafe::detail
