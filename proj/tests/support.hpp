#pragma once
// Helpers shared by the test programs.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "geotomo/bodies.hpp"
#include "geotomo/rng.hpp"

namespace geotomo::testing {

inline constexpr double kPi = std::numbers::pi;

// Quasi-uniform points on S^2 (golden-angle spiral).
inline std::vector<Vector> fibonacciSphere(int count) {
  std::vector<Vector> out;
  out.reserve(count);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(1.0 - z * z);
    out.push_back(Vector{{r * std::cos(golden * i), r * std::sin(golden * i), z}});
  }
  return out;
}

// Small counter-based generator for test data.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : seed_(seed) {}
  double uniform() { return rng::uniform(seed_, i_++); }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double gaussian() { return rng::gaussian(seed_, i_++); }
  int index(int n) { return std::min(n - 1, static_cast<int>(uniform() * n)); }
  Direction direction(int n) {
    Vector v(n);
    for (int a = 0; a < n; ++a) v[a] = gaussian();
    return Direction(v);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t i_ = 0;
};

inline VPolytope randomPolytope(Draw& d, int n, int points, double radius = 1.0) {
  std::vector<Vector> pts;
  for (int i = 0; i < points; ++i) {
    Vector v = d.direction(n).vec() * radius * d.uniform(0.5, 1.0);
    pts.push_back(v);
  }
  return VPolytope(n, pts);
}

}  // namespace geotomo::testing
