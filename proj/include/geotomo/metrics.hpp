#pragma once
// Distances between convex bodies and between measures on the sphere.

#include <span>
#include <vector>

#include "geotomo/bodies.hpp"

namespace geotomo {

/// A distance together with a bound on its numerical error. errorBound is 0
/// for exact evaluations, a certified bound for net-sampled maxima, and an
/// a-posteriori estimate (difference against a half-resolution rule) for
/// quadrature.
struct MetricValue {
  double value = 0.0;
  double errorBound = 0.0;
};

/// ((1/k) sum d_i^2)^{1/2}.
double pseudonormK(std::span<const double> diffs);

/// sup_u |h_A(u) - h_B(u)|, the Hausdorff distance. n = 2, 3: exact, as the
/// largest distance from a vertex of one polytope to the other polytope.
/// Other n: hausdorffSampled with the default resolution.
MetricValue hausdorff(const VPolytope& a, const VPolytope& b);

/// Maximum of |h_A - h_B| over epsilonNet(n, resolution), plus the certified
/// bound resolution * (R_A + R_B) with R the largest vertex norm.
MetricValue hausdorffSampled(const VPolytope& a, const VPolytope& b, double resolution = 0.01);

struct L2Options {
  /// n = 3 product rule: Gauss-Legendre nodes in the height, equally spaced
  /// nodes in the azimuth.
  int heightNodes = 100;
  int azimuthNodes = 200;
};

/// (int_{S^{n-1}} (h_A - h_B)^2)^{1/2}. n = 2: exact, integrating the
/// sinusoidal pieces between consecutive normal-fan breakpoints of both
/// bodies. n = 3: product quadrature; the integrand is piecewise smooth with
/// kinks along the fans, so the error decays like the square of the node
/// spacing.
MetricValue l2dist(const VPolytope& a, const VPolytope& b, const L2Options& options = {});

/// Dudley (bounded Lipschitz) distance with the chordal metric, solved
/// exactly as a linear program over the union of the supports.
double dudley(const AtomicMeasure& mu, const AtomicMeasure& nu);

struct ProhorovBound {
  bool valid = false;  // d_D <= 1, so the bound applies
  double bound = 0.0;
  double dudley = 0.0;
};

/// (1 + sqrt(3 + m0)) d_D^{1/2}, m0 = mu(S^{n-1}), when d_D <= 1.
ProhorovBound prohorovUpper(const AtomicMeasure& mu, const AtomicMeasure& nu);

/// Distance from x to the polytope (0 inside). n = 2, 3.
double distanceToPolytope(const Vector& x, const VPolytope& body);

}  // namespace geotomo
