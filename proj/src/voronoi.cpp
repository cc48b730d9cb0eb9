#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "geotomo/directions.hpp"
#include "geotomo/error.hpp"
#include "geotomo/hull.hpp"

namespace geotomo {

namespace {

constexpr double kPi = std::numbers::pi;

// Cell measures from azimuths around an axis: arcs for n = 2 (weight 1/2 of
// the neighbouring gaps) and lunes for coplanar points on S^2 (weight 1).
std::vector<double> cellsFromAzimuths(const std::vector<double>& az, double weight) {
  const std::size_t k = az.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return az[a] < az[b]; });
  std::vector<double> cells(k, 0.0);
  if (k == 1) {
    cells[0] = 2.0 * kPi * 2.0 * weight;
    return cells;
  }
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t prev = order[(s + k - 1) % k];
    const std::size_t next = order[(s + 1) % k];
    const std::size_t cur = order[s];
    double gPrev = az[cur] - az[prev];
    double gNext = az[next] - az[cur];
    if (s == 0) gPrev += 2.0 * kPi;
    if (s + 1 == k) gNext += 2.0 * kPi;
    cells[cur] = weight * (gPrev + gNext);
  }
  return cells;
}

double azimuth(const Vec3& p, const Vec3& e1, const Vec3& e2) {
  double a = std::atan2(p.dot(e2), p.dot(e1));
  if (a < 0) a += 2.0 * kPi;
  return a;
}

void checkDistinct(const DirectionSequence& dirs) {
  const std::size_t k = dirs.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dirs[a][0] < dirs[b][0]; });
  const double tol = 2.0 * std::sin(kDuplicateAngle / 2.0) + 1e-15;
  for (std::size_t s = 0; s < k; ++s)
    for (std::size_t t = s + 1; t < k && dirs[order[t]][0] - dirs[order[s]][0] <= tol; ++t)
      if (dirs[order[s]].chordTo(dirs[order[t]]) <= tol)
        fail(ErrorCode::DuplicateDirection,
             "directions " + std::to_string(order[s]) + " and " + std::to_string(order[t]) + " coincide");
}

// Signed solid angle of the spherical triangle (a, b, c).
double solidAngle(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double num = a.dot(b.cross(c));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

std::vector<double> cells3D(const DirectionSequence& dirs) {
  const std::size_t k = dirs.size();
  std::vector<Vec3> pts;
  pts.reserve(k);
  for (const auto& d : dirs) pts.emplace_back(d[0], d[1], d[2]);
  if (k == 1) return {4.0 * kPi};

  const auto hull = convexHull3D(pts, 1e-13);
  if (hull.dimension < 3) {
    Vec3 axis;
    if (hull.dimension == 2) {
      axis = (hull.vertices[1] - hull.vertices[0]).cross(hull.vertices[2] - hull.vertices[0]).normalized();
    } else {
      // Two antipodal points: any axis orthogonal to them.
      const Vec3 p = pts[0];
      axis = p.unitOrthogonal();
    }
    const Vec3 e1 = axis.unitOrthogonal();
    const Vec3 e2 = axis.cross(e1);
    std::vector<double> az;
    az.reserve(k);
    for (const auto& p : pts) az.push_back(azimuth(p, e1, e2));
    return cellsFromAzimuths(az, 1.0);
  }

  // Triangles around each hull vertex, in cyclic order.
  const std::size_t nv = hull.vertices.size();
  std::vector<int> anyTriangle(nv, -1);
  for (std::size_t t = 0; t < hull.triangles.size(); ++t)
    for (int v : hull.triangles[t]) anyTriangle[v] = static_cast<int>(t);

  std::vector<double> cells(k, 0.0);
  for (std::size_t v = 0; v < nv; ++v) {
    const Vec3& site = hull.vertices[v];
    std::vector<Vec3> corners;
    const int start = anyTriangle[v];
    int t = start;
    int lastFacet = -1;
    do {
      const int f = hull.triangleFacet[t];
      if (f != lastFacet) corners.push_back(hull.facets[f].normal);
      lastFacet = f;
      const auto& tri = hull.triangles[t];
      int e = 0;
      while (tri[e] != static_cast<int>(v)) ++e;
      t = hull.neighbors[t][e];
    } while (t != start);
    if (corners.size() > 1 && hull.triangleFacet[start] == lastFacet &&
        (corners.front() - corners.back()).norm() == 0.0)
      corners.pop_back();
    double area = 0.0;
    for (std::size_t j = 0; j < corners.size(); ++j)
      area += solidAngle(site, corners[j], corners[(j + 1) % corners.size()]);
    cells[static_cast<std::size_t>(hull.sourceIndex[v])] = std::abs(area);
  }
  return cells;
}

}  // namespace

std::vector<double> voronoiCellMeasures(const DirectionSequence& dirs) {
  require(!dirs.empty(), ErrorCode::InvalidParameter, "Voronoi cells of an empty sequence");
  const int n = dirs.dims();
  require(n == 2 || n == 3, ErrorCode::UnsupportedDimension, "Voronoi cells are implemented for n = 2, 3");
  checkDistinct(dirs);
  if (n == 2) {
    std::vector<double> az;
    az.reserve(dirs.size());
    for (const auto& d : dirs) {
      double a = d.angle();
      if (a < 0) a += 2.0 * kPi;
      az.push_back(a);
    }
    return cellsFromAzimuths(az, 0.5);
  }
  return cells3D(dirs);
}

}  // namespace geotomo
