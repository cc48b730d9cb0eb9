#pragma once
// Convex hulls in the plane and in space.

#include <Eigen/Core>
#include <array>
#include <map>
#include <utility>
#include <vector>

namespace geotomo {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Counter-clockwise extreme points, no repeated or collinear vertices.
/// Returns 1 or 2 points for degenerate input (a point or a segment).
std::vector<Vec2> convexHull2D(std::vector<Vec2> points, double relTol = 1e-12);

struct HullFacet {
  Vec3 normal;  // unit, outward
  double offset = 0.0;
  double area = 0.0;
  std::vector<int> triangles;
};

/// Result of convexHull3D. When dimension < 3 only `vertices` is filled: the
/// point, the two endpoints of a segment, or the planar hull in cyclic order.
struct Hull3D {
  int dimension = -1;
  std::vector<Vec3> vertices;
  std::vector<int> sourceIndex;  // input index of each vertex
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise seen from outside
  std::vector<std::array<int, 3>> neighbors;  // across edge (t[e], t[(e+1)%3])
  std::vector<Vec3> triangleNormals;
  std::vector<int> triangleFacet;
  std::vector<HullFacet> facets;  // coplanar triangles merged

  double volume() const;
  Vec3 centroid() const;
  /// Total length of the edges shared by each pair of distinct facets.
  std::map<std::pair<int, int>, double> facetEdgeLengths() const;
};

/// Incremental hull. relTol scales the visibility tolerance with the extent of
/// the point set; points closer than that to a face plane are treated as
/// lying on it.
Hull3D convexHull3D(const std::vector<Vec3>& points, double relTol = 1e-11);

}  // namespace geotomo
