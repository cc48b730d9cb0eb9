#pragma once
// Convex polytopes, zonotopes and finitely supported measures on the sphere,
// with the support, brightness and surface-area operations that connect them.

#include <vector>

#include "geotomo/directions.hpp"

namespace geotomo {

/// Convex hull of finitely many points, stored as its extreme points.
/// n = 2: counter-clockwise order. n = 3: hull vertex order. n >= 4: the input
/// with duplicates removed (no extreme-point filtering).
/// An empty vertex list is the empty set.
class VPolytope {
 public:
  VPolytope() = default;
  explicit VPolytope(int dims) : dims_(dims) {}
  VPolytope(int dims, const std::vector<Vector>& points);

  int dims() const { return dims_; }
  const std::vector<Vector>& vertices() const { return vertices_; }
  bool isEmpty() const { return vertices_.empty(); }
  /// Affine dimension of the vertex set.
  int affineDimension() const;

  VPolytope translated(const Vector& t) const;
  VPolytope scaled(double s) const;

 private:
  int dims_ = 0;
  std::vector<Vector> vertices_;
};

/// {x : normals[i] . x <= supports[i]}.
struct HPolytope {
  DirectionSequence normals;
  std::vector<double> supports;

  int dims() const { return normals.dims(); }
};

/// Sum of the segments [-x_j v_j, x_j v_j].
class Zonotope {
 public:
  struct Generator {
    Direction direction;
    double halfLength = 0.0;
  };

  Zonotope() = default;
  explicit Zonotope(int dims) : dims_(dims) {}
  /// Generators shorter than 1e-14 are dropped; negative lengths throw.
  Zonotope(int dims, std::vector<Generator> generators);

  int dims() const { return dims_; }
  const std::vector<Generator>& generators() const { return generators_; }

  /// Vertex representation (n = 2, 3).
  VPolytope toVPolytope() const;

 private:
  int dims_ = 0;
  std::vector<Generator> generators_;
};

/// Finitely supported nonnegative measure on S^{n-1}.
class AtomicMeasure {
 public:
  struct Atom {
    Direction direction;
    double mass = 0.0;
  };

  AtomicMeasure() = default;
  explicit AtomicMeasure(int dims) : dims_(dims) {}
  AtomicMeasure(int dims, std::vector<Atom> atoms);

  int dims() const { return dims_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double totalMass() const;
  /// Atoms pair up as +-v with equal masses (within tol, relative to the
  /// total mass when it exceeds 1).
  bool isEven(double tol = 1e-10) const;
  /// Sum of m_j v_j.
  Vector barycenterSum() const;

  AtomicMeasure scaled(double s) const;
  /// Atoms closer than kDuplicateAngle merged; zero atoms dropped.
  AtomicMeasure merged() const;

 private:
  int dims_ = 0;
  std::vector<Atom> atoms_;
};

double supportFunction(const VPolytope& body, const Direction& u);
double supportFunction(const Zonotope& body, const Direction& u);
double supportFunction(const HPolytope& body, const Direction& u);
/// Support values at every direction of dirs.
std::vector<double> supportValues(const VPolytope& body, const DirectionSequence& dirs);
std::vector<double> supportValues(const Zonotope& body, const DirectionSequence& dirs);

/// Vertices of the intersection of the halfspaces. Redundant halfspaces are
/// allowed. An empty intersection gives an empty VPolytope; an unbounded one
/// throws UnboundedPolytope. n = 2, 3.
VPolytope polytopeFromSupports(const HPolytope& h);

/// Area (n = 2) or volume (n = 3) and the centre of mass of a full-dimensional polytope.
double volume(const VPolytope& body);
Vector centroid(const VPolytope& body);

/// One atom per facet: outer unit normal and facet (n-1)-volume. n = 2, 3.
AtomicMeasure surfaceAreaMeasure(const VPolytope& body);

/// (n-1)-volume of the projection onto u^perp, from Cauchy's formula
/// (1/2) sum_f area_f |u . n_f|.
double brightness(const VPolytope& body, const Direction& u);
std::vector<double> brightnessValues(const VPolytope& body, const DirectionSequence& dirs);

/// Zonotope with support function (1/2) int |u . v| dS(v): one generator per
/// antipodal pair, half-length equal to the mass at either end.
Zonotope projectionBody(const AtomicMeasure& s);

/// Even measure with mass x_j at +-v_j. Parallel generators are merged.
AtomicMeasure zonotopeSurfaceMeasure(const Zonotope& z);

/// gamma(u) = sum_j m_j |u . v_j|.
double roseOfIntersections(const AtomicMeasure& mu, const Direction& u);
std::vector<double> roseValues(const AtomicMeasure& mu, const DirectionSequence& dirs);

/// Polygon whose edges have the atom directions as outer normals and the
/// masses as lengths, centroid at the origin.
VPolytope minkowskiReconstruct2D(const AtomicMeasure& s);

struct MinkowskiOptions {
  int maxIterations = 10000;
  double gradientTolerance = 1e-10;
};

/// Polytope with the given facet normals and areas, centroid at the origin.
/// Solves min sum_j m_j h_j - ln V(P(h)) by damped Newton steps; the minimizer
/// is a dilate of the sought body. Throws Convergence when the iteration cap
/// is hit.
VPolytope minkowskiReconstruct3D(const AtomicMeasure& s, const MinkowskiOptions& options = {});

/// Dispatches on the dimension.
VPolytope minkowskiReconstruct(const AtomicMeasure& s);

}  // namespace geotomo
