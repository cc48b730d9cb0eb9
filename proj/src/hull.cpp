#include "geotomo/hull.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace geotomo {

namespace {

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

std::vector<Vec2> convexHull2D(std::vector<Vec2> pts, double relTol) {
  if (pts.empty()) return {};
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  scale = std::max(scale, 1e-300);
  const double distTol = relTol * scale;

  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  std::vector<Vec2> uniq;
  uniq.reserve(pts.size());
  for (const auto& p : pts) {
    bool dup = false;
    for (auto it = uniq.rbegin(); it != uniq.rend() && p.x() - it->x() <= distTol; ++it)
      if ((p - *it).norm() <= distTol) {
        dup = true;
        break;
      }
    if (!dup) uniq.push_back(p);
  }
  if (uniq.size() <= 2) return uniq;

  // Andrew's monotone chain; a turn counts only if the area exceeds the
  // tolerance relative to the edge length.
  auto turnsLeft = [&](const Vec2& o, const Vec2& a, const Vec2& b) {
    return cross2(o, a, b) > distTol * (b - o).norm();
  };
  std::vector<Vec2> hull(2 * uniq.size());
  std::size_t k = 0;
  for (const auto& p : uniq) {
    while (k >= 2 && !turnsLeft(hull[k - 2], hull[k - 1], p)) --k;
    hull[k++] = p;
  }
  for (std::size_t i = uniq.size() - 1, t = k + 1; i-- > 0;) {
    const Vec2& p = uniq[i];
    while (k >= t && !turnsLeft(hull[k - 2], hull[k - 1], p)) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  if (hull.size() < 3) {
    // Collinear input: the extreme pair along the principal direction.
    const Vec2 dir = (uniq.back() - uniq.front()).normalized();
    auto [lo, hi] = std::minmax_element(uniq.begin(), uniq.end(), [&](const Vec2& a, const Vec2& b) {
      return a.dot(dir) < b.dot(dir);
    });
    return {*lo, *hi};
  }
  return hull;
}

namespace {

struct Face {
  std::array<int, 3> v;
  std::array<int, 3> nb;
  Vec3 n;
  double off = 0.0;
  bool alive = true;
};

struct Builder {
  const std::vector<Vec3>& pts;
  double tol;
  std::vector<Face> faces;

  void setPlane(Face& f) const {
    const Vec3& a = pts[f.v[0]];
    const Vec3& b = pts[f.v[1]];
    const Vec3& c = pts[f.v[2]];
    Vec3 n = (b - a).cross(c - a);
    const double len = n.norm();
    f.n = len > 0 ? Vec3(n / len) : Vec3::Zero();
    f.off = f.n.dot((a + b + c) / 3.0);
  }

  double dist(const Face& f, const Vec3& p) const { return f.n.dot(p) - f.off; }

  // Each pending point keeps one visible face (its witness); a face keeps the
  // points it witnesses.
  std::vector<int> witness;
  std::vector<std::vector<int>> outside;

  void assign(int q, const std::vector<int>& candidates) {
    for (int f : candidates)
      if (faces[f].alive && dist(faces[f], pts[q]) > tol) {
        witness[q] = f;
        outside[f].push_back(q);
        return;
      }
    witness[q] = -1;
  }

  void addPoint(int pi) {
    const Vec3& p = pts[pi];
    const int w = witness[pi];
    witness[pi] = -1;
    if (w < 0) return;

    // The visible region is connected; grow it from the witness.
    std::vector<int> visible{w};
    std::vector<char> isVisible(faces.size(), 0);
    isVisible[w] = 1;
    for (std::size_t q = 0; q < visible.size(); ++q)
      for (int g : faces[visible[q]].nb)
        if (!isVisible[g] && dist(faces[g], p) > tol) {
          isVisible[g] = 1;
          visible.push_back(g);
        }

    struct HorizonEdge {
      int a, b, outside;
    };
    std::vector<HorizonEdge> horizon;
    for (int f : visible)
      for (int e = 0; e < 3; ++e) {
        const int g = faces[f].nb[e];
        if (!isVisible[g]) horizon.push_back({faces[f].v[e], faces[f].v[(e + 1) % 3], g});
      }
    std::vector<int> orphans;
    for (int f : visible) {
      faces[f].alive = false;
      for (int q : outside[f])
        if (q != pi && witness[q] == f) orphans.push_back(q);
      outside[f].clear();
    }

    // New faces (a, b, p); edge 1 is (b, p), edge 2 is (p, a).
    std::vector<std::pair<int, int>> byStart;  // (a, face)
    std::vector<std::pair<int, int>> byEnd;    // (b, face)
    for (const auto& h : horizon) {
      Face nf;
      nf.v = {h.a, h.b, pi};
      nf.nb = {h.outside, -1, -1};
      setPlane(nf);
      const int id = static_cast<int>(faces.size());
      faces.push_back(nf);
      Face& out = faces[h.outside];
      for (int e = 0; e < 3; ++e)
        if (out.v[e] == h.b && out.v[(e + 1) % 3] == h.a) out.nb[e] = id;
      byStart.emplace_back(h.a, id);
      byEnd.emplace_back(h.b, id);
    }
    outside.resize(faces.size());
    std::sort(byStart.begin(), byStart.end());
    std::sort(byEnd.begin(), byEnd.end());
    auto lookup = [](const std::vector<std::pair<int, int>>& table, int key) {
      auto it = std::lower_bound(table.begin(), table.end(), std::make_pair(key, -1));
      return (it != table.end() && it->first == key) ? it->second : -1;
    };
    for (const auto& [a, id] : byStart) {
      Face& f = faces[id];
      f.nb[1] = lookup(byStart, f.v[1]);  // neighbour starts where this edge (b, p) begins
      f.nb[2] = lookup(byEnd, f.v[0]);
    }

    // An orphan still outside the hull sees a new face or a face just beyond
    // the horizon.
    std::vector<int> candidates;
    for (const auto& [a, id] : byStart) candidates.push_back(id);
    for (const auto& h : horizon) candidates.push_back(h.outside);
    for (int q : orphans) assign(q, candidates);
  }
};

Hull3D lowerDimensional(const std::vector<Vec3>& pts, const std::vector<int>& idx, int dim,
                        const Vec3& origin, const Vec3& e1, const Vec3& e2) {
  Hull3D h;
  h.dimension = dim;
  if (dim == 0) {
    h.vertices.push_back(pts[idx[0]]);
    h.sourceIndex.push_back(idx[0]);
    return h;
  }
  if (dim == 1) {
    auto [lo, hi] = std::minmax_element(idx.begin(), idx.end(), [&](int a, int b) {
      return (pts[a] - origin).dot(e1) < (pts[b] - origin).dot(e1);
    });
    h.vertices = {pts[*lo], pts[*hi]};
    h.sourceIndex = {*lo, *hi};
    return h;
  }
  std::vector<Vec2> planar;
  planar.reserve(idx.size());
  for (int i : idx) planar.emplace_back((pts[i] - origin).dot(e1), (pts[i] - origin).dot(e2));
  const auto ring = convexHull2D(planar);
  for (const auto& q : ring) {
    // Recover the source point with these planar coordinates.
    int best = idx[0];
    double bestD = 1e300;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const double d = (planar[j] - q).squaredNorm();
      if (d < bestD) {
        bestD = d;
        best = idx[j];
      }
    }
    h.vertices.push_back(pts[best]);
    h.sourceIndex.push_back(best);
  }
  return h;
}

}  // namespace

Hull3D convexHull3D(const std::vector<Vec3>& input, double relTol) {
  Hull3D result;
  if (input.empty()) return result;

  double scale = 0.0;
  for (const auto& p : input) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  Vec3 lo = input[0], hi = input[0];
  for (const auto& p : input) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double extent = std::max((hi - lo).norm(), 1e-300);
  const double tol = relTol * std::max(extent, scale);

  // Drop exact and near duplicates.
  std::vector<int> order(input.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (input[a].x() != input[b].x()) return input[a].x() < input[b].x();
    if (input[a].y() != input[b].y()) return input[a].y() < input[b].y();
    if (input[a].z() != input[b].z()) return input[a].z() < input[b].z();
    return a < b;
  });
  std::vector<int> idx;
  idx.reserve(input.size());
  for (int i : order) {
    bool dup = false;
    for (auto it = idx.rbegin(); it != idx.rend() && input[i].x() - input[*it].x() <= tol; ++it)
      if ((input[i] - input[*it]).norm() <= tol) {
        dup = true;
        break;
      }
    if (!dup) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end());

  // Initial simplex.
  const int i0 = *std::min_element(idx.begin(), idx.end(), [&](int a, int b) {
    return input[a].x() < input[b].x() ||
           (input[a].x() == input[b].x() && input[a].y() < input[b].y());
  });
  int i1 = i0;
  double best = 0.0;
  for (int i : idx)
    if (double d = (input[i] - input[i0]).norm(); d > best) {
      best = d;
      i1 = i;
    }
  if (best <= tol) return lowerDimensional(input, idx, 0, input[i0], Vec3::UnitX(), Vec3::UnitY());
  const Vec3 e1 = (input[i1] - input[i0]).normalized();
  int i2 = i0;
  best = 0.0;
  for (int i : idx) {
    const Vec3 r = input[i] - input[i0];
    if (double d = (r - r.dot(e1) * e1).norm(); d > best) {
      best = d;
      i2 = i;
    }
  }
  if (best <= tol) return lowerDimensional(input, idx, 1, input[i0], e1, e1);
  Vec3 r2 = input[i2] - input[i0];
  const Vec3 e2 = (r2 - r2.dot(e1) * e1).normalized();
  const Vec3 nrm = e1.cross(e2);
  int i3 = i0;
  best = 0.0;
  for (int i : idx)
    if (double d = std::abs((input[i] - input[i0]).dot(nrm)); d > best) {
      best = d;
      i3 = i;
    }
  if (best <= tol) return lowerDimensional(input, idx, 2, input[i0], e1, e2);

  Builder b{input, tol, {}, {}, {}};
  const Vec3 inner = (input[i0] + input[i1] + input[i2] + input[i3]) / 4.0;
  std::array<std::array<int, 3>, 4> tet = {{{i0, i1, i2}, {i0, i3, i1}, {i1, i3, i2}, {i2, i3, i0}}};
  for (auto& t : tet) {
    Face f;
    f.v = t;
    b.setPlane(f);
    if (b.dist(f, inner) > 0) {
      std::swap(f.v[1], f.v[2]);
      b.setPlane(f);
    }
    b.faces.push_back(f);
  }
  // Neighbours of the initial tetrahedron by matching reversed edges.
  for (int f = 0; f < 4; ++f)
    for (int e = 0; e < 3; ++e) {
      const int a = b.faces[f].v[e], c = b.faces[f].v[(e + 1) % 3];
      for (int g = 0; g < 4; ++g)
        for (int e2i = 0; e2i < 3; ++e2i)
          if (b.faces[g].v[e2i] == c && b.faces[g].v[(e2i + 1) % 3] == a) b.faces[f].nb[e] = g;
    }

  // Far points first: the hull grows quickly and interior points drop out.
  std::vector<int> rest;
  for (int i : idx)
    if (i != i0 && i != i1 && i != i2 && i != i3) rest.push_back(i);
  std::stable_sort(rest.begin(), rest.end(), [&](int a, int c) {
    return (input[a] - inner).squaredNorm() > (input[c] - inner).squaredNorm();
  });
  b.witness.assign(input.size(), -1);
  b.outside.resize(4);
  for (int i : rest) b.assign(i, {0, 1, 2, 3});
  for (int i : rest) b.addPoint(i);

  // Compact.
  std::vector<int> faceMap(b.faces.size(), -1);
  std::vector<int> vertexMap(input.size(), -1);
  result.dimension = 3;
  for (std::size_t f = 0; f < b.faces.size(); ++f) {
    if (!b.faces[f].alive) continue;
    faceMap[f] = static_cast<int>(result.triangles.size());
    std::array<int, 3> tri{};
    for (int e = 0; e < 3; ++e) {
      const int v = b.faces[f].v[e];
      if (vertexMap[v] < 0) {
        vertexMap[v] = static_cast<int>(result.vertices.size());
        result.vertices.push_back(input[v]);
        result.sourceIndex.push_back(v);
      }
      tri[e] = vertexMap[v];
    }
    result.triangles.push_back(tri);
    result.triangleNormals.push_back(b.faces[f].n);
  }
  for (std::size_t f = 0; f < b.faces.size(); ++f) {
    if (!b.faces[f].alive) continue;
    std::array<int, 3> nb{};
    for (int e = 0; e < 3; ++e) nb[e] = faceMap[b.faces[f].nb[e]];
    result.neighbors.push_back(nb);
  }

  // Merge coplanar neighbours into facets (union-find over shared edges).
  const int nt = static_cast<int>(result.triangles.size());
  std::vector<int> parent(nt);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  constexpr double kCoplanarCos = 1.0 - 1e-10;
  for (int t = 0; t < nt; ++t)
    for (int e = 0; e < 3; ++e) {
      const int g = result.neighbors[t][e];
      if (g > t && result.triangleNormals[t].dot(result.triangleNormals[g]) > kCoplanarCos)
        parent[find(g)] = find(t);
    }
  std::vector<int> facetOf(nt, -1);
  result.triangleFacet.assign(nt, -1);
  for (int t = 0; t < nt; ++t) {
    const int r = find(t);
    if (facetOf[r] < 0) {
      facetOf[r] = static_cast<int>(result.facets.size());
      result.facets.emplace_back();
    }
    const int fid = facetOf[r];
    result.triangleFacet[t] = fid;
    const auto& tri = result.triangles[t];
    const Vec3 cr = (result.vertices[tri[1]] - result.vertices[tri[0]])
                        .cross(result.vertices[tri[2]] - result.vertices[tri[0]]);
    HullFacet& hf = result.facets[fid];
    if (hf.triangles.empty()) hf.normal = Vec3::Zero();
    hf.normal += cr;  // area-weighted
    hf.area += 0.5 * cr.norm();
    hf.triangles.push_back(t);
  }
  for (auto& hf : result.facets) {
    hf.normal.normalize();
    double off = -1e300;
    for (int t : hf.triangles)
      for (int v : result.triangles[t]) off = std::max(off, hf.normal.dot(result.vertices[v]));
    hf.offset = off;
  }
  return result;
}

double Hull3D::volume() const {
  if (dimension < 3) return 0.0;
  const Vec3& r = vertices[0];
  double v = 0.0;
  for (const auto& t : triangles)
    v += (vertices[t[0]] - r).dot((vertices[t[1]] - r).cross(vertices[t[2]] - r));
  return v / 6.0;
}

Vec3 Hull3D::centroid() const {
  if (dimension < 3) {
    Vec3 c = Vec3::Zero();
    for (const auto& p : vertices) c += p;
    return vertices.empty() ? c : Vec3(c / static_cast<double>(vertices.size()));
  }
  const Vec3& r = vertices[0];
  Vec3 acc = Vec3::Zero();
  double vol = 0.0;
  for (const auto& t : triangles) {
    const Vec3& a = vertices[t[0]];
    const Vec3& b = vertices[t[1]];
    const Vec3& c = vertices[t[2]];
    const double v = (a - r).dot((b - r).cross(c - r));
    acc += v * (r + a + b + c) / 4.0;
    vol += v;
  }
  return acc / vol;
}

std::map<std::pair<int, int>, double> Hull3D::facetEdgeLengths() const {
  std::map<std::pair<int, int>, double> out;
  for (std::size_t t = 0; t < triangles.size(); ++t)
    for (int e = 0; e < 3; ++e) {
      const int g = neighbors[t][e];
      if (g <= static_cast<int>(t)) continue;
      const int f1 = triangleFacet[t], f2 = triangleFacet[g];
      if (f1 == f2) continue;
      const double len = (vertices[triangles[t][e]] - vertices[triangles[t][(e + 1) % 3]]).norm();
      out[{std::min(f1, f2), std::max(f1, f2)}] += len;
    }
  return out;
}

}  // namespace geotomo
