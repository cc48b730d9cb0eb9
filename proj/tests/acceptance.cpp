// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "geotomo/algorithms.hpp"
#include "geotomo/error.hpp"
#include "geotomo/harness.hpp"
#include "geotomo/lp.hpp"
#include "geotomo/metrics.hpp"
#include "support.hpp"

using namespace geotomo;
using namespace geotomo::testing;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Eigen::VectorXd toEigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Outcome noiselessExactness() {
  const auto t0 = Clock::now();
  const auto dirs = equallySpaced2D(35);
  const auto m = simulateMeasurements(referenceBodies().at("11-gon"), MeasurementKind::Support, dirs, 0.0, 1);
  const auto r = noisySupportLSQ(m);
  const double dt = since(t0);
  const double dev = (r.fitted - m.valueVector()).lpNorm<Eigen::Infinity>();
  const bool ok = r.solver.objective <= 1e-20 && dev <= 1e-10 && dt < 1.0;
  return {ok, fmt("objective %.2e, max |h - y| %.2e, %.3f s", r.solver.objective, dev, dt)};
}

ErrorTable sweep(SweepVariable v, std::vector<double> grid, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.sourceName = "11-gon";
  cfg.sweep = v;
  cfg.grid = std::move(grid);
  cfg.iterations = 300;
  cfg.seed = seed;
  cfg.metrics = {ErrorMetric::Pseudonorm, ErrorMetric::L2};
  return runExperiment(cfg);
}

int failures(const ErrorTable& t) {
  int f = 0;
  for (const auto& r : t.rows) f += r.failures;
  return f;
}

Outcome rateK() {
  const auto t0 = Clock::now();
  const auto t = sweep(SweepVariable::K, rangeGrid(20, 100, 5), 101);
  const double c1 = fitRate(t, ErrorMetric::Pseudonorm, Statistic::Mean).exponent;
  const double c2 = fitRate(t, ErrorMetric::L2, Statistic::Mean).exponent;
  const double dt = since(t0);
  const bool ok = std::abs(c1 + 0.40) <= 0.10 && std::abs(c2 + 0.36) <= 0.10 && dt <= 600 && failures(t) == 0;
  return {ok, fmt("c = %.4f (|.|_k), %.4f (L2); %d failed iterations; %.1f s", c1, c2, failures(t), dt)};
}

Outcome rateR() {
  const auto t = sweep(SweepVariable::R, rangeGrid(0.2, 6.0, 0.2), 202);
  const double b = fitRate(t, ErrorMetric::Pseudonorm, Statistic::Mean).exponent;
  const bool ok = std::abs(b - 0.20) <= 0.10 && failures(t) == 0;
  return {ok, fmt("b = %.4f (|.|_k); %d failed iterations", b, failures(t))};
}

Outcome rateSigma() {
  const auto t = sweep(SweepVariable::Sigma, rangeGrid(0.02, 0.5, 0.02), 303);
  const double a1 = fitRate(t, ErrorMetric::Pseudonorm, Statistic::Mean).exponent;
  const double a2 = fitRate(t, ErrorMetric::L2, Statistic::Mean).exponent;
  const bool ok = std::abs(a1 - 0.80) <= 0.15 && std::abs(a2 - 0.80) <= 0.15 && failures(t) == 0;
  return {ok, fmt("a = %.4f (|.|_k), %.4f (L2); %d failed iterations", a1, a2, failures(t))};
}

Outcome brightnessSupportEquivalence() {
  const auto& gon = referenceBodies().at("12-gon");
  const std::size_t k = 18;
  const auto half = equallySpacedHalfCircle(k);
  DirectionSequence both(2);
  for (std::size_t i = 0; i < k; ++i) {
    const double a = half[i].angle();
    both.push_back(Direction::fromAngle(a + kPi / 2));
    both.push_back(Direction::fromAngle(a - kPi / 2));
  }
  double worst = 0;
  int runs = 0;
  for (double sigma : {0.0, 0.1})
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto mb = simulateMeasurements(gon, MeasurementKind::Brightness, half, sigma, seed);
      const auto rb = noisyBrightLSQ(mb);
      if (!rb.phase2Ok) return {false, fmt("Phase II failed for sigma %.1f seed %d", sigma, static_cast<int>(seed))};
      MeasurementSet ms{both, {}, sigma / 2, seed, MeasurementKind::Support};
      for (std::size_t i = 0; i < k; ++i) {
        ms.values.push_back(mb.values[i] / 2);
        ms.values.push_back(mb.values[i] / 2);
      }
      const auto rs = noisySupportLSQ(ms);
      worst = std::max(worst, hausdorff(rb.body, rs.body).value);
      ++runs;
    }
  return {worst <= 1e-6, fmt("max Hausdorff distance %.2e over %d runs", worst, runs)};
}

// Noiseless data determine the generators exactly when A_T (columns on the
// true support T) has full column rank and some w has A_T^T w = 0 and
// A_j . w > 0 off T, a strict dual certificate. With w = N z, N an
// orthonormal basis of ker A_T^T, the LP is: max t subject to
// t - A_j . N z <= 0 off T, |z_i| <= 1; a margin t > 1e-6 counts.
bool identifiable(const Eigen::MatrixXd& a, const std::vector<int>& support) {
  Eigen::MatrixXd at(a.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t q = 0; q < support.size(); ++q) at.col(static_cast<Eigen::Index>(q)) = a.col(support[q]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(at);
  if (lu.rank() < at.cols()) return false;
  const Eigen::MatrixXd nb = Eigen::HouseholderQR<Eigen::MatrixXd>(at).householderQ() *
                             Eigen::MatrixXd::Identity(a.rows(), a.rows()).rightCols(a.rows() - at.cols());
  const auto d = nb.cols();
  LinearProgram lp(static_cast<int>(d) + 1);
  for (Eigen::Index i = 0; i < d; ++i) lp.freeVariable[static_cast<std::size_t>(i)] = true;
  lp.objective[d] = 1.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (std::find(support.begin(), support.end(), static_cast<int>(j)) != support.end()) continue;
    Eigen::VectorXd row(d + 1);
    row.head(d) = -nb.transpose() * a.col(j);
    row[d] = 1.0;
    lp.addRow(row, RowSense::LessEqual, 0.0);
  }
  for (Eigen::Index i = 0; i < d; ++i)
    for (double sg : {1.0, -1.0}) {
      Eigen::VectorXd box = Eigen::VectorXd::Zero(d + 1);
      box[i] = sg;
      lp.addRow(box, RowSense::LessEqual, 1.0);
    }
  LpOptions opt;
  opt.maxIterations = 5000;
  const auto r = solveLinearProgram(lp, opt);
  return r.status == LpStatus::Optimal && r.objective > 1e-6;
}

Outcome zonotopeRecovery() {
  Draw draw(606);
  double worstLen = 0, worstRes = 0;
  int cases = 0, rejected = 0;
  for (int n : {2, 3})
    for (int t = 0; t < 25;) {
      DirectionSequence dirs(n);
      const int k = n == 2 ? 15 : 30;
      for (int i = 0; i < k; ++i) dirs.push_back(draw.direction(n));
      const auto reps = nodeRepresentatives(dirs);
      Eigen::MatrixXd a(k, static_cast<Eigen::Index>(reps.size()));
      for (int i = 0; i < k; ++i)
        for (std::size_t j = 0; j < reps.size(); ++j) a(i, static_cast<Eigen::Index>(j)) = std::abs(dirs[i].dot(reps[j]));
      const int m = 2 + draw.index(3);
      std::vector<Zonotope::Generator> g;
      std::vector<int> used;
      while (static_cast<int>(g.size()) < m) {
        const int j = draw.index(static_cast<int>(reps.size()));
        if (std::find(used.begin(), used.end(), j) != used.end()) continue;
        used.push_back(j);
        g.push_back({reps[static_cast<std::size_t>(j)], draw.uniform(0.2, 1.5)});
      }
      if (!identifiable(a, used)) {
        ++rejected;
        continue;
      }
      ++t;
      const Zonotope z(n, g);
      const auto fit = zonotopeLSQ(toEigen(supportValues(z, dirs)), dirs, nodes(dirs));
      worstRes = std::max(worstRes, fit.residualNorm);
      // Match fitted generators to the true ones; anything unmatched must vanish.
      std::vector<double> matched(g.size(), 0.0);
      for (const auto& f : fit.zonotope.generators()) {
        bool hit = false;
        for (std::size_t q = 0; q < g.size(); ++q)
          if (std::abs(std::abs(f.direction.dot(g[q].direction)) - 1.0) < 1e-12) {
            matched[q] += f.halfLength;
            hit = true;
          }
        if (!hit) worstLen = std::max(worstLen, f.halfLength);
      }
      for (std::size_t q = 0; q < g.size(); ++q) worstLen = std::max(worstLen, std::abs(matched[q] - g[q].halfLength));
      ++cases;
    }
  return {worstLen <= 1e-8 && worstRes <= 1e-10,
          fmt("%d zonotopes, max half-length error %.2e, max residual %.2e; draws skipped as not determined by "
              "their data: %d",
              cases, worstLen, worstRes, rejected)};
}

AtomicMeasure randomPolygonMeasure(Draw& d) { return surfaceAreaMeasure(randomPolytope(d, 2, 3 + d.index(10))); }

AtomicMeasure randomEvenMeasure(Draw& d) {
  std::vector<AtomicMeasure::Atom> atoms;
  const int m = 2 + d.index(5);
  const double base = d.uniform(0, kPi);
  for (int j = 0; j < m; ++j) {
    const auto v = Direction::fromAngle(base + kPi * (j + d.uniform(0.1, 0.9)) / m);
    const double mass = d.uniform(0.1, 2.0);
    atoms.push_back({v, mass});
    atoms.push_back({-v, mass});
  }
  return AtomicMeasure(2, atoms);
}

// Largest per-atom mass difference, matching atoms by direction.
double atomGap(const AtomicMeasure& a, const AtomicMeasure& b, bool relative) {
  double worst = 0;
  for (const auto& x : a.atoms()) {
    double mass = 0;
    for (const auto& y : b.atoms())
      if (x.direction.chordTo(y.direction) < 1e-9) mass += y.mass;
    const double diff = std::abs(mass - x.mass);
    worst = std::max(worst, relative ? diff / x.mass : diff);
  }
  for (const auto& y : b.atoms()) {
    bool hit = false;
    for (const auto& x : a.atoms()) hit = hit || x.direction.chordTo(y.direction) < 1e-9;
    if (!hit) worst = std::max(worst, relative ? y.mass / b.totalMass() : y.mass);
  }
  return worst;
}

Outcome minkowskiRoundTrips() {
  Draw draw(707);
  double worst2 = 0, worst3 = 0;
  for (int t = 0; t < 100; ++t) {
    const auto s = t % 2 ? randomEvenMeasure(draw) : randomPolygonMeasure(draw);
    worst2 = std::max(worst2, atomGap(s, surfaceAreaMeasure(minkowskiReconstruct2D(s)), false));
  }
  for (int t = 0; t < 20; ++t) {
    const auto s = surfaceAreaMeasure(randomPolytope(draw, 3, 8 + draw.index(20)));
    worst3 = std::max(worst3, atomGap(s, surfaceAreaMeasure(minkowskiReconstruct3D(s)), true));
  }
  return {worst2 <= 1e-8 && worst3 <= 1e-4,
          fmt("2D max atom error %.2e (100 measures), 3D max relative facet error %.2e (20 polytopes)", worst2, worst3)};
}

Outcome dudleyCorrectness() {
  double worstClosed = 0;
  for (double w : {0.1, 0.3, 0.7, 1.0, 2.0, 5.0})
    for (double ang : {0.01, 0.2, 0.6, 1.0, 1.7, 2.5, 3.1}) {
      const Direction x = Direction::fromAngle(0.3), y = Direction::fromAngle(0.3 + ang);
      const double d = x.chordTo(y);
      const double v = dudley(AtomicMeasure(2, {{x, w}}), AtomicMeasure(2, {{y, w}}));
      worstClosed = std::max(worstClosed, std::abs(v - 2 * w * d / (d + 2)));
    }
  Draw draw(808);
  double worstExcess = -1e300;
  const int instances = 20;
  for (int inst = 0; inst < instances; ++inst) {
    const int n = 2 + inst % 2;
    std::vector<AtomicMeasure::Atom> a, b;
    for (int i = 0; i < 2 + draw.index(5); ++i) a.push_back({draw.direction(n), draw.uniform(0.05, 1.0)});
    for (int i = 0; i < 2 + draw.index(5); ++i) b.push_back({draw.direction(n), draw.uniform(0.05, 1.0)});
    const AtomicMeasure mu(n, a), nu(n, b);
    const double value = dudley(mu, nu);
    std::vector<Direction> pts;
    std::vector<double> c;
    for (const auto& x : a) pts.push_back(x.direction), c.push_back(x.mass);
    for (const auto& x : b) pts.push_back(x.direction), c.push_back(-x.mass);
    for (int f = 0; f < 1000; ++f) {
      // Random values on the support scaled to bounded Lipschitz norm 1; any
      // such function extends to the sphere with the same norm.
      std::vector<double> v(pts.size());
      for (auto& x : v) x = draw.uniform(-1, 1);
      double sup = 0, lip = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        sup = std::max(sup, std::abs(v[i]));
        for (std::size_t j = 0; j < i; ++j)
          if (double dij = pts[i].chordTo(pts[j]); dij > 1e-12) lip = std::max(lip, std::abs(v[i] - v[j]) / dij);
      }
      double integral = 0;
      for (std::size_t i = 0; i < v.size(); ++i) integral += c[i] * v[i] / (sup + lip);
      worstExcess = std::max(worstExcess, integral - value);
    }
  }
  return {worstClosed <= 1e-8 && worstExcess <= 1e-9,
          fmt("closed-form error %.2e over 42 (w, d); max sampled excess %.2e over %d x 1000 functions", worstClosed,
              worstExcess, instances)};
}

// Smallest eps with mass(F) <= other(F^eps) + eps, F^eps the open enlargement.
double epsFor(double massF, const std::vector<double>& dist, const std::vector<double>& otherMass) {
  std::vector<std::size_t> order(dist.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  double best = std::max(0.0, massF);
  double cum = 0;
  for (std::size_t idx : order) {
    cum += otherMass[idx];
    best = std::min(best, std::max(dist[idx], massF - cum));
  }
  return best;
}

Outcome prohorovBound() {
  Draw draw(909);
  int pairs = 0, tried = 0;
  double worstRatio = 0;
  while (pairs < 200 && tried < 5000) {
    ++tried;
    const int n = 2 + tried % 2;
    std::vector<AtomicMeasure::Atom> a, b;
    for (int i = 0; i < 1 + draw.index(5); ++i) a.push_back({draw.direction(n), draw.uniform(0.05, 0.6)});
    if (tried % 3 == 0) {
      for (const auto& x : a) {
        Vector v = x.direction.vec();
        for (int c = 0; c < n; ++c) v[c] += 0.1 * draw.gaussian();
        b.push_back({Direction(v), x.mass * draw.uniform(0.7, 1.3)});
      }
    } else {
      for (int i = 0; i < 1 + draw.index(5); ++i) b.push_back({draw.direction(n), draw.uniform(0.05, 0.6)});
    }
    const AtomicMeasure mu(n, a), nu(n, b);
    const auto bound = prohorovUpper(mu, nu);
    if (!bound.valid) continue;
    ++pairs;
    std::vector<Direction> pts;
    std::vector<double> pm, qm;
    for (const auto& x : a) pts.push_back(x.direction), pm.push_back(x.mass), qm.push_back(0.0);
    for (const auto& x : b) pts.push_back(x.direction), pm.push_back(0.0), qm.push_back(x.mass);
    const std::size_t p = pts.size();
    for (int cand = 0; cand < 1000; ++cand) {
      std::vector<char> inF(p, 0);
      if (cand < static_cast<int>(p)) {
        inF[static_cast<std::size_t>(cand)] = 1;
      } else {
        const double keep = draw.uniform();
        for (auto& f : inF) f = draw.uniform() < keep;
      }
      double muF = 0, nuF = 0;
      std::vector<double> dist(p, 1e300);
      for (std::size_t i = 0; i < p; ++i) {
        if (!inF[i]) continue;
        muF += pm[i];
        nuF += qm[i];
        for (std::size_t j = 0; j < p; ++j) dist[j] = std::min(dist[j], pts[i].chordTo(pts[j]));
      }
      if (muF + nuF == 0) continue;
      const double eps = std::max(epsFor(muF, dist, qm), epsFor(nuF, dist, pm));
      worstRatio = std::max(worstRatio, eps / bound.bound);
    }
  }
  return {pairs == 200 && worstRatio <= 1.0,
          fmt("%d pairs with d_D <= 1, largest violation eps / bound = %.3f", pairs, worstRatio)};
}

Outcome lemmaL2Bound() {
  Draw draw(1010);
  int checks = 0;
  double worstRatio = 0;
  for (int k : {5, 20, 100}) {
    for (int t = 0; t < 200; ++t) {
      DirectionSequence dirs(2);
      if (t % 2) {
        for (int i = 0; i < k; ++i) dirs.push_back(draw.direction(2));
      } else {
        dirs = equallySpaced2D(static_cast<std::size_t>(k), draw.uniform(0, 2 * kPi));
      }
      const double s = draw.uniform(0.5, 3.0);
      auto inBall = [&] {
        std::vector<Vector> pts;
        for (int i = 0; i < 3 + draw.index(8); ++i) pts.push_back(draw.direction(2).vec() * s * std::sqrt(draw.uniform()));
        return VPolytope(2, pts);
      };
      const auto l = inBall(), m = inBall();
      std::vector<double> diff;
      for (const auto& u : dirs) diff.push_back(supportFunction(l, u) - supportFunction(m, u));
      const auto stats = spreadStats(dirs);
      const double rhs = std::sqrt(k * stats.maxVoronoiMeasure) * (pseudonormK(diff) + 2 * stats.spread.value * s);
      worstRatio = std::max(worstRatio, l2dist(l, m).value / rhs);
      ++checks;
    }
  }
  return {worstRatio <= 1.0, fmt("%d polygon pairs, largest lhs / rhs = %.3f", checks, worstRatio)};
}

Outcome consistencyTrend() {
  std::string detail;
  bool ok = true;
  for (Pipeline p : {Pipeline::Support, Pipeline::Brightness}) {
    const auto& body = referenceBodies().at(p == Pipeline::Support ? "11-gon" : "12-gon");
    std::vector<double> med;
    for (std::size_t k : {20u, 40u, 80u, 160u}) {
      const auto dirs = p == Pipeline::Support ? equallySpaced2D(k) : equallySpacedHalfCircle(k);
      std::vector<double> errs;
      for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        if (p == Pipeline::Support) {
          const auto r = noisySupportLSQ(simulateMeasurements(body, MeasurementKind::Support, dirs, 0.1, seed));
          errs.push_back(hausdorff(r.body, body).value);
        } else {
          const auto r = noisyBrightLSQ(simulateMeasurements(body, MeasurementKind::Brightness, dirs, 0.1, seed));
          errs.push_back(r.phase2Ok ? hausdorff(r.body, body).value : 1e300);
        }
      }
      med.push_back(median(errs));
    }
    int nonStrict = 0;
    for (std::size_t i = 1; i < med.size(); ++i) nonStrict += med[i] >= med[i - 1];
    ok = ok && nonStrict <= 1;
    detail += fmt("%s medians %.4f %.4f %.4f %.4f; ", toString(p), med[0], med[1], med[2], med[3]);
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Outcome stackedNetQuality() {
  const std::size_t kmax = 10000;
  // n = 2: exact spread of every prefix.
  const auto s2 = stackedNetSequence(2, kmax);
  SpreadTracker tracker(2);
  double c2 = 0;
  for (std::size_t k = 1; k <= kmax; ++k) {
    tracker.add(s2[k - 1]);
    c2 = std::max(c2, tracker.current().value * static_cast<double>(k));
  }
  // n = 3: exact spread for every k <= 1000, then at checkpoints k_0 < k_1 <
  // ...; the spread cannot grow with k, so Delta_{k_i} sqrt(k_{i+1} - 1)
  // bounds every k in between.
  const auto s3 = stackedNetSequence(3, kmax);
  double c3 = 0, prev = 0;
  std::size_t prevK = 0;
  for (std::size_t k = 1; k <= kmax; k = k < 1000 ? k + 1 : std::min(kmax, k + 1 + k / 200)) {
    const double d = spread(s3.prefix(k)).upper();
    c3 = std::max(c3, d * std::sqrt(static_cast<double>(k)));
    if (prevK && k > prevK + 1) c3 = std::max(c3, prev * std::sqrt(static_cast<double>(k - 1)));
    prev = d;
    prevK = k;
    if (k == kmax) break;
  }
  const bool ok = c2 <= kStackedNetSpreadConstant2D && c3 <= kStackedNetSpreadConstant3D;
  return {ok, fmt("max Delta_k k = %.3f (C = %.0f), max Delta_k k^(1/2) = %.3f (C = %.0f), k <= %zu", c2,
                  kStackedNetSpreadConstant2D, c3, kStackedNetSpreadConstant3D, kmax)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"noiseless support exactness", noiselessExactness},
      {"rate in k", rateK},
      {"rate in R", rateR},
      {"rate in sigma", rateSigma},
      {"brightness/support equivalence", brightnessSupportEquivalence},
      {"zonotope NNLS recovery", zonotopeRecovery},
      {"Minkowski round trips", minkowskiRoundTrips},
      {"Dudley LP", dudleyCorrectness},
      {"Prohorov bound", prohorovBound},
      {"L2 bound from sampled supports", lemmaL2Bound},
      {"consistency trend", consistencyTrend},
      {"stacked net spread", stackedNetQuality},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
