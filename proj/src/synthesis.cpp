#include "hsu2/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "hsu2/parallel.hpp"

namespace hsu2 {

namespace {

constexpr double kExtractTol = 1e-9;
constexpr double kCrossingTol = 1e-6;
constexpr double kSolveTol = 1e-8;
constexpr double kZeroSeedCeiling = 0.3;

struct Point2 {
  double x = 0;  // amplitude coordinate
  double y = 0;  // exchange coordinate
};

double cell_size(const ScanConfig& cfg) {
  const double dx = (cfg.region.amplMax - cfg.region.amplMin) / (cfg.gridResolution - 1);
  const double dy = (cfg.region.jMax - cfg.region.jMin) / (cfg.gridResolution - 1);
  return std::max(dx, dy);
}

// Scalar whose sign change marks the target level (targets in (0,1]).
double level_value(const Matrix2cd& u, double target, int q) {
  if (target >= 1.0) {
    const std::complex<double> b = u(0, 1);
    return q == 1 ? b.imag() : b.real();
  }
  return extract_gate_form(u, kExtractTol).A - target;
}

double level_at(double x, double y, const ScanConfig& cfg) {
  return level_value(block_unitary(x, y, cfg), cfg.targetA, cfg.q);
}

std::complex<double> diagonal_at(double x, double y, const ScanConfig& cfg) {
  return block_unitary(x, y, cfg)(0, 0);
}

// Root of f on [lo, hi] given a sign change; f(lo), f(hi) supplied.
double bracketed_root(const std::function<double(double)>& f, double lo, double hi) {
  boost::math::tools::eps_tolerance<double> tol(48);
  std::uintmax_t maxIter = 100;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, maxIter);
  return 0.5 * (a + b);
}

// Damped Newton solve of U_00(x, y) = 0 with a forward-difference Jacobian.
std::optional<Point2> newton_zero(Point2 p, const ScanConfig& cfg, double maxStep, int& evaluations) {
  constexpr double h = 1e-6;
  for (int it = 0; it < 50; ++it) {
    const std::complex<double> f = diagonal_at(p.x, p.y, cfg);
    ++evaluations;
    if (std::abs(f) <= 1e-11) return p;
    const std::complex<double> fx = (diagonal_at(p.x + h, p.y, cfg) - f) / h;
    const std::complex<double> fy = (diagonal_at(p.x, p.y + h, cfg) - f) / h;
    evaluations += 2;
    Eigen::Matrix2d jac;
    jac << fx.real(), fy.real(), fx.imag(), fy.imag();
    const double det = jac.determinant();
    if (std::abs(det) < 1e-14) return std::nullopt;
    Eigen::Vector2d delta = jac.inverse() * Eigen::Vector2d(-f.real(), -f.imag());
    if (delta.norm() > maxStep) delta *= maxStep / delta.norm();
    p.x += delta.x();
    p.y += delta.y();
    if (!cfg.region.contains(p.x, p.y)) return std::nullopt;
  }
  if (std::abs(diagonal_at(p.x, p.y, cfg)) <= kCrossingTol) return p;
  return std::nullopt;
}

double mismatch(const GateForm<double>& g, const GateTarget& target) {
  double sum = 0.0;
  if (target.phi) sum += std::pow(wrap_angle(g.phi - *target.phi), 2);
  if (target.theta) sum += std::pow(wrap_angle(g.theta - *target.theta), 2);
  return std::sqrt(sum);
}

ContourPoint make_point(Point2 p, const ScanConfig& cfg) {
  ContourPoint cp;
  cp.ampl = p.x;
  cp.J = p.y;
  cp.gate = amplitude_at(p.x, p.y, cfg);
  cp.residual = cfg.recheck ? std::abs(reference_amplitude(p.x, p.y, cfg) - cfg.targetA)
                            : std::abs(cp.gate.A - cfg.targetA);
  return cp;
}

// Greedy nearest-neighbour chaining; starts each chain at an endpoint when one exists.
void chain_polylines(std::vector<ContourPoint>& pts, double radius) {
  const std::size_t n = pts.size();
  std::vector<char> used(n, 0);
  std::vector<ContourPoint> ordered;
  ordered.reserve(n);
  auto dist2 = [&](std::size_t a, std::size_t b) {
    const double dx = pts[a].ampl - pts[b].ampl;
    const double dy = pts[a].J - pts[b].J;
    return dx * dx + dy * dy;
  };
  const double r2 = radius * radius;
  auto free_neighbours = [&](std::size_t a) {
    int count = 0;
    for (std::size_t b = 0; b < n; ++b)
      if (b != a && !used[b] && dist2(a, b) <= r2) ++count;
    return count;
  };
  int id = 0;
  for (std::size_t remaining = n; remaining > 0; ++id) {
    std::size_t start = n;
    for (std::size_t a = 0; a < n && start == n; ++a)
      if (!used[a] && free_neighbours(a) <= 1) start = a;
    if (start == n)
      for (std::size_t a = 0; a < n && start == n; ++a)
        if (!used[a]) start = a;
    std::size_t cur = start;
    while (true) {
      used[cur] = 1;
      --remaining;
      pts[cur].polyline = id;
      ordered.push_back(pts[cur]);
      std::size_t next = n;
      double best = r2;
      for (std::size_t b = 0; b < n; ++b) {
        if (used[b]) continue;
        const double d = dist2(cur, b);
        if (d <= best) {
          best = d;
          next = b;
        }
      }
      if (next == n) break;
      cur = next;
    }
  }
  pts = std::move(ordered);
}

std::vector<Point2> interior_crossings(const ScanConfig& cfg, const std::vector<double>& xs,
                                       const std::vector<double>& ys, const std::vector<double>& g) {
  const int res = cfg.gridResolution;
  auto idx = [res](int i, int j) { return static_cast<std::size_t>(j) * res + i; };
  std::vector<char> onNode(g.size(), 0);
  std::vector<Point2> out;
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < res; ++i)
      if (std::abs(g[idx(i, j)]) <= kCrossingTol) {
        onNode[idx(i, j)] = 1;
        out.push_back({xs[i], ys[j]});
      }

  struct Edge {
    int i, j;
    bool horizontal;
  };
  std::vector<Edge> edges;
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < res; ++i) {
      const double g0 = g[idx(i, j)];
      if (onNode[idx(i, j)]) continue;
      if (i + 1 < res && !onNode[idx(i + 1, j)] && (g0 < 0) != (g[idx(i + 1, j)] < 0))
        edges.push_back({i, j, true});
      if (j + 1 < res && !onNode[idx(i, j + 1)] && (g0 < 0) != (g[idx(i, j + 1)] < 0))
        edges.push_back({i, j, false});
    }

  std::vector<std::optional<Point2>> found(edges.size());
  parallel_for(edges.size(), cfg.threads, [&](std::size_t e) {
    const Edge& ed = edges[e];
    Point2 p;
    if (ed.horizontal) {
      const double y = ys[ed.j];
      p = {bracketed_root([&](double x) { return level_at(x, y, cfg); }, xs[ed.i], xs[ed.i + 1]), y};
    } else {
      const double x = xs[ed.i];
      p = {x, bracketed_root([&](double y) { return level_at(x, y, cfg); }, ys[ed.j], ys[ed.j + 1])};
    }
    if (std::abs(level_at(p.x, p.y, cfg)) <= kCrossingTol) found[e] = p;
  });
  for (const auto& f : found)
    if (f) out.push_back(*f);
  return out;
}

std::vector<Point2> zero_points(const ScanConfig& cfg, const std::vector<double>& xs,
                                const std::vector<double>& ys, const std::vector<double>& amp) {
  const int res = cfg.gridResolution;
  auto idx = [res](int i, int j) { return static_cast<std::size_t>(j) * res + i; };
  std::vector<Point2> seeds;
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < res; ++i) {
      const double a = amp[idx(i, j)];
      if (a >= kZeroSeedCeiling) continue;
      bool isMin = true;
      for (int dj = -1; dj <= 1 && isMin; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int ii = i + di, jj = j + dj;
          if ((di || dj) && ii >= 0 && ii < res && jj >= 0 && jj < res && amp[idx(ii, jj)] < a) {
            isMin = false;
            break;
          }
        }
      if (isMin) seeds.push_back({xs[i], ys[j]});
    }

  const double cell = cell_size(cfg);
  std::vector<std::optional<Point2>> solved(seeds.size());
  parallel_for(seeds.size(), cfg.threads, [&](std::size_t s) {
    int evals = 0;
    solved[s] = newton_zero(seeds[s], cfg, cell, evals);
  });

  std::vector<Point2> out;
  for (const auto& p : solved) {
    if (!p) continue;
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const Point2& q) {
      return std::hypot(q.x - p->x, q.y - p->y) < 0.5 * cell;
    });
    if (!duplicate) out.push_back(*p);
  }
  return out;
}

}  // namespace

void validate(const ScanConfig& cfg) {
  if (!(cfg.targetA >= 0.0 && cfg.targetA <= 1.0)) throw ValidationError("targetA must lie in [0,1]");
  if (cfg.q != 1 && cfg.q != 2) throw ValidationError("q must be 1 or 2");
  if (!(cfg.region.amplMax > cfg.region.amplMin) || !(cfg.region.jMax > cfg.region.jMin))
    throw ValidationError("scan region is degenerate");
  if (cfg.gridResolution < 2) throw ValidationError("grid resolution must be >= 2");
  if (cfg.n < 1) throw ValidationError("partition count n must be >= 1");
  if (!(cfg.referenceTol > 0.0)) throw ValidationError("reference tolerance must be positive");
}

Matrix2cd block_unitary(double ampl, double J, const ScanConfig& cfg) {
  if (!std::isfinite(ampl) || !std::isfinite(J)) throw ValidationError("scan coordinates must be finite");
  EvolutionSpec spec{effective_block(J, cfg.q), FieldProfile::half_sine(ampl), cfg.n, cfg.order, false, false};
  return nearest_unitary(evolve(spec));
}

GateForm<double> amplitude_at(double ampl, double J, const ScanConfig& cfg) {
  return extract_gate_form(block_unitary(ampl, J, cfg), kExtractTol);
}

double reference_amplitude(double ampl, double J, const ScanConfig& cfg) {
  ReferenceOptions opts;
  opts.tol = cfg.referenceTol;
  const Matrix2cd u = reference(effective_block(J, cfg.q), FieldProfile::half_sine(ampl), false, opts);
  return extract_gate_form(u, kExtractTol).A;
}

std::vector<ContourPoint> scan_plane(const ScanConfig& cfg) {
  validate(cfg);
  const int res = cfg.gridResolution;
  std::vector<double> xs(res), ys(res);
  for (int i = 0; i < res; ++i) {
    xs[i] = cfg.region.amplMin + (cfg.region.amplMax - cfg.region.amplMin) * i / (res - 1);
    ys[i] = cfg.region.jMin + (cfg.region.jMax - cfg.region.jMin) * i / (res - 1);
  }

  const bool zeroTarget = cfg.targetA == 0.0;
  std::vector<double> nodes(static_cast<std::size_t>(res) * res);
  parallel_for(nodes.size(), cfg.threads, [&](std::size_t k) {
    const double x = xs[k % res], y = ys[k / res];
    const Matrix2cd u = block_unitary(x, y, cfg);
    nodes[k] = zeroTarget ? std::abs(u(0, 0)) : level_value(u, cfg.targetA, cfg.q);
  });

  const std::vector<Point2> raw = zeroTarget ? zero_points(cfg, xs, ys, nodes) : interior_crossings(cfg, xs, ys, nodes);

  std::vector<ContourPoint> points(raw.size());
  parallel_for(raw.size(), cfg.threads, [&](std::size_t k) { points[k] = make_point(raw[k], cfg); });
  chain_polylines(points, 1.5 * cell_size(cfg));
  return points;
}

double circular_std(const std::vector<double>& angles) {
  if (angles.empty()) return 0.0;
  std::complex<double> sum = 0.0;
  for (double a : angles) sum += std::polar(1.0, a);
  const double r = std::abs(sum) / static_cast<double>(angles.size());
  return r >= 1.0 ? 0.0 : std::sqrt(-2.0 * std::log(r));
}

std::vector<PolylineSummary> summarize_polylines(const std::vector<ContourPoint>& points) {
  std::vector<PolylineSummary> out;
  std::vector<std::vector<double>> thetas;
  for (const auto& p : points) {
    if (p.polyline < 0) continue;
    const auto id = static_cast<std::size_t>(p.polyline);
    if (id >= out.size()) {
      out.resize(id + 1);
      thetas.resize(id + 1);
    }
    out[id].id = p.polyline;
    out[id].size++;
    out[id].meanA += p.gate.A;
    thetas[id].push_back(p.gate.theta);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size > 0) out[i].meanA /= static_cast<double>(out[i].size);
    out[i].thetaStd = circular_std(thetas[i]);
  }
  return out;
}

SolveResult solve_for_target(const GateTarget& target, double seedAmpl, double seedJ, const ScanConfig& base) {
  ScanConfig cfg = base;
  cfg.targetA = target.A;
  validate(cfg);
  if (!cfg.region.contains(seedAmpl, seedJ)) throw ValidationError("seed lies outside the scan region");

  SolveResult result;
  int& evals = result.evaluations;
  const double cell = cell_size(cfg);
  auto finish = [&](Point2 p) {
    result.point.ampl = p.x;
    result.point.J = p.y;
    result.point.gate = amplitude_at(p.x, p.y, cfg);
    result.amplitudeResidual = std::abs(result.point.gate.A - target.A);
    result.point.residual = result.amplitudeResidual;
    result.phaseResidual = mismatch(result.point.gate, target);
    return result;
  };

  if (target.A == 0.0) {
    const auto p = newton_zero({seedAmpl, seedJ}, cfg, cell, evals);
    if (!p) {
      std::ostringstream msg;
      msg << "no zero of the diagonal entry reached from seed (" << seedAmpl << ", " << seedJ
          << "); A(seed) = " << amplitude_at(seedAmpl, seedJ, cfg).A;
      throw NotFoundError(msg.str());
    }
    return finish(*p);
  }

  auto g = [&](double x, double y) {
    ++evals;
    return level_at(x, y, cfg);
  };
  constexpr double fd = 1e-5;
  auto gradient = [&](Point2 p) {
    return Eigen::Vector2d((g(p.x + fd, p.y) - g(p.x - fd, p.y)) / (2 * fd),
                           (g(p.x, p.y + fd) - g(p.x, p.y - fd)) / (2 * fd));
  };

  // Root of g along p + s * dir for s in (0, reach], or nothing.
  auto root_along = [&](Point2 p, Eigen::Vector2d dir, double g0, double reach) -> std::optional<Point2> {
    double prev = 0.0;
    for (double s = std::min(0.25 * cell, reach); ; s = std::min(2 * s, reach)) {
      const Point2 q{p.x + s * dir.x(), p.y + s * dir.y()};
      if (!cfg.region.contains(q.x, q.y)) return std::nullopt;
      const double gs = g(q.x, q.y);
      if (gs == 0.0) return q;
      if ((gs < 0) != (g0 < 0)) {
        const double r = bracketed_root(
            [&](double t) { return g(p.x + t * dir.x(), p.y + t * dir.y()); }, prev, s);
        const Point2 root{p.x + r * dir.x(), p.y + r * dir.y()};
        if (std::abs(g(root.x, root.y)) <= kSolveTol) return root;
        return std::nullopt;
      }
      prev = s;
      if (s >= reach) return std::nullopt;
    }
  };

  const double regionSpan = std::hypot(cfg.region.amplMax - cfg.region.amplMin, cfg.region.jMax - cfg.region.jMin);
  // Puts p on the contour by a 1-D search along the local gradient.
  auto correct = [&](Point2 p, double reach) -> std::optional<Point2> {
    const double g0 = g(p.x, p.y);
    if (std::abs(g0) <= kSolveTol) return p;
    Eigen::Vector2d grad = gradient(p);
    if (grad.norm() == 0.0) return std::nullopt;
    grad.normalize();
    const Eigen::Vector2d toward = g0 > 0 ? Eigen::Vector2d(-grad) : grad;
    if (auto r = root_along(p, toward, g0, reach)) return r;
    return root_along(p, -toward, g0, reach);
  };

  const auto start = correct({seedAmpl, seedJ}, regionSpan);
  if (!start) {
    std::ostringstream msg;
    msg << "no sign change of the level function for target A = " << target.A
        << " along the steepest direction from seed (" << seedAmpl << ", " << seedJ
        << "); level(seed) = " << level_at(seedAmpl, seedJ, cfg);
    throw NotFoundError(msg.str());
  }
  if (!target.phi && !target.theta) return finish(*start);

  // Predictor-corrector walk along the contour, keeping the best phase match.
  auto score = [&](Point2 p) { return mismatch(amplitude_at(p.x, p.y, cfg), target); };
  auto advance = [&](Point2 p, double h, int dirSign) -> std::optional<Point2> {
    Eigen::Vector2d grad = gradient(p);
    if (grad.norm() == 0.0) return std::nullopt;
    const Eigen::Vector2d tangent = Eigen::Vector2d(-grad.y(), grad.x()).normalized() * dirSign;
    const Point2 pred{p.x + h * tangent.x(), p.y + h * tangent.y()};
    if (!cfg.region.contains(pred.x, pred.y)) return std::nullopt;
    return correct(pred, 2 * h);
  };

  Point2 best = *start;
  double bestScore = score(best);
  const int maxSteps = 2 * cfg.gridResolution;
  for (int dirSign : {1, -1}) {
    Point2 p = *start;
    for (int k = 0; k < maxSteps; ++k) {
      const auto next = advance(p, cell, dirSign);
      if (!next) break;
      p = *next;
      const double s = score(p);
      if (s < bestScore) {
        bestScore = s;
        best = p;
      }
      if (k > 2 && std::hypot(p.x - start->x, p.y - start->y) < 0.5 * cell) break;
    }
  }
  for (double h = 0.5 * cell; h > 1e-10; h *= 0.5) {
    for (int dirSign : {1, -1}) {
      const auto cand = advance(best, h, dirSign);
      if (!cand) continue;
      const double s = score(*cand);
      if (s < bestScore) {
        bestScore = s;
        best = *cand;
      }
    }
  }
  return finish(best);
}

}  // namespace hsu2
