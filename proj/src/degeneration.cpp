#include "toric/degeneration.hpp"

#include <algorithm>
#include <array>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>

#include "toric/error.hpp"

namespace toric {

namespace {

std::vector<double> log_weights_of(std::span<const double> weights) {
  std::vector<double> out(weights.size());
  for (std::size_t a = 0; a < weights.size(); ++a) out[a] = std::log(weights[a]);
  return out;
}

void check_lifting(const LatticeConfig& config, const Lifting& lifting) {
  if (lifting.size() != config.size()) {
    throw Error(ErrorCode::MissingLiftValue, "lifting has " + std::to_string(lifting.size()) +
                                                 " values for " + std::to_string(config.size()) +
                                                 " points");
  }
}

// Appends a sampled piece to `set`, shifting the grid cells.
void append_piece(SampledSet& set, const PatchSpec& spec, std::span<const double> log_weights,
                  const DomainGrid& grid, std::string name, Execution exec) {
  const std::size_t base = set.points.size();
  evaluate_params(spec.basis(), log_weights, spec.control_points(), grid.params, set.points, exec);
  MeshGroup g = grid.mesh;
  g.name = std::move(name);
  for (auto& cell : g.cells) {
    for (auto& i : cell) i += base;
  }
  set.groups.push_back(std::move(g));
}

double group_pitch(const PointCloud& pts, const MeshGroup& g) {
  double worst = 0.0;
  auto edge = [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (int k = 0; k < pts.dim; ++k) {
      const double d = pts.coords[i * pts.dim + k] - pts.coords[j * pts.dim + k];
      s += d * d;
    }
    worst = std::max(worst, std::sqrt(s));
  };
  for (const auto& c : g.cells) {
    if (c.size() < 2) continue;
    if (c.size() == 2) {
      edge(c[0], c[1]);
      continue;
    }
    for (std::size_t k = 0; k < c.size(); ++k) edge(c[k], c[(k + 1) % c.size()]);
  }
  return worst;
}

void triangular_grid(const std::array<double, 2>& v0, const std::array<double, 2>& v1,
                     const std::array<double, 2>& v2, int m, DomainGrid& grid) {
  const std::size_t base = grid.params.size() / 2;
  std::vector<std::size_t> row_start(m + 1, 0);
  for (int j = 0; j < m; ++j) row_start[j + 1] = row_start[j] + (m - j);
  auto idx = [&](int i, int j) { return base + row_start[j] + i; };
  const double step = 1.0 / (m - 1);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i + j < m; ++i) {
      const double s = i * step, t = j * step;
      grid.params.push_back(v0[0] + s * (v1[0] - v0[0]) + t * (v2[0] - v0[0]));
      grid.params.push_back(v0[1] + s * (v1[1] - v0[1]) + t * (v2[1] - v0[1]));
    }
  }
  for (int j = 0; j + 1 < m; ++j) {
    for (int i = 0; i + j + 1 < m; ++i) {
      grid.mesh.cells.push_back({idx(i, j), idx(i + 1, j), idx(i, j + 1)});
      if (i + j + 2 < m) grid.mesh.cells.push_back({idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)});
    }
  }
}

struct Chart {
  std::string name;
  std::vector<double> log_weights;
};

// Torus charts of Y(t): the plain one and one per facet of S_lambda.
std::vector<Chart> degeneration_charts(const PatchSpec& spec, const Lifting& lifting, double t) {
  const auto& config = spec.config();
  check_lifting(config, lifting);
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveT, "t must be positive");
  const double log_t = std::log(t);
  const auto base = log_weights_of(spec.weights());
  const std::size_t n = config.size();

  std::vector<Chart> charts;
  Rational top = lifting[0];
  for (std::size_t a = 1; a < n; ++a) top = std::max(top, lifting[a]);
  Chart plain{"chart_identity", base};
  for (std::size_t a = 0; a < n; ++a) plain.log_weights[a] += to_double(lifting[a] - top) * log_t;
  charts.push_back(std::move(plain));

  const auto dec = regular_decomposition(config, lifting);
  const auto facets = dec.facets();
  for (std::size_t f = 0; f < facets.size(); ++f) {
    const auto plane = facet_plane(config, facets[f], lifting);
    Chart c{"chart_facet_" + std::to_string(f), base};
    for (std::size_t a = 0; a < n; ++a) {
      c.log_weights[a] += to_double(lifting[a] - plane(config.point(a))) * log_t;
    }
    charts.push_back(std::move(c));
  }
  return charts;
}

}  // namespace

double SampledSet::sampling_pitch() const {
  if (measured_gap >= 0.0) return measured_gap;
  double out = 0.0;
  for (const auto& g : groups) out = std::max(out, group_pitch(points, g));
  return out;
}

std::vector<double> degeneration_weights(std::span<const double> weights, const Lifting& lifting,
                                         double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveT, "t must be positive, got " + std::to_string(t));
  if (lifting.size() != weights.size()) {
    throw Error(ErrorCode::MissingLiftValue, "lifting and weights differ in length");
  }
  std::vector<double> out(weights.size());
  for (std::size_t a = 0; a < weights.size(); ++a) {
    out[a] = std::pow(t, to_double(lifting[a])) * weights[a];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Control surfaces

ControlSurface control_surface(const PatchSpec& spec, const Decomposition& decomposition) {
  if (!decomposition.validated()) {
    throw Error(ErrorCode::UnvalidatedInput, "decomposition must be validated first");
  }
  if (decomposition.num_points() != spec.config().size()) {
    throw Error(ErrorCode::FaceNotSubset, "decomposition is over " +
                                              std::to_string(decomposition.num_points()) +
                                              " points, patch has " +
                                              std::to_string(spec.config().size()));
  }
  ControlSurface s;
  s.decomposition = decomposition;
  s.faces = decomposition.faces();
  for (std::size_t i = 0; i < s.faces.size(); ++i) {
    s.pieces.push_back(spec.restrict_to(s.faces[i].members));
    if (s.faces[i].dim == decomposition.dim()) s.facet_pieces.push_back(i);
  }
  return s;
}

double ControlSurface::max_facet_diameter() const {
  double best = 0.0;
  for (auto fi : facet_pieces) {
    const auto& b = pieces[fi].control_points();
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (std::size_t j = i + 1; j < b.size(); ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < b[i].size(); ++k) s += (b[i][k] - b[j][k]) * (b[i][k] - b[j][k]);
        best = std::max(best, std::sqrt(s));
      }
    }
  }
  return best;
}

double ControlSurface::c0_mismatch(int samples_per_edge) const {
  double worst = 0.0;
  for (auto fi : facet_pieces) {
    const auto& fmembers = faces[fi].members;
    const auto& fspec = pieces[fi];
    const auto flogw = log_weights_of(fspec.weights());
    for (std::size_t hi = 0; hi < faces.size(); ++hi) {
      const auto& h = faces[hi];
      if (h.dim != 1 || !std::includes(fmembers.begin(), fmembers.end(), h.members.begin(), h.members.end())) {
        continue;
      }
      const auto& hspec = pieces[hi];
      const auto& hbasis = hspec.basis();
      const auto hlogw = log_weights_of(hspec.weights());
      const auto& dom = hbasis.domain();
      const int ia = dom.vertices[0], ib = dom.vertices[1];  // local labels at min and max
      const double k0 = static_cast<double>(dom.vertex_points[0][0]);
      const double k1 = static_cast<double>(dom.vertex_points[1][0]);
      const int ga = h.members[ia], gb = h.members[ib];
      const auto fa = std::lower_bound(fmembers.begin(), fmembers.end(), ga) - fmembers.begin();
      const auto fb = std::lower_bound(fmembers.begin(), fmembers.end(), gb) - fmembers.begin();
      const auto& pa = fspec.config().point(fa);
      const auto& pb = fspec.config().point(fb);

      std::vector<double> flog(fspec.config().size()), fcoef(fspec.config().size()),
          hcoef(hspec.config().size());
      for (int s = 1; s <= samples_per_edge; ++s) {
        const double r = static_cast<double>(s) / (samples_per_edge + 1);
        std::vector<double> x(pa.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
          x[j] = static_cast<double>(pa[j]) + r * static_cast<double>(pb[j] - pa[j]);
        }
        const auto uf = fspec.basis().chart().to_local(x);
        fspec.basis().log_basis(uf, flog);
        const double gamma = (flog[fb] - flog[fa]) / (k1 - k0);
        double u;
        if (gamma > 0) {
          const double e = std::exp(-gamma);
          u = (k0 * e + k1) / (e + 1.0);
        } else {
          const double e = std::exp(gamma);
          u = (k0 + k1 * e) / (1.0 + e);
        }
        blend_coefficients(fspec.basis(), flogw, uf, fcoef);
        blend_coefficients(hbasis, hlogw, std::span<const double>(&u, 1), hcoef);
        const auto pf = project(fspec.control_points(), SimplexPoint{fcoef});
        const auto ph = project(hspec.control_points(), SimplexPoint{hcoef});
        double d = 0.0;
        for (std::size_t j = 0; j < pf.size(); ++j) d += (pf[j] - ph[j]) * (pf[j] - ph[j]);
        worst = std::max(worst, std::sqrt(d));
      }
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Sampling

DomainGrid domain_grid(const ToricBasis& basis, int m) {
  if (m < 2) throw Error(ErrorCode::InvalidConfig, "resolution must be at least 2");
  DomainGrid grid;
  if (basis.size() == 1) {
    grid.param_dim = 1;
    grid.params.assign(m, 0.0);
    grid.mesh.cell_dim = 0;
    for (int i = 0; i < m; ++i) grid.mesh.cells.push_back({static_cast<std::size_t>(i)});
    return grid;
  }
  const auto& dom = basis.domain();
  if (dom.dim == 1) {
    grid.param_dim = 1;
    grid.mesh.cell_dim = 1;
    const double lo = static_cast<double>(dom.vertex_points[0][0]);
    const double hi = static_cast<double>(dom.vertex_points[1][0]);
    for (int i = 0; i < m; ++i) grid.params.push_back(lo + (hi - lo) * i / (m - 1));
    for (int i = 0; i + 1 < m; ++i) grid.mesh.cells.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1)});
    return grid;
  }
  if (dom.dim != 2) throw Error(ErrorCode::Unsupported, "sampling is implemented for d <= 2");
  grid.param_dim = 2;
  grid.mesh.cell_dim = 2;
  std::vector<std::array<double, 2>> v;
  for (const auto& p : dom.vertex_points) v.push_back({static_cast<double>(p[0]), static_cast<double>(p[1])});
  if (v.size() == 4) {
    for (int j = 0; j < m; ++j) {
      const double t = static_cast<double>(j) / (m - 1);
      for (int i = 0; i < m; ++i) {
        const double s = static_cast<double>(i) / (m - 1);
        for (int k = 0; k < 2; ++k) {
          grid.params.push_back((1 - s) * (1 - t) * v[0][k] + s * (1 - t) * v[1][k] + s * t * v[2][k] +
                                (1 - s) * t * v[3][k]);
        }
      }
    }
    auto idx = [m](int i, int j) { return static_cast<std::size_t>(j * m + i); };
    for (int j = 0; j + 1 < m; ++j) {
      for (int i = 0; i + 1 < m; ++i) grid.mesh.cells.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)});
    }
    return grid;
  }
  for (std::size_t k = 1; k + 1 < v.size(); ++k) triangular_grid(v[0], v[k], v[k + 1], m, grid);
  return grid;
}

SampledSet sample(const PatchSpec& spec, int m, Execution exec) {
  SampledSet set;
  set.resolution = m;
  set.provenance = "patch";
  const auto grid = domain_grid(spec.basis(), m);
  append_piece(set, spec, log_weights_of(spec.weights()), grid, "patch", exec);
  return set;
}

SampledSet sample(const ControlSurface& surface, int m, Execution exec) {
  SampledSet set;
  set.resolution = m;
  set.provenance = "control_surface";
  for (std::size_t k = 0; k < surface.facet_pieces.size(); ++k) {
    const auto& piece = surface.pieces[surface.facet_pieces[k]];
    append_piece(set, piece, log_weights_of(piece.weights()), domain_grid(piece.basis(), m),
                 "piece_" + std::to_string(k), exec);
  }
  return set;
}

SampledSet sample_degeneration(const PatchSpec& spec, const Lifting& lifting, double t, int m,
                               Execution exec) {
  SampledSet set;
  set.resolution = m;
  set.groups_are_charts = true;
  char buf[64];
  std::snprintf(buf, sizeof buf, "degeneration t=%.17g", t);
  set.provenance = buf;
  const auto grid = domain_grid(spec.basis(), m);
  const auto charts = degeneration_charts(spec, lifting, t);
  for (const auto& chart : charts) append_piece(set, spec, chart.log_weights, grid, chart.name, exec);

  // Probe between samples: cell centroids and edge midpoints in every chart.
  const std::size_t k = grid.param_dim;
  std::vector<double> mids;
  for (const auto& cell : grid.mesh.cells) {
    if (cell.size() < 2) continue;
    for (std::size_t j = 0; j < k; ++j) {
      double c = 0.0;
      for (auto i : cell) c += grid.params[i * k + j];
      mids.push_back(c / static_cast<double>(cell.size()));
    }
    const std::size_t edges = cell.size() == 2 ? 1 : cell.size();
    for (std::size_t e = 0; e < edges; ++e) {
      const auto a = cell[e], b = cell[(e + 1) % cell.size()];
      for (std::size_t j = 0; j < k; ++j) mids.push_back(0.5 * (grid.params[a * k + j] + grid.params[b * k + j]));
    }
  }
  if (mids.empty()) {
    set.measured_gap = 0.0;
    return set;
  }
  PointCloud probes;
  for (const auto& chart : charts) {
    evaluate_params(spec.basis(), chart.log_weights, spec.control_points(), mids, probes, exec);
  }
  set.measured_gap = directed_hausdorff(probes, set.points, HausdorffMethod::GridIndex, exec);
  return set;
}

double hausdorff_distance(const SampledSet& x, const SampledSet& y, HausdorffMethod method,
                          Execution exec) {
  if (x.points.size() == 0 || y.points.size() == 0) throw Error(ErrorCode::EmptySet, "sample set is empty");
  if (x.points.dim != y.points.dim) {
    throw Error(ErrorCode::EmptySet, "sample sets live in different dimensions");
  }
  return std::max(directed_hausdorff(x.points, y.points, method, exec),
                  directed_hausdorff(y.points, x.points, method, exec));
}

// ---------------------------------------------------------------------------
// Sweeps

double convergence_threshold(const ControlSurface& surface, int m, double tolerance_scale) {
  return tolerance_scale * 3.0 * surface.max_facet_diameter() / m;
}

SweepResult distance_sweep(const PatchSpec& spec, const Lifting& lifting, const ControlSurface& target,
                           std::span<const double> schedule, int m, double tolerance_scale,
                           Execution exec) {
  if (schedule.empty()) throw Error(ErrorCode::InvalidConfig, "schedule is empty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] >= 1.0)) throw Error(ErrorCode::NonpositiveT, "schedule values must be >= 1");
    if (i > 0 && !(schedule[i] > schedule[i - 1])) {
      throw Error(ErrorCode::InvalidConfig, "schedule must be strictly increasing");
    }
  }
  SweepResult result;
  result.threshold = convergence_threshold(target, m, tolerance_scale);
  const auto limit = sample(target, m, exec);
  const double limit_pitch = limit.sampling_pitch();
  for (double t : schedule) {
    const auto y = sample_degeneration(spec, lifting, t, m, exec);
    SweepRow row;
    row.t = t;
    row.hausdorff = hausdorff_distance(y, limit, HausdorffMethod::GridIndex, exec);
    row.sampling_pitch = std::max(limit_pitch, y.sampling_pitch());
    row.threshold = result.threshold;
    row.pass = row.hausdorff < row.threshold;
    result.rows.push_back(row);
  }
  result.nonincreasing = true;
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    if (result.rows[i].hausdorff > result.rows[i - 1].hausdorff + result.threshold / 10.0) {
      result.nonincreasing = false;
    }
  }
  result.final_pass = result.rows.back().pass;
  for (std::size_t i = result.rows.size(); i-- > 0;) {
    if (!result.rows[i].pass) break;
    result.passing_from = result.rows[i].t;
  }
  return result;
}

SweepResult convergence_sweep(const PatchSpec& spec, const Lifting& lifting,
                              std::span<const double> schedule, int m, double tolerance_scale,
                              Execution exec) {
  check_lifting(spec.config(), lifting);
  const auto surface = control_surface(spec, regular_decomposition(spec.config(), lifting));
  return distance_sweep(spec, lifting, surface, schedule, m, tolerance_scale, exec);
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "t,hausdorff,sampling_pitch,threshold,pass\n";
  char buf[256];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%s\n", r.t, r.hausdorff, r.sampling_pitch,
                  r.threshold, r.pass ? "true" : "false");
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Support decay

DecayReport support_decay_probe(const PatchSpec& spec, const Lifting& lifting, double t, int m) {
  const auto& config = spec.config();
  check_lifting(config, lifting);
  if (!(t >= 1.0)) throw Error(ErrorCode::NonpositiveT, "probe requires t >= 1");
  const auto dec = regular_decomposition(config, lifting);
  const std::size_t n = config.size();

  DecayReport report;
  report.excluded_points = dec.points_in_no_face();
  std::vector<bool> in_face(n, false);
  std::vector<std::vector<bool>> together(n, std::vector<bool>(n, false));
  for (const auto& f : dec.faces()) {
    for (int a : f.members) {
      in_face[a] = true;
      for (int b : f.members) together[a][b] = true;
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (in_face[a] && in_face[b] && !together[a][b]) {
        report.excluded_pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
      }
    }
  }
  if (report.empty()) return report;

  const auto charts = degeneration_charts(spec, lifting, t);
  const auto& logw = charts.front().log_weights;
  const auto grid = domain_grid(spec.basis(), m);
  const std::size_t k = grid.param_dim;
  std::vector<double> z(n);
  for (std::size_t i = 0; i < grid.params.size() / k; ++i) {
    blend_coefficients(spec.basis(), logw, std::span<const double>(grid.params.data() + i * k, k), z);
    for (auto [a, b] : report.excluded_pairs) report.pair_mass = std::max(report.pair_mass, std::min(z[a], z[b]));
    for (int c : report.excluded_points) report.point_mass = std::max(report.point_mass, z[c]);
  }
  return report;
}

}  // namespace toric
