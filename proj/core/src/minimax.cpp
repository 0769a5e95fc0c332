#include "mf/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mf/bumps.hpp"
#include "mf/diagnostics.hpp"
#include "mf/spectral.hpp"
#include "sum.hpp"

namespace mf {
namespace {

constexpr double kStepUnderflow = 1e-12;
constexpr double kEightPi = 8.0 * std::numbers::pi;

double energy(const MeanZeroField& u, const Params& p) {
  return eval_I(u, p).total;
}

std::vector<double> path_energies(const Path& path, const Params& p) {
  std::vector<double> energies;
  energies.reserve(path.nodes.size());
  for (const MeanZeroField& node : path.nodes) energies.push_back(energy(node, p));
  return energies;
}

double lerp_energy(const MeanZeroField& a, const MeanZeroField& b, double t,
                   const Params& p) {
  return energy(axpy((1.0 - t) * a, t, b), p);
}

int clamp_interior(int j, int K) { return std::clamp(j, 1, K - 1); }

/// Energy scan of the interior samples of one segment: the largest value and
/// where along the segment it sits.
struct SegScan {
  double max = -std::numeric_limits<double>::infinity();
  double t = 0.5;
};

SegScan scan_segment(const MeanZeroField& a, const MeanZeroField& b,
                     const Params& p, int samples) {
  SegScan s;
  for (int k = 1; k <= samples; ++k) {
    const double t = static_cast<double>(k) / (samples + 1);
    const double val = lerp_energy(a, b, t, p);
    if (val > s.max) {
      s.max = val;
      s.t = t;
    }
  }
  return s;
}

/// Density of the scans behind every committed reading. Between the sample
/// points of a coarse scan, a segment can carry the mountain ridge higher
/// than any sample shows, and each accepted move can bury a little more of
/// the ridge in that blind spot until the recorded maximum sits below the
/// saddle the path must cross -- at which point no honest operation can ever
/// be accepted again. Committed readings therefore use an 8x finer ladder,
/// chosen so the coarse sample points are a subset of the dense ones: a
/// coarse scan already above the cap then rejects a candidate cheaply,
/// without invalidating the dense protocol.
int dense_samples(int base) { return 8 * (base + 1) - 1; }

/// Node energies plus per-segment interior scans, maintained across sweeps so
/// each sweep re-evaluates only the segments it touched.
struct SweepCache {
  std::vector<double> node_e;
  std::vector<SegScan> seg;

  bool matches(const Path& path) const {
    return node_e.size() == path.nodes.size() &&
           seg.size() + 1 == node_e.size();
  }

  void rebuild(const Path& path, const Params& p, int base_samples) {
    node_e = path_energies(path, p);
    rescan_segments(path, p, base_samples);
  }

  void rescan_segments(const Path& path, const Params& p, int base_samples) {
    seg.clear();
    seg.reserve(path.K());
    for (int j = 0; j < path.K(); ++j) {
      seg.push_back(scan_segment(path.nodes[j], path.nodes[j + 1], p,
                                 dense_samples(base_samples)));
    }
  }
};

/// The path maximum read off the cache; same contract as sampled_path_max.
PathMaxEstimate cached_path_max(const SweepCache& cache, int K) {
  PathMaxEstimate best{cache.node_e[0], clamp_interior(0, K), true, -1, 0.0};
  for (int j = 1; j <= K; ++j) {
    if (cache.node_e[j] > best.value) {
      best =
          PathMaxEstimate{cache.node_e[j], clamp_interior(j, K), true, -1, 0.0};
    }
  }
  for (int j = 0; j < K; ++j) {
    if (cache.seg[j].max > best.value) {
      const int lo = clamp_interior(j, K);
      const int hi = clamp_interior(j + 1, K);
      const int attack = cache.node_e[hi] > cache.node_e[lo] ? hi : lo;
      best = PathMaxEstimate{cache.seg[j].max, attack, false, j, cache.seg[j].t};
    }
  }
  return best;
}

/// One deformation sweep over `path` with `cache` tracking node energies and
/// segment scans (updated in place, including insertions). See the public
/// deform_step declaration for the full contract.
Path sweep_once(const Path& path, const Params& p, const MinimaxOptions& opts,
                bool* stagnated, SweepCache& cache) {
  if (path.K() < 8) throw std::invalid_argument("deform_step: path too short");
  if (stagnated) *stagnated = false;
  if (!cache.matches(path)) cache.rebuild(path, p, opts.samples_per_segment);

  PathMaxEstimate max0 = cached_path_max(cache, path.K());
  double emin = cache.node_e[0];
  for (double v : cache.node_e) emin = std::min(emin, v);
  const double spread = max0.value - emin;
  // Nothing in the sweep may push any sampled point above the incoming
  // maximum.
  const double cap = max0.value + 1e-12 * (1.0 + std::abs(max0.value));
  const std::size_t ceiling = static_cast<std::size_t>(
      opts.max_nodes > 0 ? std::max(opts.max_nodes, opts.K + 1) : 8 * opts.K);

  Path out = path;
  bool restructured = false;

  // Inserts u (with energy eu) as node `pos`, provided the node budget allows
  // it and neither the point nor the two fresh chords read above the incoming
  // maximum. Returns whether the insertion happened.
  const int dense = dense_samples(opts.samples_per_segment);

  const auto try_insert = [&](int pos, const MeanZeroField& u, double eu) {
    if (out.nodes.size() >= ceiling) return false;
    if (eu > cap) return false;
    const SegScan left = scan_segment(out.nodes[pos - 1], u, p, dense);
    const SegScan right = scan_segment(u, out.nodes[pos], p, dense);
    if (std::max(left.max, right.max) > cap) return false;
    out.nodes.insert(out.nodes.begin() + pos, u);
    cache.node_e.insert(cache.node_e.begin() + pos, eu);
    cache.seg[pos - 1] = left;
    cache.seg.insert(cache.seg.begin() + pos, right);
    return true;
  };

  // Inserting a point of the current curve can fail its guard even though the
  // curve is unchanged: the two fresh chords are scanned finer than the one
  // they replace, and near a ridge crossing the finer reading pops above the
  // coarse incoming maximum. Rejecting the point outright would let the path
  // keep sliding through the ridge between samples, so instead backtrack the
  // point down its own negative gradient until everything it adds reads at or
  // below the incoming maximum, and insert that. The committed node is then a
  // genuine deformation of the curve that pins the crossing.
  const auto try_insert_descended = [&](int pos, const MeanZeroField& u) {
    if (try_insert(pos, u, energy(u, p))) return true;
    if (out.nodes.size() >= ceiling) return false;
    const MeanZeroField g = sobolev_gradient(u, p);
    const double gnorm = h1_norm(g);
    if (gnorm <= 1e-12) return false;
    double t = opts.step0 / std::max(1.0, gnorm);
    int rejections = 0;
    while (t >= kStepUnderflow) {
      const MeanZeroField trial = axpy(u, -t, g);
      const double etrial = energy(trial, p);
      if (etrial <= cap) {
        if (try_insert(pos, trial, etrial)) return true;
        if (++rejections >= 8) return false;
      }
      t *= 0.5;
    }
    return false;
  };

  // A crest hiding inside a segment cannot be descended directly, and moving
  // its flanks can first-order *raise* it when their gradients point away
  // from the crest's. Make the crest itself a node so the descent below
  // attacks it head on: insert the sampled point (backtracked if its finer
  // chords read high), or, when the node budget is spent, replace the
  // lower-energy interior flank with it.
  if (!max0.on_node) {
    const int lo = max0.seg, hi = max0.seg + 1;
    const MeanZeroField crest =
        axpy((1.0 - max0.t) * out.nodes[lo], max0.t, out.nodes[hi]);
    if (try_insert_descended(hi, crest)) {
      restructured = true;
    } else {
      const int K = out.K();
      int target = -1;
      if (lo >= 1 && hi <= K - 1) {
        target = cache.node_e[lo] <= cache.node_e[hi] ? lo : hi;
      } else if (lo >= 1) {
        target = lo;
      } else if (hi <= K - 1) {
        target = hi;
      }
      if (target >= 0) {
        const SegScan left =
            scan_segment(out.nodes[target - 1], crest, p, dense);
        const SegScan right =
            scan_segment(crest, out.nodes[target + 1], p, dense);
        if (std::max(left.max, right.max) <= cap) {
          out.nodes[target] = crest;
          cache.node_e[target] = max0.value;
          cache.seg[target - 1] = left;
          cache.seg[target] = right;
          restructured = true;
        }
      }
    }
    // Whatever happened above, re-read the maximum off the refreshed cache so
    // the attack below aims at the right node.
    max0 = cached_path_max(cache, out.K());
  }

  // Interior nodes within the band below the maximum move this sweep; the
  // node carrying (or flanking) the crest always moves, even when its energy
  // sits below the band.
  const int K = out.K();
  std::vector<int> movers;
  for (int j = 1; j < K; ++j) {
    if (cache.node_e[j] >= max0.value - opts.band * spread) movers.push_back(j);
  }
  if (std::find(movers.begin(), movers.end(), max0.attack_node) ==
      movers.end()) {
    movers.push_back(max0.attack_node);
    std::sort(movers.begin(), movers.end());
  }

  bool attack_moved = false;
  bool attack_chord_blocked = false;
  double attack_gnorm = std::numeric_limits<double>::infinity();
  for (int j : movers) {
    const MeanZeroField g = sobolev_gradient(out.nodes[j], p);
    const double gnorm = h1_norm(g);
    if (gnorm <= 1e-12) continue;  // node is already critical

    double t = opts.step0 / std::max(1.0, gnorm);
    bool moved = false;
    int chord_rejections = 0;
    while (t >= kStepUnderflow) {
      const MeanZeroField trial = axpy(out.nodes[j], -t, g);
      const double etrial = energy(trial, p);
      if (etrial <= cache.node_e[j]) {
        // The move also may not lift the interiors of the two segments it
        // touches above the incoming path maximum. A coarse scan settles
        // clear rejections before the dense protocol reading is paid for.
        const bool coarse_reject =
            std::max(scan_segment(out.nodes[j - 1], trial, p,
                                  opts.samples_per_segment)
                         .max,
                     scan_segment(trial, out.nodes[j + 1], p,
                                  opts.samples_per_segment)
                         .max) > cap;
        if (!coarse_reject) {
          const SegScan left = scan_segment(out.nodes[j - 1], trial, p, dense);
          const SegScan right = scan_segment(trial, out.nodes[j + 1], p, dense);
          if (std::max(left.max, right.max) <= cap) {
            out.nodes[j] = trial;
            cache.node_e[j] = etrial;
            cache.seg[j - 1] = left;
            cache.seg[j] = right;
            moved = true;
            break;
          }
        }
        // An energy-decreasing step blocked only by its chords does not
        // improve as t shrinks (the obstruction is first-order); a handful
        // of rejections settles that, and the split below is the real cure.
        if (++chord_rejections >= 8) break;
      }
      t *= 0.5;
    }
    if (j == max0.attack_node) {
      attack_moved = moved;
      attack_chord_blocked = chord_rejections > 0;
      attack_gnorm = gnorm;
    }
  }

  // A crest node pinned by its chords (every energy-decreasing step would
  // lift an adjacent segment above the incoming maximum) is wedged against
  // the mountain ridge its neighbors straddle. Two cures, tried in order:
  //
  //  1. If the node is already near-critical, the ridge has pinched it next
  //     to the saddle itself: replace the node with the refined critical
  //     point. The node's own energy may rise toward the saddle level, but
  //     the path maximum cannot (the saddle is the lowest point of the ridge
  //     the path must cross), so the jump is committed under the usual
  //     at-or-below-the-incoming-maximum guards.
  //  2. Otherwise the chords are simply too long for the local geometry:
  //     split the worse one at its midpoint and let the next sweep work at
  //     the finer scale.
  if (!attack_moved && attack_chord_blocked) {
    const int j = max0.attack_node;
    if (attack_gnorm <= 0.05) {
      const RefineResult snap = refine_critical(out.nodes[j], p, 1e-10);
      const double esnap = energy(snap.u, p);
      if (snap.reached_tol && esnap <= cap) {
        const SegScan left = scan_segment(out.nodes[j - 1], snap.u, p, dense);
        const SegScan right = scan_segment(snap.u, out.nodes[j + 1], p, dense);
        if (std::max(left.max, right.max) <= cap) {
          out.nodes[j] = snap.u;
          cache.node_e[j] = esnap;
          cache.seg[j - 1] = left;
          cache.seg[j] = right;
          attack_moved = true;
        }
      }
    }
    if (!attack_moved) {
      const int lo = cache.seg[j - 1].max >= cache.seg[j].max ? j - 1 : j;
      const MeanZeroField mid =
          axpy(0.5 * out.nodes[lo], 0.5, out.nodes[lo + 1]);
      if (try_insert_descended(lo + 1, mid)) restructured = true;
    }
  }

  if (!attack_moved && !restructured && stagnated) *stagnated = true;
  return out;
}

/// Node redistribution by Sobolev arc length over the piecewise-linear path.
Path reparametrized(const Path& path) {
  const int K = path.K();
  std::vector<double> arc(K + 1, 0.0);
  for (int j = 0; j < K; ++j) {
    arc[j + 1] = arc[j] + h1_norm(path.nodes[j + 1] - path.nodes[j]);
  }
  if (arc[K] <= 0.0) return path;

  Path out;
  out.nodes.reserve(K + 1);
  out.nodes.push_back(path.nodes.front());
  int seg = 0;
  for (int m = 1; m < K; ++m) {
    const double s = arc[K] * m / K;
    while (seg + 1 < K && arc[seg + 1] < s) ++seg;
    const double len = arc[seg + 1] - arc[seg];
    const double theta = len > 0.0 ? (s - arc[seg]) / len : 0.0;
    out.nodes.push_back(
        axpy((1.0 - theta) * path.nodes[seg], theta, path.nodes[seg + 1]));
  }
  out.nodes.push_back(path.nodes.back());
  return out;
}

// --- Krylov machinery for the Newton phase -------------------------------

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  detail::KahanSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
  return s.value();
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

/// Plain full-memory GMRES with modified Gram-Schmidt; solves apply(x) = b to
/// relative tolerance rtol or max_dim iterations, starting from x = 0.
std::vector<double> gmres(
    const std::function<std::vector<double>(const std::vector<double>&)>& apply,
    const std::vector<double>& b, int max_dim, double rtol) {
  const double beta = norm2(b);
  std::vector<double> x(b.size(), 0.0);
  if (beta == 0.0) return x;

  std::vector<std::vector<double>> basis;
  basis.reserve(max_dim + 1);
  {
    std::vector<double> v0 = b;
    for (double& v : v0) v /= beta;
    basis.push_back(std::move(v0));
  }

  // Hessenberg columns, Givens rotations, and the rotated rhs.
  std::vector<std::vector<double>> hcols;
  std::vector<double> cs, sn;
  std::vector<double> g{beta};

  int dim = 0;
  for (int j = 0; j < max_dim; ++j) {
    std::vector<double> w = apply(basis[j]);
    std::vector<double> h(j + 2, 0.0);
    for (int i = 0; i <= j; ++i) {
      h[i] = dot(w, basis[i]);
      const std::vector<double>& vi = basis[i];
      for (std::size_t t = 0; t < w.size(); ++t) w[t] -= h[i] * vi[t];
    }
    const double hlast = norm2(w);
    h[j + 1] = hlast;

    for (int i = 0; i < j; ++i) {
      const double tmp = cs[i] * h[i] + sn[i] * h[i + 1];
      h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
      h[i] = tmp;
    }
    const double denom = std::hypot(h[j], h[j + 1]);
    const double c = denom > 0.0 ? h[j] / denom : 1.0;
    const double s = denom > 0.0 ? h[j + 1] / denom : 0.0;
    cs.push_back(c);
    sn.push_back(s);
    h[j] = c * h[j] + s * h[j + 1];
    h[j + 1] = 0.0;
    g.push_back(-s * g[j]);
    g[j] = c * g[j];
    hcols.push_back(std::move(h));
    dim = j + 1;

    if (std::abs(g[j + 1]) <= rtol * beta) break;
    if (hlast == 0.0) break;  // invariant subspace reached

    if (dim < max_dim) {
      for (double& v : w) v /= hlast;
      basis.push_back(std::move(w));
    }
  }

  // Back substitution on the triangularized system.
  std::vector<double> y(dim, 0.0);
  for (int i = dim - 1; i >= 0; --i) {
    double acc = g[i];
    for (int k = i + 1; k < dim; ++k) acc -= hcols[k][i] * y[k];
    y[i] = acc / hcols[i][i];
  }
  for (int i = 0; i < dim; ++i) {
    const std::vector<double>& vi = basis[i];
    for (std::size_t t = 0; t < x.size(); ++t) x[t] += y[i] * vi[t];
  }
  return x;
}

bool region_admits(const Params& p, const TorusGrid& grid) {
  return in_lambda(p, grid).in_region;
}

}  // namespace

void MinimaxOptions::validate() const {
  if (K < 8) throw std::invalid_argument("MinimaxOptions: K must be >= 8");
  if (max_iters < 1) throw std::invalid_argument("MinimaxOptions: max_iters must be >= 1");
  if (!(step0 > 0.0)) throw std::invalid_argument("MinimaxOptions: step0 must be > 0");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("MinimaxOptions: grad_tol must be > 0");
  if (!(band > 0.0 && band <= 0.5)) {
    throw std::invalid_argument("MinimaxOptions: band must lie in (0, 0.5]");
  }
  if (seeds.empty()) throw std::invalid_argument("MinimaxOptions: seeds must be nonempty");
  if (reparam_every < 1) {
    throw std::invalid_argument("MinimaxOptions: reparam_every must be >= 1");
  }
  if (samples_per_segment < 1 || samples_per_segment > 32) {
    throw std::invalid_argument(
        "MinimaxOptions: samples_per_segment must lie in [1, 32]");
  }
  if (max_nodes < 0) {
    throw std::invalid_argument("MinimaxOptions: max_nodes must be >= 0");
  }
}

PathMaxEstimate sampled_path_max(const Path& path,
                                 const std::vector<double>& node_energies,
                                 const Params& p, int samples_per_segment) {
  const int K = path.K();
  PathMaxEstimate best{node_energies[0], clamp_interior(0, K), true, -1, 0.0};
  for (int j = 1; j <= K; ++j) {
    if (node_energies[j] > best.value) {
      best = PathMaxEstimate{node_energies[j], clamp_interior(j, K), true, -1, 0.0};
    }
  }
  for (int j = 0; j < K; ++j) {
    for (int k = 1; k <= samples_per_segment; ++k) {
      const double t = static_cast<double>(k) / (samples_per_segment + 1);
      const double val = lerp_energy(path.nodes[j], path.nodes[j + 1], t, p);
      if (val > best.value) {
        // Attack the higher-energy interior flank of the crest segment.
        const int lo = clamp_interior(j, K);
        const int hi = clamp_interior(j + 1, K);
        const int attack = node_energies[hi] > node_energies[lo] ? hi : lo;
        best = PathMaxEstimate{val, attack, false, j, t};
      }
    }
  }
  return best;
}

MeanZeroField find_negative_endpoint(const Params& p, const TorusGrid& grid,
                                     const Point& center, double r0) {
  if (std::max(p.lambda1, p.lambda2) <= kEightPi) {
    throw std::invalid_argument(
        "find_negative_endpoint: needs max{lambda1, lambda2} > 8*pi");
  }
  const double sign = p.lambda1 >= p.lambda2 ? 1.0 : -1.0;

  // The scan deepens eps at the configured cap radius first. If no resolvable
  // eps reaches negative energy there, it widens the cap and rescans: the
  // leading slope in ln(1/eps) is the same for every radius, but a wider cap
  // has a much friendlier constant term, so its zero crossing happens at an
  // eps a coarse grid can still resolve. The widest cap must keep the support
  // inside the unit cell, hence the 0.45 bound.
  std::vector<double> radii{r0};
  for (double r : {0.3, 0.35, 0.4, 0.45}) {
    if (r > r0 + 1e-12) radii.push_back(r);
  }

  const double eps_floor = 4.0 * grid.h();
  std::ostringstream tried;
  for (double r : radii) {
    std::vector<double> ladder;
    for (double eps = r / 2.0; eps >= eps_floor; eps /= 2.0) ladder.push_back(eps);
    // The dyadic descent can jump over the resolution floor; always finish
    // with the floor itself, where the family is deepest yet still resolved.
    if (ladder.empty() || ladder.back() > eps_floor * (1.0 + 1e-12)) {
      if (r / 2.0 >= eps_floor) ladder.push_back(eps_floor);
    }
    for (double eps : ladder) {
      const MeanZeroField u = build_u_eps(BumpSpec{center, eps, r}, grid);
      // The deformation engine differentiates the spectral functional, so the
      // endpoint enters it measured by the same calculus: a single discrete
      // functional for both the energy values and their gradients. (Bump
      // profiles carry the kinked tag for the finite-difference Dirichlet
      // reading the expansion reports need; mixing the two calculi here would
      // hand the descent a gradient that disagrees with the energy it
      // descends.)
      const MeanZeroField candidate(
          Field(grid, (sign * u).values(), Smoothness::smooth));
      const double total = energy(candidate, p);
      if (total < 0.0 && h1_norm(candidate) >= 1.0) return candidate;
      tried << " (r0=" << r << ", eps=" << eps << ", I=" << total << ")";
    }
  }
  throw std::runtime_error(
      "find_negative_endpoint: no bubble in the resolvable range reached "
      "negative energy (couplings too close to 8*pi for this grid);" +
      tried.str());
}

Path init_path(const MeanZeroField& endpoint, int K) {
  if (K < 8) throw std::invalid_argument("init_path: K must be >= 8");
  Path path;
  path.nodes.reserve(K + 1);
  path.nodes.push_back(MeanZeroField(Field(endpoint.grid(), 0.0)));
  for (int j = 1; j < K; ++j) {
    path.nodes.push_back((static_cast<double>(j) / K) * endpoint);
  }
  path.nodes.push_back(endpoint);
  return path;
}

Path deform_step(const Path& path, const Params& p, const MinimaxOptions& opts,
                 bool* stagnated, std::vector<double>* energies) {
  opts.validate();
  SweepCache cache;
  if (energies && energies->size() == path.nodes.size()) {
    cache.node_e = *energies;
    cache.rescan_segments(path, p, opts.samples_per_segment);
  }
  Path out = sweep_once(path, p, opts, stagnated, cache);
  if (energies) *energies = cache.node_e;
  return out;
}

namespace {

struct AttemptOutcome {
  SeedAttempt record;
  std::vector<HistoryEntry> history;
  Path path;
  int argmax_index = 0;
  double final_grad_norm = 0.0;
  bool converged = false;
};

AttemptOutcome run_attempt(const MeanZeroField& endpoint, const Params& p,
                           const MinimaxOptions& opts, double scale) {
  AttemptOutcome out{SeedAttempt{scale}, {}, init_path(endpoint, opts.K)};
  out.record.endpoint_admissible = true;
  SweepCache cache;
  cache.rebuild(out.path, p, opts.samples_per_segment);
  int reparam_rejects = 0;

  for (int sweep = 1; sweep <= opts.max_iters; ++sweep) {
    bool stagnated = false;
    out.path = sweep_once(out.path, p, opts, &stagnated, cache);

    // Periodic redistribution keeps early paths healthy; once insertion has
    // clustered nodes around the crest, uniform spacing can only raise the
    // maximum and every attempt gets rejected, so stop trying after a few.
    if (reparam_rejects < 3 && sweep % opts.reparam_every == 0) {
      Path candidate = reparametrized(out.path);
      SweepCache cand_cache;
      cand_cache.rebuild(candidate, p, opts.samples_per_segment);
      const double old_max = cached_path_max(cache, out.path.K()).value;
      const double new_max = cached_path_max(cand_cache, candidate.K()).value;
      // Redistribution must never lift the path maximum (monotone history).
      if (new_max <= old_max + 1e-12 * (1.0 + std::abs(old_max))) {
        out.path = std::move(candidate);
        cache = std::move(cand_cache);
        reparam_rejects = 0;
      } else {
        ++reparam_rejects;
      }
    }

    const PathMaxEstimate pmax = cached_path_max(cache, out.path.K());
    const double grad_norm =
        h1_norm(sobolev_gradient(out.path.nodes[pmax.attack_node], p));
    out.history.push_back(HistoryEntry{pmax.value, grad_norm});
    out.record.sweeps = sweep;
    out.argmax_index = pmax.attack_node;
    out.final_grad_norm = grad_norm;
    out.record.final_max_energy = pmax.value;

    if (grad_norm < opts.grad_tol) {
      // A converged saddle must be a positive level carried by a node well
      // outside the small ball around zero where the energy is known to be a
      // local minimum; a "maximum" inside that ball is a discretization
      // artifact, so the attempt counts as stagnated and the next seed runs.
      const bool genuine = pmax.value > 0.0 &&
                           h1_norm(out.path.nodes[pmax.attack_node]) >= 0.1;
      if (genuine) {
        out.converged = true;
        out.record.converged = true;
        return out;
      }
      out.record.stagnated = true;
      return out;
    }
    if (stagnated) {
      out.record.stagnated = true;
      return out;
    }
  }
  return out;  // budget exhausted: neither converged nor stagnated
}

}  // namespace

MinimaxResult run_minimax(const Params& p, const TorusGrid& grid,
                          const MinimaxOptions& opts) {
  opts.validate();
  if (!region_admits(p, grid)) {
    throw std::invalid_argument(
        "run_minimax: (lambda1, lambda2) outside the admissible region");
  }

  const MeanZeroField base = find_negative_endpoint(p, grid, opts.center, opts.r0);

  std::vector<SeedAttempt> attempts;
  std::optional<AttemptOutcome> best;

  for (double scale : opts.seeds) {
    const MeanZeroField endpoint = scale * base;
    const double e_end = energy(endpoint, p);
    if (!(e_end < 0.0 && h1_norm(endpoint) >= 1.0)) {
      SeedAttempt rejected{scale};
      rejected.endpoint_admissible = false;
      rejected.final_max_energy = e_end;
      attempts.push_back(rejected);
      continue;
    }

    AttemptOutcome outcome = run_attempt(endpoint, p, opts, scale);
    attempts.push_back(outcome.record);

    if (outcome.converged) {
      MinimaxResult result{outcome.history.back().max_energy,
                           outcome.path.nodes[outcome.argmax_index]};
      result.path = std::move(outcome.path);
      result.history = std::move(outcome.history);
      result.converged = true;
      result.attempts = std::move(attempts);
      return result;
    }
    if (!best || outcome.final_grad_norm < best->final_grad_norm) {
      best = std::move(outcome);
    }
  }

  if (!best) {
    // Every seed produced an inadmissible endpoint; report the base attempt.
    MinimaxResult result{0.0, base};
    result.converged = false;
    result.attempts = std::move(attempts);
    return result;
  }

  MinimaxResult result{best->history.back().max_energy,
                       best->path.nodes[best->argmax_index]};
  result.path = std::move(best->path);
  result.history = std::move(best->history);
  result.converged = false;
  result.attempts = std::move(attempts);
  return result;
}

RefineResult refine_critical(const MeanZeroField& u0, const Params& p,
                             double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("refine_critical: tol must be > 0");
  constexpr int kDescentBudget = 5000;
  constexpr int kNewtonBudget = 60;
  constexpr double kNewtonGate = 1e-3;

  MeanZeroField u = u0;
  double rl2 = residual_l2_norm(u, p);
  MeanZeroField best_u = u;
  double best_rl2 = rl2;
  int descent_steps = 0;
  int newton_steps = 0;

  auto remember = [&](const MeanZeroField& v, double r) {
    if (r < best_rl2) {
      best_u = v;
      best_rl2 = r;
    }
  };

  // Phase 1: Sobolev-gradient descent on the energy, tracked by residual.
  double e_u = energy(u, p);
  while (rl2 > kNewtonGate && descent_steps < kDescentBudget) {
    const MeanZeroField g = sobolev_gradient(u, p);
    const double gnorm_sq = h1_norm_sq(g);
    if (gnorm_sq <= 1e-24) break;
    const double gnorm = std::sqrt(gnorm_sq);

    double t = 1.0 / std::max(1.0, gnorm);
    bool moved = false;
    while (t >= kStepUnderflow) {
      const MeanZeroField trial = axpy(u, -t, g);
      const double e_trial = energy(trial, p);
      if (e_trial <= e_u - 1e-4 * t * gnorm_sq) {
        u = trial;
        e_u = e_trial;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    ++descent_steps;
    if (!moved) break;

    rl2 = residual_l2_norm(u, p);
    remember(u, rl2);
    // Descent on the energy walks off a saddle once it passes it; if the
    // residual has clearly turned around, hand the best iterate to Newton.
    if (rl2 > 10.0 * best_rl2) break;
  }

  // Phase 2: matrix-free Newton-Krylov from the best iterate so far,
  // symmetrically preconditioned by (-Lap)^{-1/2}.
  u = best_u;
  rl2 = best_rl2;
  const TorusGrid grid = u.grid();
  int fallbacks_in_a_row = 0;

  while (rl2 > tol && newton_steps < kNewtonBudget) {
    const MeanZeroField r = residual(u, p);
    const HessianOperator hess(u, p);

    auto apply_preconditioned = [&](const std::vector<double>& v) {
      const Field inner = inv_sqrt_minus_laplacian(Field(grid, v));
      const MeanZeroField jv = hess.apply(MeanZeroField::project(inner));
      Field outer = inv_sqrt_minus_laplacian(jv);
      return std::move(outer.values());
    };

    std::vector<double> rhs;
    {
      Field half = inv_sqrt_minus_laplacian(-1.0 * r.field());
      rhs = std::move(half.values());
    }

    const double forcing = std::min(0.1, std::sqrt(rl2));
    const std::vector<double> y = gmres(apply_preconditioned, rhs, 100, forcing);
    const MeanZeroField z =
        MeanZeroField::project(inv_sqrt_minus_laplacian(Field(grid, y)));

    double s = 1.0;
    bool accepted = false;
    while (s >= 1.0 / (1 << 30)) {
      const MeanZeroField trial = axpy(u, s, z);
      const double r_trial = residual_l2_norm(trial, p);
      if (r_trial < rl2 * (1.0 - 1e-4 * s)) {
        u = trial;
        rl2 = r_trial;
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    ++newton_steps;

    if (accepted) {
      fallbacks_in_a_row = 0;
      remember(u, rl2);
      continue;
    }

    // Newton direction failed to reduce the residual: one energy-descent
    // step, then retry the linearization from the new point.
    const MeanZeroField g = sobolev_gradient(u, p);
    const double gnorm = h1_norm(g);
    if (gnorm <= 1e-12) break;
    double t = 1.0 / std::max(1.0, gnorm);
    const double e_here = energy(u, p);
    bool moved = false;
    while (t >= kStepUnderflow) {
      const MeanZeroField trial = axpy(u, -t, g);
      if (energy(trial, p) <= e_here - 1e-4 * t * gnorm * gnorm) {
        u = trial;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    ++descent_steps;
    if (!moved) break;
    rl2 = residual_l2_norm(u, p);
    remember(u, rl2);
    if (++fallbacks_in_a_row >= 3) break;
  }

  remember(u, rl2);
  RefineResult result{best_u, best_rl2, best_rl2 <= tol, descent_steps,
                      newton_steps};
  return result;
}

}  // namespace mf
