#pragma once

#include <optional>
#include <vector>

#include "mf/field.hpp"
#include "mf/functional.hpp"
#include "mf/grid.hpp"

namespace mf {

/// Discrete path in the mean-zero Sobolev space: K+1 nodes, node 0 the zero
/// field, node K the negative-energy endpoint. Deformation never touches the
/// endpoints.
struct Path {
  std::vector<MeanZeroField> nodes;

  int K() const noexcept { return static_cast<int>(nodes.size()) - 1; }
};

struct MinimaxOptions {
  int K = 24;                 // path nodes = K + 1, K >= 8
  int max_iters = 4000;       // deformation sweeps per seed
  double step0 = 1.0;         // initial Sobolev-descent step
  double grad_tol = 1e-3;     // dual-norm stopping threshold at the max node
  double band = 0.15;         // fraction of the energy spread near the max
                              // within which nodes move each sweep
  std::vector<double> seeds{1.0, 1.5, 2.0};  // endpoint scalings for restarts

  // Endpoint construction (bubble scan geometry).
  Point center{0.5, 0.5};
  double r0 = 0.25;

  // Nodes are redistributed by Sobolev arc length after this many sweeps
  // (skipped whenever redistribution would raise the path maximum).
  int reparam_every = 10;

  // Interior samples per segment used when measuring the path maximum. The
  // maximum over nodes alone is blind to a segment that straddles the
  // mountain ridge (both ends low, crest in between), which lets the path
  // collapse toward the zero field; sampling segment interiors keeps the
  // estimate honest. Odd counts place a sample on the segment midpoint.
  // Must lie in [1, 32].
  int samples_per_segment = 7;

  // Ceiling on the node count after adaptive insertion (deform_step inserts
  // the sampled crest as a node, and splits a chord that pins the crest node,
  // whenever the local geometry is too coarse for any descent step). 0 means
  // 8*K. The initial K+1 nodes always fit.
  int max_nodes = 0;

  void validate() const;  // throws std::invalid_argument
};

struct HistoryEntry {
  double max_energy = 0.0;  // max over path nodes of eval_I(...).total
  double grad_norm = 0.0;   // dual norm of I' at the max node
};

/// What happened to one endpoint scaling before the engine settled on (or
/// gave up on) it.
struct SeedAttempt {
  double scale = 0.0;
  int sweeps = 0;
  bool endpoint_admissible = false;  // I < 0 and H1 norm >= 1 after scaling
  bool stagnated = false;
  bool converged = false;
  double final_max_energy = 0.0;
};

struct RefineResult {
  MeanZeroField u;
  double residual_l2 = 0.0;
  bool reached_tol = false;
  int descent_steps = 0;
  int newton_steps = 0;
};

struct MinimaxResult {
  double c_est = 0.0;
  MeanZeroField argmax;
  Path path;                          // final deformed path
  std::vector<HistoryEntry> history;  // per-sweep, for the returned attempt
  bool converged = false;
  std::vector<SeedAttempt> attempts;
  std::optional<RefineResult> refined;
};

/// Scans bubbles of decreasing eps (sign chosen by which coupling exceeds
/// 8*pi) and returns the first with total energy < 0 and H1 norm >= 1.
/// Requires max{lambda1, lambda2} > 8*pi; throws std::runtime_error with a
/// diagnostic when no scanned eps reaches negative energy.
MeanZeroField find_negative_endpoint(const Params& p, const TorusGrid& grid,
                                     const Point& center = {0.5, 0.5},
                                     double r0 = 0.25);

/// Linear interpolation: node j = (j/K) * endpoint, endpoints exact.
Path init_path(const MeanZeroField& endpoint, int K);

/// One deformation sweep: every node whose energy lies within band*spread of
/// the sampled path maximum (endpoints excluded), plus the node carrying that
/// maximum, takes one backtracked step along its negative Sobolev gradient.
/// The step at each node halves until neither the node's energy nor the
/// sampled maximum of its two adjacent segments exceeds the incoming path
/// maximum, so the sampled maximum never increases across a sweep.
///
/// The sweep also adapts the discretization where the geometry demands it: a
/// maximum hiding inside a segment is inserted as a node, and when every
/// energy-decreasing step at the maximum node would lift an adjacent segment
/// above the incoming maximum, the worse of its two chords is split at the
/// midpoint so the next sweep works at a finer scale. An inserted point whose
/// fresh, finer-scanned chords read above the incoming maximum (a ridge
/// crossing the coarser scan missed) is first backtracked down its own
/// negative gradient until everything it adds fits under the maximum.
/// Insertions respect max_nodes and the same never-above-the-maximum guard.
/// Sets *stagnated when the maximum node cannot move (the step underflows
/// below 1e-12 or every candidate is blocked by its chords) and no insertion
/// was possible either.
///
/// `energies`, when non-null, must hold eval_I totals per node on entry and
/// is updated in place (including insertions) as the sweep cache.
Path deform_step(const Path& path, const Params& p, const MinimaxOptions& opts,
                 bool* stagnated = nullptr,
                 std::vector<double>* energies = nullptr);

/// Maximum of the energy over the path sampled at every node and at
/// `samples_per_segment` evenly spaced interior points of every segment.
/// Also reports the interior node best placed to attack that maximum (the
/// higher-energy flank when the maximum sits inside a segment), and where the
/// maximum lives: node `attack_node` itself, or segment `seg` at parameter
/// `t` in (0, 1).
struct PathMaxEstimate {
  double value = 0.0;
  int attack_node = 0;  // interior node adjacent to (or carrying) the max
  bool on_node = false;
  int seg = -1;         // segment index when the max is interior, else -1
  double t = 0.0;       // parameter along that segment
};

PathMaxEstimate sampled_path_max(const Path& path,
                                 const std::vector<double>& node_energies,
                                 const Params& p, int samples_per_segment);

/// Full engine: endpoint scan, linear path, deformation sweeps until the dual
/// gradient norm at the max node drops below grad_tol, restarting with the
/// next endpoint scaling on stagnation. History covers the returned attempt
/// (the converged one, or the best stagnated one), so its max-energy column
/// is non-increasing. Never refines; callers attach `refined` if they want a
/// critical point. Requires (lambda1, lambda2) in the admissible region.
MinimaxResult run_minimax(const Params& p, const TorusGrid& grid,
                          const MinimaxOptions& opts);

/// Drives u0 to a critical point: Sobolev-gradient descent with backtracking,
/// switching to a matrix-free Newton-Krylov phase once the L^2 residual norm
/// drops below 1e-3. Stops when the residual reaches tol or budgets run out
/// (reached_tol says which; never throws on exhaustion).
RefineResult refine_critical(const MeanZeroField& u0, const Params& p,
                             double tol);

}  // namespace mf
