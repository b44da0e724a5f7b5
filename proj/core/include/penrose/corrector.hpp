#pragma once

#include <vector>

#include "penrose/graph.hpp"

namespace penrose {

/// Local drift V(x) = (1/4) * sum of step vectors at x. Meaningful on
/// interior vertices; degree-deficient vertices carry the truncated sum
/// (present steps over 4) for use as the resolvent right-hand side.
struct DriftField {
    std::vector<Vec2> v;
};

/// Finite-volume corrector. chi(origin) == (0,0) exactly; epsilon == 0 marks
/// the harmonic-coordinate route. residual is the max martingale residual
/// |(1/4) sum_y (c+chi)(y) - (c+chi)(x)| over interior vertices (with the
/// (1+eps) diagonal for the resolvent route).
struct CorrectorField {
    std::vector<Vec2> chi;
    double epsilon = 0.0;
    double residual = 0.0;
    int boundary_margin = 10;
    double psi_mean_sq = 0.0;  // patch-mean |psi|^2, resolvent route only
    double psi_max = 0.0;      // max |psi|, resolvent route only
};

/// Corrector growth diagnostics: max_{|x|<=n} |chi(x)| / n over BFS balls,
/// and |chi(z_k)| / k along the origin tile's two ribbons.
struct SublinearityProfile {
    std::vector<int> ns;
    std::vector<double> max_ratio;
    std::vector<int> ks;
    std::vector<double> ribbon_ratio_a;
    std::vector<double> ribbon_ratio_b;
};

struct SolverOptions {
    double rel_tol = 1e-10;   // on the l2 residual vs the right-hand side
    double abs_tol_inf = 1e-9;  // per-vertex residual target
    int max_iterations = 0;   // 0: cap at 50*sqrt(N) + 1000
};

DriftField drift_field(const PenroseGraph& g);

/// Solves (1+eps) psi(x) - (1/4) sum_{y~x} psi(y) = V(x) over all patch
/// vertices, zero outside; returns chi = psi - psi(origin).
CorrectorField solve_resolvent(const PenroseGraph& g, double epsilon, const SolverOptions& opts = {});

/// Dirichlet harmonic coordinates: phi = id on non-interior vertices and
/// phi(x) = (1/4) sum_{y~x} phi(y) on the interior; chi = phi - id,
/// normalized to vanish at the origin. Canonical route for statistics.
CorrectorField solve_harmonic(const PenroseGraph& g, const SolverOptions& opts = {});

/// eps * patch-mean |psi_eps|^2 for each epsilon, the finite-volume analog
/// of the L2 vanishing of the regularized corrector.
std::vector<double> resolvent_norm_scan(const PenroseGraph& g, std::span<const double> epsilons,
                                        const SolverOptions& opts = {});

/// Recomputes max_{x interior} |(1/4) sum_{y~x} (c+chi)(y) - (c+chi)(x)|
/// from the field itself (independent of the solver's bookkeeping).
double martingale_residual(const PenroseGraph& g, const CorrectorField& c);

/// Max over pairs (x,y) of |(chi(x)-chi(y)) - chi'(x-y)| where chi' is
/// re-solved on the largest disk sub-patch centred at y. Reports the
/// finite-volume shift-covariance defect; it is not asserted to vanish.
double cocycle_check(const CorrectorField& c, const PenroseGraph& g, const Patch& patch,
                     std::span<const std::pair<VertexId, VertexId>> pairs);

/// Profile over the given BFS radii (all must stay inside the safe
/// interior) and along both origin ribbons up to k_max steps.
SublinearityProfile sublinearity_profile(const CorrectorField& c, const PenroseGraph& g,
                                         const Patch& patch, std::span<const int> ns, int k_max);

}  // namespace penrose
