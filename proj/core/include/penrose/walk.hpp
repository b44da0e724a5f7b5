#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "penrose/corrector.hpp"
#include "penrose/graph.hpp"

namespace penrose {

/// One quenched walk: X_0 = origin, each step uniform over the four
/// neighbors. Invalid (thrown away) if it ever enters the boundary margin.
struct WalkPath {
    std::vector<VertexId> vertices;  // X_0 .. X_n
    uint64_t rng_seed = 0;
    uint64_t env_seed = 0;
    int steps() const { return static_cast<int>(vertices.size()) - 1; }
};

/// Diffusively rescaled trajectory sampled on a uniform grid of [0, T]:
/// (1/sqrt n) (X_[tn] + (tn - [tn])(X_[tn]+1 - X_[tn])).
struct ScaledPath {
    int n = 0;
    double T = 1.0;
    std::vector<Vec2> samples;
};

/// Corrected walk M_k = X_k + chi(X_k); a martingale for the harmonic-route
/// corrector.
struct CorrectedPath {
    std::vector<Vec2> points;
};

/// Walk-count, step-count and abort bookkeeping of one simulated batch.
struct BatchSummary {
    uint64_t master_seed = 0;
    int n = 0;
    int requested = 0;
    int completed = 0;
    int aborted = 0;
};

inline constexpr double kWalkSafetyFactor = 6.0;

/// Simulates one walk of n steps with an independent stream seeded by
/// `seed`. Throws OutOfRangeError if the safe interior cannot hold
/// safety_factor * sqrt(n) graph hops beyond the margin, BoundaryHitError
/// if the walk enters the margin.
WalkPath simulate(const PenroseGraph& g, int n, uint64_t seed, int margin = 10,
                  double safety_factor = kWalkSafetyFactor);

/// Batch of walks with per-walk streams derived from (master_seed, index);
/// parallel across walks, results independent of scheduling. Aborted walks
/// are dropped and counted.
std::vector<WalkPath> simulate_batch(const PenroseGraph& g, int n, int count, uint64_t master_seed,
                                     BatchSummary* summary = nullptr, int margin = 10,
                                     double safety_factor = kWalkSafetyFactor);

ScaledPath scale_path(const WalkPath& w, const PenroseGraph& g, double T, int grid);

CorrectedPath correct_path(const WalkPath& w, const CorrectorField& c, const PenroseGraph& g);

/// Endpoint of the scaled corrected walk, M_n / sqrt(n).
Vec2 scaled_endpoint(const WalkPath& w, const CorrectorField& c, const PenroseGraph& g);

}  // namespace penrose
