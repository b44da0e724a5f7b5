#include "penrose/walk.hpp"

#include <atomic>
#include <cmath>

#include "penrose/parallel.hpp"
#include "penrose/rng.hpp"

namespace penrose {

namespace {

void require_patch_capacity(const PenroseGraph& g, int n, int margin, double safety_factor) {
    const int needed = static_cast<int>(std::ceil(safety_factor * std::sqrt(static_cast<double>(n))));
    const int safe = safe_graph_radius(g, margin);
    if (safe < needed) {
        throw OutOfRangeError("patch too small for " + std::to_string(n) + " steps: safe graph radius " +
                              std::to_string(safe) + " < " + std::to_string(needed));
    }
}

WalkPath simulate_unchecked(const PenroseGraph& g, int n, uint64_t seed, int margin) {
    WalkPath path;
    path.rng_seed = seed;
    path.env_seed = g.env_seed;
    path.vertices.reserve(static_cast<size_t>(n) + 1);
    Rng rng(seed);
    VertexId v = g.origin_id;
    path.vertices.push_back(v);
    for (int k = 0; k < n; ++k) {
        const auto nbrs = g.neighbors(v);
        v = nbrs[rng.next_quarter()];
        if (g.dist_boundary[static_cast<size_t>(v)] < margin) {
            throw BoundaryHitError("walk entered the boundary margin at step " + std::to_string(k + 1));
        }
        path.vertices.push_back(v);
    }
    return path;
}

}  // namespace

WalkPath simulate(const PenroseGraph& g, int n, uint64_t seed, int margin, double safety_factor) {
    require_patch_capacity(g, n, margin, safety_factor);
    return simulate_unchecked(g, n, seed, margin);
}

std::vector<WalkPath> simulate_batch(const PenroseGraph& g, int n, int count, uint64_t master_seed,
                                     BatchSummary* summary, int margin, double safety_factor) {
    require_patch_capacity(g, n, margin, safety_factor);
    std::vector<WalkPath> batch(static_cast<size_t>(count));
    std::vector<uint8_t> ok(static_cast<size_t>(count), 0);
    std::atomic<int> aborted{0};
    parallel_for_chunks(static_cast<size_t>(count), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const uint64_t seed = Rng::mix(master_seed + 0x9E3779B97F4A7C15ULL * (i + 1));
            try {
                batch[i] = simulate_unchecked(g, n, seed, margin);
                ok[i] = 1;
            } catch (const BoundaryHitError&) {
                aborted.fetch_add(1);
            }
        }
    });
    std::vector<WalkPath> out;
    out.reserve(static_cast<size_t>(count));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        if (ok[i]) out.push_back(std::move(batch[i]));
    }
    if (summary) {
        summary->master_seed = master_seed;
        summary->n = n;
        summary->requested = count;
        summary->completed = static_cast<int>(out.size());
        summary->aborted = aborted.load();
    }
    return out;
}

ScaledPath scale_path(const WalkPath& w, const PenroseGraph& g, double T, int grid) {
    const int n = w.steps();
    if (std::floor(T * n) > static_cast<double>(n)) {
        throw PathTooShortError("walk of " + std::to_string(n) + " steps cannot be scaled to T = " +
                                std::to_string(T));
    }
    ScaledPath sp;
    sp.n = n;
    sp.T = T;
    sp.samples.reserve(static_cast<size_t>(grid) + 1);
    const double inv_sqrt_n = n > 0 ? 1.0 / std::sqrt(static_cast<double>(n)) : 1.0;
    for (int s = 0; s <= grid; ++s) {
        const double tn = (static_cast<double>(s) * T / grid) * n;
        auto k = static_cast<std::size_t>(std::floor(tn));
        double frac = tn - std::floor(tn);
        if (k >= static_cast<std::size_t>(n)) {
            k = static_cast<std::size_t>(n);
            frac = 0.0;
        }
        Vec2 pos = g.centers[static_cast<size_t>(w.vertices[k])];
        if (frac > 0.0) {
            const Vec2 next = g.centers[static_cast<size_t>(w.vertices[k + 1])];
            pos = pos + (next - pos) * frac;
        }
        sp.samples.push_back(pos * inv_sqrt_n);
    }
    return sp;
}

CorrectedPath correct_path(const WalkPath& w, const CorrectorField& c, const PenroseGraph& g) {
    CorrectedPath out;
    out.points.reserve(w.vertices.size());
    for (VertexId v : w.vertices) {
        if (g.dist_boundary[static_cast<size_t>(v)] < c.boundary_margin) {
            throw MarginViolationError("walk visits a vertex inside the corrector boundary margin");
        }
        out.points.push_back(g.centers[static_cast<size_t>(v)] + c.chi[static_cast<size_t>(v)]);
    }
    return out;
}

Vec2 scaled_endpoint(const WalkPath& w, const CorrectorField& c, const PenroseGraph& g) {
    const auto v = static_cast<std::size_t>(w.vertices.back());
    const Vec2 m = g.centers[v] + c.chi[v];
    const int n = w.steps();
    return n > 0 ? m / std::sqrt(static_cast<double>(n)) : m;
}

}  // namespace penrose
