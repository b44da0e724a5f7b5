#include "penrose/corrector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace penrose {

namespace {

/// Sub-CSR over a vertex subset, renumbered in BFS order from the origin for
/// gather locality. Couplings to vertices outside the domain are dropped
/// (they carry the Dirichlet zero).
struct DomainSystem {
    std::vector<VertexId> to_graph;    // domain index -> graph vertex
    std::vector<int32_t> from_graph;   // graph vertex -> domain index or -1
    std::vector<int32_t> offsets;
    std::vector<int32_t> nbrs;         // domain indices
};

DomainSystem build_domain(const PenroseGraph& g, const std::vector<uint8_t>& in_domain) {
    DomainSystem d;
    d.from_graph.assign(g.size(), -1);
    d.to_graph.reserve(g.size());
    // BFS order: sort domain vertices by (dist_origin, id); unreachable
    // vertices go last in id order.
    std::vector<VertexId> order;
    order.reserve(g.size());
    for (std::size_t t = 0; t < g.size(); ++t) {
        if (in_domain[t]) order.push_back(static_cast<VertexId>(t));
    }
    std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
        const int32_t da = g.dist_origin[static_cast<size_t>(a)];
        const int32_t db = g.dist_origin[static_cast<size_t>(b)];
        const int32_t ka = da < 0 ? std::numeric_limits<int32_t>::max() : da;
        const int32_t kb = db < 0 ? std::numeric_limits<int32_t>::max() : db;
        if (ka != kb) return ka < kb;
        return a < b;
    });
    for (VertexId v : order) {
        d.from_graph[static_cast<size_t>(v)] = static_cast<int32_t>(d.to_graph.size());
        d.to_graph.push_back(v);
    }
    d.offsets.assign(d.to_graph.size() + 1, 0);
    for (std::size_t k = 0; k < d.to_graph.size(); ++k) {
        int32_t deg = 0;
        for (VertexId w : g.neighbors(d.to_graph[k])) {
            if (d.from_graph[static_cast<size_t>(w)] >= 0) ++deg;
        }
        d.offsets[k + 1] = d.offsets[k] + deg;
    }
    d.nbrs.resize(static_cast<size_t>(d.offsets.back()));
    for (std::size_t k = 0; k < d.to_graph.size(); ++k) {
        int32_t cursor = d.offsets[k];
        for (VertexId w : g.neighbors(d.to_graph[k])) {
            const int32_t dw = d.from_graph[static_cast<size_t>(w)];
            if (dw >= 0) d.nbrs[static_cast<size_t>(cursor++)] = dw;
        }
    }
    return d;
}

// y = (1+eps) x - (1/4) sum_nbr x, both coordinates fused.
void apply_operator(const DomainSystem& d, double eps, const std::vector<Vec2>& x, std::vector<Vec2>& y) {
    const double diag = 1.0 + eps;
    const std::size_t n = d.to_graph.size();
    for (std::size_t k = 0; k < n; ++k) {
        Vec2 acc;
        for (int32_t o = d.offsets[k]; o < d.offsets[k + 1]; ++o) {
            acc += x[static_cast<size_t>(d.nbrs[static_cast<size_t>(o)])];
        }
        y[k] = x[k] * diag - acc * 0.25;
    }
}

double dot(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k].x * b[k].x + a[k].y * b[k].y;
    return s;
}

double max_norm(const std::vector<Vec2>& a) {
    double m = 0.0;
    for (const Vec2& v : a) m = std::max(m, std::max(std::abs(v.x), std::abs(v.y)));
    return m;
}

/// Conjugate gradients on the SPD operator (1+eps) I - (1/4) A restricted to
/// the domain. Stops when both the relative l2 and the absolute max-norm
/// residual targets hold; the recurrence residual is refreshed against the
/// true residual periodically and at acceptance.
std::vector<Vec2> conjugate_gradient(const DomainSystem& d, double eps, const std::vector<Vec2>& b,
                                     const SolverOptions& opts) {
    const std::size_t n = d.to_graph.size();
    std::vector<Vec2> x(n), r(b), p(b), ap(n);
    const double b_norm = std::sqrt(dot(b, b));
    if (b_norm == 0.0) return x;
    const double target_l2 = opts.rel_tol * b_norm;
    int cap = opts.max_iterations;
    if (cap <= 0) cap = static_cast<int>(50.0 * std::sqrt(static_cast<double>(n))) + 1000;

    double rr = dot(r, r);
    for (int it = 0; it < cap; ++it) {
        apply_operator(d, eps, p, ap);
        const double alpha = rr / dot(p, ap);
        for (std::size_t k = 0; k < n; ++k) x[k] += p[k] * alpha;
        const bool refresh = (it + 1) % 64 == 0;
        if (refresh) {
            apply_operator(d, eps, x, r);
            for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - r[k];
        } else {
            for (std::size_t k = 0; k < n; ++k) r[k] -= ap[k] * alpha;
        }
        const double rr_next = dot(r, r);
        if (std::sqrt(rr_next) <= target_l2 && max_norm(r) <= opts.abs_tol_inf) {
            // Accept on the true residual only.
            apply_operator(d, eps, x, ap);
            for (std::size_t k = 0; k < n; ++k) ap[k] = b[k] - ap[k];
            if (std::sqrt(dot(ap, ap)) <= target_l2 && max_norm(ap) <= opts.abs_tol_inf) return x;
            r = ap;
            p = r;
            rr = dot(r, r);
            continue;
        }
        const double beta = rr_next / rr;
        rr = rr_next;
        for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + p[k] * beta;
    }
    throw NoConvergenceError("conjugate gradient exceeded " + std::to_string(cap) + " iterations");
}

}  // namespace

DriftField drift_field(const PenroseGraph& g) {
    DriftField f;
    f.v.resize(g.size());
    for (std::size_t t = 0; t < g.size(); ++t) {
        const auto v = static_cast<VertexId>(t);
        Vec2 acc;
        for (VertexId w : g.neighbors(v)) acc += g.step(v, w);
        f.v[t] = acc * 0.25;
    }
    return f;
}

CorrectorField solve_resolvent(const PenroseGraph& g, double epsilon, const SolverOptions& opts) {
    const DriftField drift = drift_field(g);
    std::vector<uint8_t> in_domain(g.size(), 1);
    const DomainSystem d = build_domain(g, in_domain);
    std::vector<Vec2> b(d.to_graph.size());
    for (std::size_t k = 0; k < d.to_graph.size(); ++k) b[k] = drift.v[static_cast<size_t>(d.to_graph[k])];
    const std::vector<Vec2> psi = conjugate_gradient(d, epsilon, b, opts);

    CorrectorField c;
    c.epsilon = epsilon;
    c.chi.resize(g.size());
    double sq = 0.0;
    for (std::size_t k = 0; k < d.to_graph.size(); ++k) {
        c.chi[static_cast<size_t>(d.to_graph[k])] = psi[k];
        sq += psi[k].norm2();
        c.psi_max = std::max(c.psi_max, psi[k].norm());
    }
    c.psi_mean_sq = sq / static_cast<double>(g.size());
    const Vec2 at_origin = c.chi[static_cast<size_t>(g.origin_id)];
    for (Vec2& v : c.chi) v -= at_origin;
    c.chi[static_cast<size_t>(g.origin_id)] = {0.0, 0.0};

    // Martingale residual over interior vertices, evaluated on psi.
    std::vector<Vec2> res(d.to_graph.size());
    apply_operator(d, epsilon, psi, res);
    double max_res = 0.0;
    for (std::size_t k = 0; k < d.to_graph.size(); ++k) {
        if (!g.interior[static_cast<size_t>(d.to_graph[k])]) continue;
        max_res = std::max(max_res, (res[k] - b[k]).norm());
    }
    c.residual = max_res;
    return c;
}

CorrectorField solve_harmonic(const PenroseGraph& g, const SolverOptions& opts) {
    // phi = id + u with u = 0 off the interior turns the harmonicity
    // condition into the Dirichlet system (I - (1/4) A_int) u = V.
    const DriftField drift = drift_field(g);
    std::vector<uint8_t> in_domain(g.size(), 0);
    for (std::size_t t = 0; t < g.size(); ++t) {
        in_domain[t] = g.interior[t] && g.dist_origin[t] >= 0 ? 1 : 0;
    }
    const DomainSystem d = build_domain(g, in_domain);
    std::vector<Vec2> b(d.to_graph.size());
    for (std::size_t k = 0; k < d.to_graph.size(); ++k) b[k] = drift.v[static_cast<size_t>(d.to_graph[k])];
    const std::vector<Vec2> u = conjugate_gradient(d, 0.0, b, opts);

    CorrectorField c;
    c.epsilon = 0.0;
    c.chi.resize(g.size());
    for (std::size_t k = 0; k < d.to_graph.size(); ++k) c.chi[static_cast<size_t>(d.to_graph[k])] = u[k];
    const Vec2 at_origin = c.chi[static_cast<size_t>(g.origin_id)];
    for (Vec2& v : c.chi) v -= at_origin;
    c.chi[static_cast<size_t>(g.origin_id)] = {0.0, 0.0};

    std::vector<Vec2> res(d.to_graph.size());
    apply_operator(d, 0.0, u, res);
    double max_res = 0.0;
    for (std::size_t k = 0; k < d.to_graph.size(); ++k) {
        max_res = std::max(max_res, (res[k] - b[k]).norm());
    }
    c.residual = max_res;
    return c;
}

std::vector<double> resolvent_norm_scan(const PenroseGraph& g, std::span<const double> epsilons,
                                        const SolverOptions& opts) {
    std::vector<double> out;
    out.reserve(epsilons.size());
    for (double eps : epsilons) {
        const CorrectorField c = solve_resolvent(g, eps, opts);
        out.push_back(eps * c.psi_mean_sq);
    }
    return out;
}

double martingale_residual(const PenroseGraph& g, const CorrectorField& c) {
    double worst = 0.0;
    for (std::size_t t = 0; t < g.size(); ++t) {
        if (!g.interior[t]) continue;
        const auto v = static_cast<VertexId>(t);
        Vec2 acc;
        for (VertexId w : g.neighbors(v)) {
            acc += g.centers[static_cast<size_t>(w)] + c.chi[static_cast<size_t>(w)];
        }
        const Vec2 res = acc * 0.25 - (g.centers[t] + c.chi[t]);
        worst = std::max(worst, res.norm());
    }
    return worst;
}

double cocycle_check(const CorrectorField& c, const PenroseGraph& g, const Patch& patch,
                     std::span<const std::pair<VertexId, VertexId>> pairs) {
    double worst = 0.0;
    for (const auto& [x, y] : pairs) {
        if (x == y) continue;  // chi'(0) = 0 by normalization, discrepancy 0
        const double sub_radius = patch.radius - g.centers[static_cast<size_t>(y)].norm();
        const Patch sub = trim_patch(patch, static_cast<std::size_t>(y), sub_radius);
        const PenroseGraph sub_g = build_graph(sub);
        const CorrectorField sub_c =
            c.epsilon > 0.0 ? solve_resolvent(sub_g, c.epsilon) : solve_harmonic(sub_g);
        // Locate x in the sub-patch by tile key.
        const TileKey key = g.keys[static_cast<size_t>(x)];
        const auto it = std::lower_bound(sub_g.keys.begin(), sub_g.keys.end(), key);
        if (it == sub_g.keys.end() || !(*it == key)) {
            throw OutOfRangeError("pair vertex outside the recentred sub-patch");
        }
        const auto xs = static_cast<std::size_t>(it - sub_g.keys.begin());
        const Vec2 lhs = c.chi[static_cast<size_t>(x)] - c.chi[static_cast<size_t>(y)];
        worst = std::max(worst, (lhs - sub_c.chi[xs]).norm());
    }
    return worst;
}

SublinearityProfile sublinearity_profile(const CorrectorField& c, const PenroseGraph& g,
                                         const Patch& patch, std::span<const int> ns, int k_max) {
    SublinearityProfile profile;
    const int safe = safe_graph_radius(g, c.boundary_margin);
    for (int n : ns) {
        if (n > safe) {
            throw OutOfRangeError("profile radius " + std::to_string(n) +
                                  " exceeds the safe interior " + std::to_string(safe));
        }
    }
    // max |chi| over BFS balls, one sweep.
    const int n_top = *std::max_element(ns.begin(), ns.end());
    std::vector<double> max_by_dist(static_cast<size_t>(n_top) + 1, 0.0);
    for (std::size_t t = 0; t < g.size(); ++t) {
        const int32_t dist = g.dist_origin[t];
        if (dist < 0 || dist > n_top) continue;
        max_by_dist[static_cast<size_t>(dist)] = std::max(max_by_dist[static_cast<size_t>(dist)], c.chi[t].norm());
    }
    for (std::size_t k = 1; k < max_by_dist.size(); ++k) {
        max_by_dist[k] = std::max(max_by_dist[k], max_by_dist[k - 1]);
    }
    profile.ns.assign(ns.begin(), ns.end());
    for (int n : ns) profile.max_ratio.push_back(max_by_dist[static_cast<size_t>(n)] / n);

    // |chi(z_k)| / k along the two ribbons of the origin tile, forward
    // direction (increasing position along the line direction).
    const Tile& origin_tile = patch.tiles[patch.origin_index];
    const std::array<GridLine, 2> lines = {GridLine{origin_tile.key.i, origin_tile.key.p},
                                           GridLine{origin_tile.key.j, origin_tile.key.q}};
    std::array<std::vector<double>, 2> ratios;
    for (std::size_t side = 0; side < 2; ++side) {
        const Ribbon ribbon = ribbon_through(patch, lines[side]);
        std::size_t pos = ribbon.tiles.size();
        for (std::size_t k = 0; k < ribbon.tiles.size(); ++k) {
            if (ribbon.tile_indices[k] == patch.origin_index) {
                pos = k;
                break;
            }
        }
        if (pos == ribbon.tiles.size()) throw OutOfRangeError("origin tile missing from its own ribbon");
        for (int k = 1; k <= k_max && pos + static_cast<size_t>(k) < ribbon.tile_indices.size(); ++k) {
            const std::size_t tile = ribbon.tile_indices[pos + static_cast<size_t>(k)];
            ratios[side].push_back(c.chi[tile].norm() / k);
        }
    }
    const std::size_t ks = std::min(ratios[0].size(), ratios[1].size());
    for (std::size_t k = 0; k < ks; ++k) {
        profile.ks.push_back(static_cast<int>(k) + 1);
        profile.ribbon_ratio_a.push_back(ratios[0][k]);
        profile.ribbon_ratio_b.push_back(ratios[1][k]);
    }
    return profile;
}

}  // namespace penrose
