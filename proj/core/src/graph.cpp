#include "penrose/graph.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <limits>

namespace penrose {

namespace {

uint64_t hash_tuple10(const std::array<int32_t, 5>& a, const std::array<int32_t, 5>& b) {
    uint64_t h = 0x9E3779B97F4A7C15ULL;
    auto feed = [&h](int32_t v) {
        h ^= static_cast<uint64_t>(static_cast<uint32_t>(v)) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        h *= 0xBF58476D1CE4E5B9ULL;
        h ^= h >> 29;
    };
    for (int32_t v : a) feed(v);
    for (int32_t v : b) feed(v);
    return h;
}

struct EdgeRef {
    uint64_t hash;
    VertexId tile;
};

// Canonical (sorted) corner pair of edge `e` of a tile; corners are in
// rhombus order so edges are (0,1),(1,2),(2,3),(3,0).
std::pair<std::array<int32_t, 5>, std::array<int32_t, 5>> edge_corners(const Tile& tile, int e) {
    const auto corners = tile_corner_tuples(tile);
    auto a = corners[static_cast<size_t>(e)];
    auto b = corners[static_cast<size_t>((e + 1) % 4)];
    if (b < a) std::swap(a, b);
    return {a, b};
}

std::vector<int32_t> bfs(const PenroseGraph& g, std::span<const VertexId> sources) {
    std::vector<int32_t> dist(g.size(), -1);
    std::deque<VertexId> queue;
    for (VertexId s : sources) {
        dist[static_cast<size_t>(s)] = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        const VertexId v = queue.front();
        queue.pop_front();
        const int32_t d = dist[static_cast<size_t>(v)];
        for (VertexId w : g.neighbors(v)) {
            if (dist[static_cast<size_t>(w)] < 0) {
                dist[static_cast<size_t>(w)] = d + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

}  // namespace

PenroseGraph build_graph(const Patch& patch) {
    const std::size_t n = patch.tiles.size();
    PenroseGraph g;
    g.centers.resize(n);
    g.keys.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        g.centers[t] = patch.tiles[t].center;
        g.keys[t] = patch.tiles[t].key;
    }
    g.origin_id = static_cast<VertexId>(patch.origin_index);
    g.env_seed = patch.params.seed;

    // Edge discovery: hash each tile edge's canonical corner pair, sort,
    // and pair up equal hashes. Collisions are resolved by exact integer
    // comparison, so adjacency is exact.
    std::vector<EdgeRef> refs;
    refs.reserve(4 * n);
    for (std::size_t t = 0; t < n; ++t) {
        for (int e = 0; e < 4; ++e) {
            const auto [a, b] = edge_corners(patch.tiles[t], e);
            refs.push_back({hash_tuple10(a, b), static_cast<VertexId>(t)});
        }
    }
    std::sort(refs.begin(), refs.end(), [](const EdgeRef& a, const EdgeRef& b) {
        if (a.hash != b.hash) return a.hash < b.hash;
        return a.tile < b.tile;
    });

    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(2 * n);
    std::size_t lo = 0;
    while (lo < refs.size()) {
        std::size_t hi = lo + 1;
        while (hi < refs.size() && refs[hi].hash == refs[lo].hash) ++hi;
        if (hi - lo == 2) {
            const VertexId ta = refs[lo].tile;
            const VertexId tb = refs[lo + 1].tile;
            if (ta != tb && tiles_share_edge(patch.tiles[static_cast<size_t>(ta)], patch.tiles[static_cast<size_t>(tb)])) {
                edges.emplace_back(ta, tb);
            }
        } else if (hi - lo > 2) {
            // Hash collision bucket: group by exact edge identity.
            for (std::size_t x = lo; x < hi; ++x) {
                for (std::size_t y = x + 1; y < hi; ++y) {
                    if (refs[x].tile == refs[y].tile) continue;
                    const Tile& a = patch.tiles[static_cast<size_t>(refs[x].tile)];
                    const Tile& b = patch.tiles[static_cast<size_t>(refs[y].tile)];
                    if (tiles_share_edge(a, b)) edges.emplace_back(refs[x].tile, refs[y].tile);
                }
            }
        }
        lo = hi;
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::vector<int32_t> degree(n, 0);
    for (const auto& [a, b] : edges) {
        ++degree[static_cast<size_t>(a)];
        ++degree[static_cast<size_t>(b)];
    }
    g.adj_offsets.assign(n + 1, 0);
    for (std::size_t t = 0; t < n; ++t) g.adj_offsets[t + 1] = g.adj_offsets[t] + degree[t];
    g.adj.resize(static_cast<size_t>(g.adj_offsets[n]));
    std::vector<int32_t> cursor(g.adj_offsets.begin(), g.adj_offsets.end() - 1);
    for (const auto& [a, b] : edges) {
        g.adj[static_cast<size_t>(cursor[static_cast<size_t>(a)]++)] = b;
        g.adj[static_cast<size_t>(cursor[static_cast<size_t>(b)]++)] = a;
    }
    for (std::size_t t = 0; t < n; ++t) {
        std::sort(g.adj.begin() + g.adj_offsets[t], g.adj.begin() + g.adj_offsets[t + 1]);
    }

    g.interior.resize(n);
    for (std::size_t t = 0; t < n; ++t) g.interior[t] = degree[t] == 4 ? 1 : 0;

    g.dist_origin = bfs(g, std::span<const VertexId>(&g.origin_id, 1));
    std::vector<VertexId> boundary;
    for (std::size_t t = 0; t < n; ++t) {
        if (!g.interior[t]) boundary.push_back(static_cast<VertexId>(t));
    }
    g.dist_boundary = bfs(g, boundary);
    // Vertices unreachable from any boundary vertex can only exist in a
    // boundaryless (whole-plane) patch, which cannot happen here; guard by
    // treating them as deep interior.
    for (auto& d : g.dist_boundary) {
        if (d < 0) d = std::numeric_limits<int32_t>::max();
    }
    return g;
}

StepCatalog step_catalog(const PenroseGraph& g) {
    constexpr double kStepTolerance = 1e-9;
    std::vector<Vec2> steps;
    for (std::size_t t = 0; t < g.size(); ++t) {
        if (!g.interior[t]) continue;
        const auto v = static_cast<VertexId>(t);
        for (VertexId w : g.neighbors(v)) steps.push_back(g.step(v, w));
    }
    // Cluster by gap-splitting: runs separated by >tolerance in x, then
    // within each run by gaps in y. Honest distinct steps are separated by
    // algebraic-number gaps far above the tolerance, while duplicates jitter
    // by rounding only, so no run straddles two true vectors.
    std::sort(steps.begin(), steps.end(), [](Vec2 a, Vec2 b) { return a.x < b.x; });
    StepCatalog catalog;
    std::size_t run_begin = 0;
    for (std::size_t k = 1; k <= steps.size(); ++k) {
        if (k < steps.size() && steps[k].x - steps[k - 1].x <= kStepTolerance) continue;
        std::sort(steps.begin() + static_cast<std::ptrdiff_t>(run_begin),
                  steps.begin() + static_cast<std::ptrdiff_t>(k),
                  [](Vec2 a, Vec2 b) { return a.y < b.y; });
        std::size_t cluster_begin = run_begin;
        for (std::size_t m = run_begin + 1; m <= k; ++m) {
            if (m < k && steps[m].y - steps[m - 1].y <= kStepTolerance) continue;
            catalog.vectors.push_back(steps[cluster_begin]);
            catalog.frequency.push_back(static_cast<int64_t>(m - cluster_begin));
            cluster_begin = m;
        }
        run_begin = k;
    }
    return catalog;
}

int graph_distance(const PenroseGraph& g, VertexId v) {
    const int32_t d = g.dist_origin[static_cast<size_t>(v)];
    if (d < 0) throw UnreachableError("vertex " + std::to_string(v) + " is disconnected from the origin");
    return d;
}

int safe_graph_radius(const PenroseGraph& g, int margin) {
    int32_t nearest_unsafe = std::numeric_limits<int32_t>::max();
    int32_t max_dist = 0;
    for (std::size_t t = 0; t < g.size(); ++t) {
        if (g.dist_origin[t] < 0) continue;
        max_dist = std::max(max_dist, g.dist_origin[t]);
        if (g.dist_boundary[t] < margin) nearest_unsafe = std::min(nearest_unsafe, g.dist_origin[t]);
    }
    if (nearest_unsafe == std::numeric_limits<int32_t>::max()) return max_dist;
    return std::max(0, nearest_unsafe - 1);
}

}  // namespace penrose
