#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "penrose/tiling.hpp"

namespace penrose {

using VertexId = int32_t;

/// Random-walk graph on tile centers. Vertex ids coincide with tile indices
/// of the originating patch (tiles are key-sorted, so ids are deterministic).
/// Adjacency is CSR with neighbor lists sorted by id; step vectors are the
/// exact differences of stored centers.
struct PenroseGraph {
    std::vector<Vec2> centers;
    std::vector<TileKey> keys;
    std::vector<int32_t> adj_offsets;    // size N+1
    std::vector<VertexId> adj;           // concatenated neighbor lists
    std::vector<uint8_t> interior;       // 1 iff degree == 4
    std::vector<int32_t> dist_origin;    // BFS distance, -1 if unreachable
    std::vector<int32_t> dist_boundary;  // hops to nearest non-interior vertex
    VertexId origin_id = 0;
    uint64_t env_seed = 0;  // seed of the originating environment

    std::size_t size() const { return centers.size(); }
    int degree(VertexId v) const { return adj_offsets[static_cast<size_t>(v) + 1] - adj_offsets[static_cast<size_t>(v)]; }
    std::span<const VertexId> neighbors(VertexId v) const {
        return {adj.data() + adj_offsets[static_cast<size_t>(v)],
                adj.data() + adj_offsets[static_cast<size_t>(v) + 1]};
    }
    Vec2 step(VertexId from, VertexId to) const {
        return centers[static_cast<size_t>(to)] - centers[static_cast<size_t>(from)];
    }
};

/// The finite set S of center-to-center step vectors, deduplicated over
/// interior vertices, with occurrence counts.
struct StepCatalog {
    std::vector<Vec2> vectors;
    std::vector<int64_t> frequency;
};

/// Builds the graph: edges exactly between tiles sharing a full geometric
/// edge (two common integer corner 5-tuples).
PenroseGraph build_graph(const Patch& patch);

StepCatalog step_catalog(const PenroseGraph& g);

/// BFS distance from the origin vertex. Throws UnreachableError for vertices
/// disconnected from the origin (possible only in the boundary fringe).
int graph_distance(const PenroseGraph& g, VertexId v);

/// Largest n such that the whole BFS ball of radius n keeps at least
/// `margin` hops from every non-interior vertex.
int safe_graph_radius(const PenroseGraph& g, int margin);

}  // namespace penrose
