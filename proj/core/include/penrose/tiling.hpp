#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "penrose/pentagrid.hpp"

namespace penrose {

enum class TileShape : uint8_t { Thick, Thin };

/// Which side of a grid line to resolve to when a queried point sits
/// exactly on it.
enum class LineSide : uint8_t { Below, Above };

/// Exact combinatorial identity of one rhombus: the defining family pair
/// with their line indices, plus the integer base point K of the dual map.
/// All geometry (vertices, center) derives from these integers, so adjacency
/// and edge matching never touch floating point.
struct TileKey {
    int8_t i = 0;  // i < j
    int8_t j = 0;
    int32_t p = 0;  // line index in family i
    int32_t q = 0;  // line index in family j

    friend auto operator<=>(const TileKey&, const TileKey&) = default;
};

struct Tile {
    TileKey key;
    std::array<int32_t, 5> base{};  // K with K_i = p, K_j = q
    Vec2 center;                    // patch frame (translated)
    TileShape shape = TileShape::Thick;
    uint8_t rotation_class = 0;  // 1..10, lexicographic rank of {i,j}
};

/// Finite circular patch of the tiling, recentred so that the tile whose raw
/// center lies nearest the pentagrid origin sits exactly at (0,0). Tiles are
/// sorted by key; that order also defines graph vertex ids.
struct Patch {
    GridParams params;
    double radius = 0.0;
    std::vector<Tile> tiles;
    std::size_t origin_index = 0;
    Vec2 offset;  // raw center of the origin tile (the applied translation)
};

/// Tiles dual to the intersections along one pentagrid line, in increasing
/// position along e[line.family]; consecutive entries share an edge.
struct Ribbon {
    GridLine line;
    std::vector<std::size_t> tile_indices;  // indices into Patch::tiles
    std::vector<TileKey> tiles;
};

/// de Bruijn strip index ceil(z.eperp[k] - gamma[k]). Throws OnGridLineError
/// when z is within kPointTolerance of a family-k line and no hint is given.
int32_t strip_index(Vec2 z, int family, const GridParams& params);
int32_t strip_index(Vec2 z, int family, const GridParams& params, LineSide hint);

/// Dual tile of a regular intersection. shape is Thick iff the family
/// difference is 1 or 4 mod 5. The returned center is in raw (untranslated)
/// coordinates.
Tile dual_tile(const Intersection& x, const GridParams& params);

/// Dualizes every intersection within radius+2, recentres on the tile
/// nearest the origin (ties broken by lexicographic center order), and keeps
/// tiles whose recentred center is within `radius`.
Patch build_patch(const GridParams& params, double radius);

Ribbon ribbon_through(const Patch& patch, GridLine line);

/// Steps between two tiles along the ribbon order.
int ribbon_distance(const Ribbon& r, const TileKey& a, const TileKey& b);

/// The four vertices of a tile in patch coordinates, in rhombus order
/// (base, base+e_i, base+e_i+e_j, base+e_j).
std::array<Vec2, 4> tile_corners(const Tile& tile, const Patch& patch);

/// The four vertices as exact integer 5-tuples, same order as tile_corners.
std::array<std::array<int32_t, 5>, 4> tile_corner_tuples(const Tile& tile);

/// True iff the two tiles share a full geometric edge, i.e. exactly two
/// common integer corner 5-tuples.
bool tiles_share_edge(const Tile& a, const Tile& b);

/// Translates the patch so tile `tile_index` sits at (0,0); combinatorics
/// unchanged. Mirrors the environment shift seen from that tile.
Patch recenter(const Patch& patch, std::size_t tile_index);

/// Sub-patch of tiles within `radius` of `center` (patch frame), recentred
/// on the tile at `center`. Used by finite-volume shift-covariance checks.
Patch trim_patch(const Patch& patch, std::size_t center_tile, double radius);

/// Lexicographic rank (1..10) of the unordered family pair.
uint8_t rotation_class_of(int i, int j);

/// Golden ratio: thick/thin tile frequency and the thick-torus weight.
inline constexpr double kGoldenRatio = 1.6180339887498948482;

}  // namespace penrose
