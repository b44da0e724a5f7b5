#include "penrose/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace penrose {

namespace {

Vec2 raw_center(const std::array<int32_t, 5>& base, int i, int j) {
    const StarVectors& sv = star_vectors();
    Vec2 c;
    for (int k = 0; k < 5; ++k) c += sv.e[static_cast<size_t>(k)] * static_cast<double>(base[static_cast<size_t>(k)]);
    return c + (sv.e[static_cast<size_t>(i)] + sv.e[static_cast<size_t>(j)]) * 0.5;
}

// Prefers the smaller squared distance; exact lexicographic (x, y) order on
// ties so recentring is deterministic.
bool center_before(Vec2 a, Vec2 b) {
    const double da = a.norm2();
    const double db = b.norm2();
    if (da != db) return da < db;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
}

}  // namespace

uint8_t rotation_class_of(int i, int j) {
    // (0,1)(0,2)(0,3)(0,4)(1,2)(1,3)(1,4)(2,3)(2,4)(3,4) -> 1..10
    static constexpr int rank[5][5] = {{0, 1, 2, 3, 4},
                                       {0, 0, 5, 6, 7},
                                       {0, 0, 0, 8, 9},
                                       {0, 0, 0, 0, 10},
                                       {0, 0, 0, 0, 0}};
    return static_cast<uint8_t>(rank[i][j]);
}

int32_t strip_index(Vec2 z, int family, const GridParams& params) {
    const double v = z.dot(star_vectors().eperp[static_cast<size_t>(family)]) -
                     params.gamma[static_cast<size_t>(family)];
    if (std::abs(v - std::round(v)) < kPointTolerance) {
        throw OnGridLineError("point lies on a family-" + std::to_string(family) +
                              " grid line; supply a side hint");
    }
    return static_cast<int32_t>(std::ceil(v));
}

int32_t strip_index(Vec2 z, int family, const GridParams& params, LineSide hint) {
    const double v = z.dot(star_vectors().eperp[static_cast<size_t>(family)]) -
                     params.gamma[static_cast<size_t>(family)];
    if (std::abs(v - std::round(v)) < kPointTolerance) {
        const auto base = static_cast<int32_t>(std::llround(v));
        return hint == LineSide::Above ? base + 1 : base;
    }
    return static_cast<int32_t>(std::ceil(v));
}

Tile dual_tile(const Intersection& x, const GridParams& params) {
    const int i = x.a.family;
    const int j = x.b.family;
    Tile tile;
    tile.key = TileKey{static_cast<int8_t>(i), static_cast<int8_t>(j), x.a.index, x.b.index};
    tile.base[static_cast<size_t>(i)] = x.a.index;
    tile.base[static_cast<size_t>(j)] = x.b.index;
    for (int k = 0; k < 5; ++k) {
        if (k == i || k == j) continue;
        try {
            tile.base[static_cast<size_t>(k)] = strip_index(x.point, k, params);
        } catch (const OnGridLineError&) {
            throw SingularGridError("intersection lies on a third grid line (triple point)");
        }
    }
    const int d = j - i;  // i < j, so d in 1..4
    tile.shape = (d == 1 || d == 4) ? TileShape::Thick : TileShape::Thin;
    tile.rotation_class = rotation_class_of(i, j);
    tile.center = raw_center(tile.base, i, j);
    return tile;
}

Patch build_patch(const GridParams& params, double radius) {
    if (!regularity_check(params, radius + 3.0)) {
        throw SingularGridError("pentagrid singular within radius " + std::to_string(radius + 3.0));
    }

    const StarVectors& sv = star_vectors();
    // Pass 1: locate the tile whose raw center is nearest the origin. Only
    // the center is computed, no tiles are stored.
    Vec2 best{std::numeric_limits<double>::max(), 0.0};
    bool found = false;
    detail::scan_intersections(params, radius + 2.0, [&](const Intersection& x) {
        std::array<int32_t, 5> base{};
        base[static_cast<size_t>(x.a.family)] = x.a.index;
        base[static_cast<size_t>(x.b.family)] = x.b.index;
        for (int k = 0; k < 5; ++k) {
            if (k == x.a.family || k == x.b.family) continue;
            const double v = x.point.dot(sv.eperp[static_cast<size_t>(k)]) - params.gamma[static_cast<size_t>(k)];
            base[static_cast<size_t>(k)] = static_cast<int32_t>(std::ceil(v));
        }
        const Vec2 c = raw_center(base, x.a.family, x.b.family);
        if (!found || center_before(c, best)) {
            best = c;
            found = true;
        }
    });
    if (!found) throw EmptyPatchError("no pentagrid intersection within radius " + std::to_string(radius + 2.0));
    const Vec2 origin_center = best;

    // Pass 2: materialize tiles within `radius` of the recentred origin.
    Patch patch;
    patch.params = params;
    patch.radius = radius;
    patch.offset = origin_center;
    detail::scan_intersections(params, radius + 2.0, [&](const Intersection& x) {
        Tile tile = dual_tile(x, params);
        tile.center -= origin_center;
        if (tile.center.norm2() <= radius * radius) patch.tiles.push_back(tile);
    });

    std::sort(patch.tiles.begin(), patch.tiles.end(),
              [](const Tile& a, const Tile& b) { return a.key < b.key; });
    for (std::size_t t = 0; t < patch.tiles.size(); ++t) {
        if (patch.tiles[t].center == Vec2{0.0, 0.0}) {
            patch.origin_index = t;
            return patch;
        }
    }
    throw EmptyPatchError("origin tile lost during patch assembly");
}

std::array<std::array<int32_t, 5>, 4> tile_corner_tuples(const Tile& tile) {
    std::array<std::array<int32_t, 5>, 4> corners{};
    corners.fill(tile.base);
    const auto i = static_cast<size_t>(tile.key.i);
    const auto j = static_cast<size_t>(tile.key.j);
    corners[1][i] += 1;
    corners[2][i] += 1;
    corners[2][j] += 1;
    corners[3][j] += 1;
    return corners;
}

std::array<Vec2, 4> tile_corners(const Tile& tile, const Patch& patch) {
    const StarVectors& sv = star_vectors();
    Vec2 p0;
    for (int k = 0; k < 5; ++k) p0 += sv.e[static_cast<size_t>(k)] * static_cast<double>(tile.base[static_cast<size_t>(k)]);
    p0 -= patch.offset;
    const Vec2 ei = sv.e[static_cast<size_t>(tile.key.i)];
    const Vec2 ej = sv.e[static_cast<size_t>(tile.key.j)];
    return {p0, p0 + ei, p0 + ei + ej, p0 + ej};
}

bool tiles_share_edge(const Tile& a, const Tile& b) {
    const auto ca = tile_corner_tuples(a);
    const auto cb = tile_corner_tuples(b);
    int shared = 0;
    for (const auto& u : ca) {
        for (const auto& v : cb) {
            if (u == v) ++shared;
        }
    }
    return shared == 2;
}

Ribbon ribbon_through(const Patch& patch, GridLine line) {
    const StarVectors& sv = star_vectors();
    struct Entry {
        double t;
        std::size_t idx;
    };
    std::vector<Entry> entries;
    for (std::size_t t = 0; t < patch.tiles.size(); ++t) {
        const Tile& tile = patch.tiles[t];
        int other_family = -1;
        int other_index = 0;
        if (tile.key.i == line.family && tile.key.p == line.index) {
            other_family = tile.key.j;
            other_index = tile.key.q;
        } else if (tile.key.j == line.family && tile.key.q == line.index) {
            other_family = tile.key.i;
            other_index = tile.key.p;
        }
        if (other_family < 0) continue;
        // Position of the defining intersection along the line direction.
        const Vec2 nf = sv.eperp[static_cast<size_t>(line.family)];
        const Vec2 no = sv.eperp[static_cast<size_t>(other_family)];
        const double cf = patch.params.gamma[static_cast<size_t>(line.family)] + line.index;
        const double co = patch.params.gamma[static_cast<size_t>(other_family)] + other_index;
        const double det = nf.cross(no);
        const Vec2 x = (Vec2{no.y, -no.x} * cf + Vec2{-nf.y, nf.x} * co) / det;
        entries.push_back({x.dot(sv.e[static_cast<size_t>(line.family)]), t});
    }
    if (entries.empty()) {
        throw EmptyRibbonError("no tile of the patch lies on family " + std::to_string(line.family) +
                               " line " + std::to_string(line.index));
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.t < b.t; });

    // The patch is a disk in tile-center space, so a ribbon can lose tiles
    // near the rim; keep the longest edge-contiguous run (first on ties).
    std::size_t best_begin = 0, best_len = 1, run_begin = 0;
    for (std::size_t k = 1; k <= entries.size(); ++k) {
        const bool contiguous =
            k < entries.size() &&
            tiles_share_edge(patch.tiles[entries[k - 1].idx], patch.tiles[entries[k].idx]);
        if (!contiguous) {
            const std::size_t len = k - run_begin;
            if (len > best_len) {
                best_len = len;
                best_begin = run_begin;
            }
            run_begin = k;
        }
    }
    Ribbon ribbon;
    ribbon.line = line;
    ribbon.tile_indices.reserve(best_len);
    ribbon.tiles.reserve(best_len);
    for (std::size_t k = best_begin; k < best_begin + best_len; ++k) {
        ribbon.tile_indices.push_back(entries[k].idx);
        ribbon.tiles.push_back(patch.tiles[entries[k].idx].key);
    }
    return ribbon;
}

int ribbon_distance(const Ribbon& r, const TileKey& a, const TileKey& b) {
    auto position = [&](const TileKey& key) {
        for (std::size_t k = 0; k < r.tiles.size(); ++k) {
            if (r.tiles[k] == key) return static_cast<int>(k);
        }
        throw NotOnRibbonError("tile is not on the ribbon");
    };
    return std::abs(position(a) - position(b));
}

Patch recenter(const Patch& patch, std::size_t tile_index) {
    Patch out = patch;
    const Vec2 delta = patch.tiles[tile_index].center;
    for (Tile& t : out.tiles) t.center -= delta;
    out.offset += delta;
    out.origin_index = tile_index;
    return out;
}

Patch trim_patch(const Patch& patch, std::size_t center_tile, double radius) {
    const Vec2 c = patch.tiles[center_tile].center;
    Patch out;
    out.params = patch.params;
    out.radius = radius;
    out.offset = patch.offset + c;
    const TileKey center_key = patch.tiles[center_tile].key;
    for (const Tile& t : patch.tiles) {
        if ((t.center - c).norm2() <= radius * radius) {
            Tile copy = t;
            copy.center -= c;
            out.tiles.push_back(copy);
        }
    }
    for (std::size_t t = 0; t < out.tiles.size(); ++t) {
        if (out.tiles[t].key == center_key) {
            out.origin_index = t;
            return out;
        }
    }
    throw EmptyPatchError("trim radius excludes the requested center tile");
}

}  // namespace penrose
