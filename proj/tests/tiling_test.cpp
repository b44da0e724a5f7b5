#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "penrose/graph.hpp"
#include "penrose/rng.hpp"
#include "penrose/tiling.hpp"
#include "test_util.hpp"

using namespace penrose;

namespace {

GridParams regular_params(uint64_t seed, double radius) {
    for (uint64_t s = seed;; ++s) {
        const GridParams p = sample_environment(s);
        if (regularity_check(p, radius + 3.0)) return p;
    }
}

}  // namespace

TEST_CASE("strip index") {
    GridParams params = sample_environment(3);
    const StarVectors& sv = star_vectors();

    SUBCASE("gamma 0, projection one half") {
        params.gamma = {0.0, 0.0, 0.0, 0.0, 0.0};
        CHECK(strip_index(sv.eperp[2] * 0.5, 2, params) == 1);
    }

    SUBCASE("ceiling just above the crossing") {
        params.gamma = {0.25, 0.25, 0.25, 0.25, 0.0};
        CHECK(strip_index(sv.eperp[1] * (0.25 + 1e-6), 1, params) == 1);
        CHECK(strip_index(sv.eperp[1] * (0.25 - 1e-6), 1, params) == 0);
    }

    SUBCASE("querying a point on a line needs a hint") {
        params.gamma = {0.25, 0.25, 0.25, 0.25, 0.0};
        const Vec2 on_line = sv.eperp[1] * 1.25;
        CHECK_THROWS_AS((void)strip_index(on_line, 1, params), OnGridLineError);
        CHECK(strip_index(on_line, 1, params, LineSide::Below) == 1);
        CHECK(strip_index(on_line, 1, params, LineSide::Above) == 2);
    }

    SUBCASE("agrees with the explicit strip-membership oracle") {
        const GridParams p = regular_params(11, 30.0);
        Rng rng(99);
        int tested = 0;
        while (tested < 1000) {
            const Vec2 z{(rng.uniform01() - 0.5) * 40.0, (rng.uniform01() - 0.5) * 40.0};
            Vec2 dual_vertex{0.0, 0.0};
            Vec2 oracle_vertex{0.0, 0.0};
            bool on_line = false;
            for (int k = 0; k < 5 && !on_line; ++k) {
                const double v = z.dot(sv.eperp[static_cast<size_t>(k)]) - p.gamma[static_cast<size_t>(k)];
                if (std::abs(v - std::round(v)) < kPointTolerance) {
                    on_line = true;
                    break;
                }
                dual_vertex += sv.e[static_cast<size_t>(k)] * static_cast<double>(strip_index(z, k, p));
                // Oracle: scan the strips m-1 < v <= m by explicit membership.
                int found = 0;
                bool hit = false;
                for (int m = -40; m <= 40; ++m) {
                    if (static_cast<double>(m) - 1.0 < v && v <= static_cast<double>(m)) {
                        found = m;
                        hit = true;
                        break;
                    }
                }
                REQUIRE(hit);
                oracle_vertex += sv.e[static_cast<size_t>(k)] * static_cast<double>(found);
            }
            if (on_line) continue;
            CHECK((dual_vertex - oracle_vertex).norm() < 1.0);
            ++tested;
        }
    }
}

TEST_CASE("dual tiles") {
    const GridParams params = regular_params(42, 12.0);
    const auto xs = intersections_in_disk(params, 10.0);
    REQUIRE(!xs.empty());

    SUBCASE("family distance decides the shape") {
        for (const Intersection& x : xs) {
            const Tile t = dual_tile(x, params);
            const int d = t.key.j - t.key.i;
            if (d == 1 || d == 4) {
                CHECK(t.shape == TileShape::Thick);
            } else {
                CHECK(t.shape == TileShape::Thin);
            }
            CHECK(t.rotation_class >= 1);
            CHECK(t.rotation_class <= 10);
        }
    }

    SUBCASE("the dual map is a similarity up to a bounded defect") {
        // The map intersection -> tile center expands by 5/2 and turns by a
        // quarter; the residual term is a sum of three fractional-part
        // coefficients plus the half-diagonal, bounded well under 4.
        for (const Intersection& x : xs) {
            const Tile t = dual_tile(x, params);
            const Vec2 prediction{2.5 * x.point.y, -2.5 * x.point.x};
            CHECK((t.center - prediction).norm() < 4.0);
        }
    }

    SUBCASE("triple points are rejected") {
        GridParams singular = params;
        singular.gamma = {0.0, 0.0, 0.0, 0.0, 0.0};
        const StarVectors& sv = star_vectors();
        (void)sv;
        const Intersection origin_cross{GridLine{0, 0}, GridLine{1, 0}, Vec2{0.0, 0.0}};
        CHECK_THROWS_AS((void)dual_tile(origin_cross, singular), SingularGridError);
    }
}

TEST_CASE("patch construction") {
    const GridParams params = regular_params(42, 53.0);
    const Patch patch = build_patch(params, 50.0);

    SUBCASE("origin tile sits exactly at the origin") {
        CHECK(patch.tiles[patch.origin_index].center.x == 0.0);
        CHECK(patch.tiles[patch.origin_index].center.y == 0.0);
    }

    SUBCASE("keys are unique and sorted") {
        for (std::size_t t = 1; t < patch.tiles.size(); ++t) {
            CHECK(patch.tiles[t - 1].key < patch.tiles[t].key);
        }
    }

    SUBCASE("thick to thin ratio approximates the golden ratio") {
        int64_t thick = 0, thin = 0;
        for (const Tile& t : patch.tiles) (t.shape == TileShape::Thick ? thick : thin)++;
        const double ratio = static_cast<double>(thick) / static_cast<double>(thin);
        CHECK(std::abs(ratio - kGoldenRatio) / kGoldenRatio < 0.02);
    }

    SUBCASE("geometric edges pair up with equal integer tuples") {
        // Independent of adjacency: bucket tile edges by quantized endpoint
        // coordinates; every bucket holds at most two entries and both carry
        // the same integer corner tuples.
        using Quant = std::array<int64_t, 4>;
        std::map<Quant, std::vector<std::pair<std::array<int32_t, 5>, std::array<int32_t, 5>>>> buckets;
        for (const Tile& t : patch.tiles) {
            const auto corners = tile_corners(t, patch);
            const auto tuples = tile_corner_tuples(t);
            for (int e = 0; e < 4; ++e) {
                Vec2 a = corners[static_cast<size_t>(e)];
                Vec2 b = corners[static_cast<size_t>((e + 1) % 4)];
                auto ta = tuples[static_cast<size_t>(e)];
                auto tb = tuples[static_cast<size_t>((e + 1) % 4)];
                if (std::tie(b.x, b.y) < std::tie(a.x, a.y)) {
                    std::swap(a, b);
                    std::swap(ta, tb);
                }
                const Quant q{static_cast<int64_t>(std::llround(a.x * 1e6)),
                              static_cast<int64_t>(std::llround(a.y * 1e6)),
                              static_cast<int64_t>(std::llround(b.x * 1e6)),
                              static_cast<int64_t>(std::llround(b.y * 1e6))};
                buckets[q].push_back({ta, tb});
            }
        }
        int64_t mismatches = 0;
        for (const auto& [q, entries] : buckets) {
            CHECK(entries.size() <= 2);
            if (entries.size() == 2 && entries[0] != entries[1]) ++mismatches;
        }
        CHECK(mismatches == 0);
    }

    SUBCASE("interior tiles have exactly four neighbors") {
        const PenroseGraph g = build_graph(patch);
        for (std::size_t t = 0; t < g.size(); ++t) {
            if (g.centers[t].norm() <= patch.radius - 2.0) {
                CHECK(g.degree(static_cast<VertexId>(t)) == 4);
            }
        }
    }

    SUBCASE("edge vectors are exactly the unit coordinate tuples") {
        const PenroseGraph g = build_graph(patch);
        for (std::size_t t = 0; t < g.size(); ++t) {
            const auto v = static_cast<VertexId>(t);
            for (VertexId w : g.neighbors(v)) {
                if (w <= v) continue;
                const auto ca = tile_corner_tuples(patch.tiles[t]);
                const auto cb = tile_corner_tuples(patch.tiles[static_cast<size_t>(w)]);
                std::vector<std::array<int32_t, 5>> shared;
                for (const auto& u1 : ca) {
                    for (const auto& u2 : cb) {
                        if (u1 == u2) shared.push_back(u1);
                    }
                }
                REQUIRE(shared.size() == 2);
                int nonzero = 0, units = 0;
                for (int k = 0; k < 5; ++k) {
                    const int d = shared[1][static_cast<size_t>(k)] - shared[0][static_cast<size_t>(k)];
                    if (d != 0) ++nonzero;
                    if (std::abs(d) == 1) ++units;
                }
                CHECK(nonzero == 1);
                CHECK(units == 1);
            }
        }
    }

    SUBCASE("ten rotation classes, half thick half thin") {
        std::set<int> seen;
        for (const Tile& t : patch.tiles) seen.insert(t.rotation_class);
        CHECK(seen.size() == 10);
        for (const Tile& t : patch.tiles) {
            const int d = t.key.j - t.key.i;
            const bool thick = d == 1 || d == 4;
            CHECK((t.shape == TileShape::Thick) == thick);
        }
    }
}

TEST_CASE("tile areas cover the disk with no gaps or overlaps") {
    const GridParams params = regular_params(5, 33.0);
    const Patch patch = build_patch(params, 30.0);
    const auto clip = testutil::inscribed_polygon(28.0, 720);
    const double target = testutil::polygon_area(clip);
    double covered = 0.0;
    for (const Tile& t : patch.tiles) {
        const auto corners = tile_corners(t, patch);
        std::vector<Vec2> poly(corners.begin(), corners.end());
        // Orient counterclockwise for the clipper.
        if ((poly[1] - poly[0]).cross(poly[3] - poly[0]) < 0.0) std::reverse(poly.begin(), poly.end());
        covered += testutil::polygon_area(testutil::clip_convex(poly, clip));
    }
    CHECK(std::abs(covered - target) / target < 1e-6);
}

TEST_CASE("ribbons") {
    const GridParams params = regular_params(42, 33.0);
    const Patch patch = build_patch(params, 30.0);
    const Tile& origin = patch.tiles[patch.origin_index];
    const GridLine line_i{origin.key.i, origin.key.p};
    const GridLine line_j{origin.key.j, origin.key.q};

    SUBCASE("consecutive tiles share an edge parallel to the line direction") {
        const StarVectors& sv = star_vectors();
        for (const GridLine& line : {line_i, line_j}) {
            const Ribbon r = ribbon_through(patch, line);
            REQUIRE(r.tiles.size() >= 3);
            for (std::size_t k = 1; k < r.tile_indices.size(); ++k) {
                const Tile& a = patch.tiles[r.tile_indices[k - 1]];
                const Tile& b = patch.tiles[r.tile_indices[k]];
                REQUIRE(tiles_share_edge(a, b));
                // The shared edge's tuple difference is the unit vector of
                // the ribbon family, so its geometric direction is e[family].
                const auto ca = tile_corner_tuples(a);
                const auto cb = tile_corner_tuples(b);
                std::vector<std::array<int32_t, 5>> shared;
                for (const auto& u1 : ca)
                    for (const auto& u2 : cb)
                        if (u1 == u2) shared.push_back(u1);
                REQUIRE(shared.size() == 2);
                std::array<int32_t, 5> diff{};
                for (int m = 0; m < 5; ++m)
                    diff[static_cast<size_t>(m)] =
                        shared[1][static_cast<size_t>(m)] - shared[0][static_cast<size_t>(m)];
                CHECK(std::abs(diff[static_cast<size_t>(line.family)]) == 1);
                // Geometric parallelism within 1e-9.
                Vec2 geo;
                for (int m = 0; m < 5; ++m) geo += sv.e[static_cast<size_t>(m)] * static_cast<double>(diff[static_cast<size_t>(m)]);
                CHECK(std::abs(geo.cross(sv.e[static_cast<size_t>(line.family)])) < 1e-9);
            }
        }
    }

    SUBCASE("the origin ribbon follows neighbor adjacency from z0") {
        const PenroseGraph g = build_graph(patch);
        const Ribbon r = ribbon_through(patch, line_i);
        std::size_t pos = r.tile_indices.size();
        for (std::size_t k = 0; k < r.tile_indices.size(); ++k) {
            if (r.tile_indices[k] == patch.origin_index) pos = k;
        }
        REQUIRE(pos < r.tile_indices.size());
        for (std::size_t k = pos + 1; k < r.tile_indices.size(); ++k) {
            const auto prev = static_cast<VertexId>(r.tile_indices[k - 1]);
            const auto cur = static_cast<VertexId>(r.tile_indices[k]);
            const auto nbrs = g.neighbors(prev);
            CHECK(std::find(nbrs.begin(), nbrs.end(), cur) != nbrs.end());
        }
    }

    SUBCASE("distinct parallel lines give disjoint ribbons") {
        const Ribbon r1 = ribbon_through(patch, line_i);
        const Ribbon r2 = ribbon_through(patch, GridLine{line_i.family, line_i.index + 1});
        std::set<TileKey> s1(r1.tiles.begin(), r1.tiles.end());
        for (const TileKey& k : r2.tiles) CHECK(s1.count(k) == 0);
    }

    SUBCASE("every tile lies on its two defining ribbons") {
        for (std::size_t t = 0; t < patch.tiles.size(); t += 97) {
            const Tile& tile = patch.tiles[t];
            if (tile.center.norm() > patch.radius - 4.0) continue;
            const Ribbon ri = ribbon_through(patch, GridLine{tile.key.i, tile.key.p});
            const Ribbon rj = ribbon_through(patch, GridLine{tile.key.j, tile.key.q});
            const bool in_i = std::find(ri.tiles.begin(), ri.tiles.end(), tile.key) != ri.tiles.end();
            const bool in_j = std::find(rj.tiles.begin(), rj.tiles.end(), tile.key) != rj.tiles.end();
            CHECK(in_i);
            CHECK(in_j);
        }
    }

    SUBCASE("ribbon distance") {
        const Ribbon r = ribbon_through(patch, line_i);
        REQUIRE(r.tiles.size() >= 3);
        CHECK(ribbon_distance(r, r.tiles[0], r.tiles[0]) == 0);
        CHECK(ribbon_distance(r, r.tiles[0], r.tiles[1]) == 1);
        CHECK(ribbon_distance(r, r.tiles[0], r.tiles[2]) == ribbon_distance(r, r.tiles[2], r.tiles[0]));
        TileKey absent{0, 1, 100000, 100000};
        CHECK_THROWS_AS((void)ribbon_distance(r, r.tiles[0], absent), NotOnRibbonError);
    }

    SUBCASE("a line missing the patch raises EmptyRibbon") {
        CHECK_THROWS_AS((void)ribbon_through(patch, GridLine{0, 100000}), EmptyRibbonError);
    }
}

TEST_CASE("recentring and trimming") {
    const GridParams params = regular_params(42, 23.0);
    const Patch patch = build_patch(params, 20.0);

    SUBCASE("recenter at the origin tile is the identity") {
        const Patch same = recenter(patch, patch.origin_index);
        for (std::size_t t = 0; t < patch.tiles.size(); ++t) {
            CHECK(same.tiles[t].center == patch.tiles[t].center);
        }
    }

    SUBCASE("recentring away and back restores centers") {
        const std::size_t v = (patch.origin_index + 37) % patch.tiles.size();
        const Patch moved = recenter(patch, v);
        CHECK(moved.tiles[v].center == Vec2{0.0, 0.0});
        // Combinatorics unchanged.
        for (std::size_t t = 0; t < patch.tiles.size(); ++t) {
            CHECK(moved.tiles[t].key == patch.tiles[t].key);
            CHECK(moved.tiles[t].base == patch.tiles[t].base);
        }
        std::size_t orig_pos = moved.tiles.size();
        for (std::size_t t = 0; t < moved.tiles.size(); ++t) {
            if (moved.tiles[t].key == patch.tiles[patch.origin_index].key) orig_pos = t;
        }
        REQUIRE(orig_pos < moved.tiles.size());
        const Patch back = recenter(moved, orig_pos);
        for (std::size_t t = 0; t < patch.tiles.size(); ++t) {
            CHECK((back.tiles[t].center - patch.tiles[t].center).norm() < 1e-12);
        }
    }

    SUBCASE("trim keeps a disk around the requested tile") {
        const std::size_t v = (patch.origin_index + 11) % patch.tiles.size();
        const Patch sub = trim_patch(patch, v, 8.0);
        CHECK(sub.tiles[sub.origin_index].key == patch.tiles[v].key);
        CHECK(sub.tiles[sub.origin_index].center == Vec2{0.0, 0.0});
        for (const Tile& t : sub.tiles) CHECK(t.center.norm() <= 8.0 + 1e-9);
    }
}
