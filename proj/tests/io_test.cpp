#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "penrose/corrector.hpp"
#include "penrose/io.hpp"
#include "penrose/walk.hpp"

using namespace penrose;

namespace {

GridParams regular_params(uint64_t seed, double radius) {
    for (uint64_t s = seed;; ++s) {
        const GridParams p = sample_environment(s);
        if (regularity_check(p, radius + 3.0)) return p;
    }
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    return n;
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

}  // namespace

TEST_CASE("grid params round-trip through JSON") {
    const GridParams p = sample_environment(0xDEADBEEFCAFEULL);
    const std::string text = grid_params_to_json(p);
    const GridParams q = grid_params_from_json(text);
    CHECK(q.seed == p.seed);
    CHECK(q.torus == p.torus);
    for (int k = 0; k < 5; ++k) {
        CHECK(std::abs(q.gamma[static_cast<size_t>(k)] - p.gamma[static_cast<size_t>(k)]) <= 1e-15);
    }
    // Shortest-round-trip doubles are in fact exact.
    CHECK(q == p);
}

TEST_CASE("patch JSON round-trips and rebuilds derived data") {
    const Patch patch = build_patch(regular_params(42, 18.0), 15.0);
    const std::string text = patch_to_json(patch);
    const Patch loaded = patch_from_json(text);

    CHECK(loaded.tiles.size() == patch.tiles.size());
    CHECK(loaded.radius == patch.radius);
    CHECK(loaded.origin_index == patch.origin_index);
    for (std::size_t t = 0; t < patch.tiles.size(); ++t) {
        CHECK(loaded.tiles[t].key == patch.tiles[t].key);
        CHECK(loaded.tiles[t].base == patch.tiles[t].base);
        CHECK(loaded.tiles[t].shape == patch.tiles[t].shape);
        CHECK(loaded.tiles[t].rotation_class == patch.tiles[t].rotation_class);
        CHECK((loaded.tiles[t].center - patch.tiles[t].center).norm() <= 1e-15);
    }
    // Byte determinism of the serialized form.
    CHECK(patch_to_json(loaded) == text);
}

TEST_CASE("CSV exports") {
    const Patch patch = build_patch(regular_params(42, 18.0), 15.0);
    const PenroseGraph g = build_graph(patch);
    const CorrectorField c = solve_harmonic(g);

    SUBCASE("vertex table has one row per tile") {
        const std::string csv = vertex_table_csv(g, patch);
        CHECK(count_lines(csv) == patch.tiles.size() + 1);
        CHECK(csv.rfind("id,center_x,center_y,shape,rotation_class,interior\n", 0) == 0);
        CHECK(csv.find("thick") != std::string::npos);
        CHECK(csv.find("thin") != std::string::npos);
    }

    SUBCASE("edge list has one row per edge") {
        const std::string csv = edge_list_csv(g);
        CHECK(count_lines(csv) == g.adj.size() / 2 + 1);
        CHECK(csv.rfind("vertex_id_a,vertex_id_b,step_x,step_y\n", 0) == 0);
    }

    SUBCASE("corrector rows cover every vertex and parse back") {
        const std::string csv = corrector_csv(c);
        CHECK(count_lines(csv) == g.size() + 1);
        // First data row is vertex 0.
        const std::size_t eol = csv.find('\n', csv.find('\n') + 1);
        const std::string row = csv.substr(csv.find('\n') + 1, eol - csv.find('\n') - 1);
        unsigned long id = 99;
        double x = 0, y = 0;
        REQUIRE(std::sscanf(row.c_str(), "%lu,%lf,%lf", &id, &x, &y) == 3);
        CHECK(id == 0);
        CHECK(x == c.chi[0].x);
        CHECK(y == c.chi[0].y);
    }

    SUBCASE("profiles and walks") {
        const std::array<int, 2> ns{4, 8};
        const SublinearityProfile prof = sublinearity_profile(c, g, patch, ns, 5);
        CHECK(count_lines(profile_max_csv(prof)) == prof.ns.size() + 1);
        CHECK(count_lines(profile_ribbon_csv(prof)) == prof.ks.size() + 1);
        const WalkPath w = simulate(g, 10, 3, 2, 1.0);
        const std::string csv = walk_csv(w, g);
        CHECK(count_lines(csv) == 12);
        CHECK(csv.rfind("k,vertex_id,x,y\n", 0) == 0);
    }
}

TEST_CASE("batch summary and report bundles serialize deterministically") {
    BatchSummary s;
    s.master_seed = 99;
    s.n = 1000;
    s.requested = 64;
    s.completed = 63;
    s.aborted = 1;
    const auto j = nlohmann::json::parse(batch_summary_json(s));
    CHECK(j.at("master_seed") == 99);
    CHECK(j.at("walks_completed") == 63);
    CHECK(j.at("aborted") == 1);

    TestReport a;
    a.name = "alpha";
    a.statistic = 0.5;
    a.threshold = 1.0;
    a.pass = true;
    a.note("detail", 1.25);
    TestReport b;
    b.name = "beta";
    b.pass = false;
    const std::array<TestReport, 2> reports{a, b};
    const std::string bundle = reports_to_json(reports, "verify", "penrose verify --seed 1");
    CHECK(reports_to_json(reports, "verify", "penrose verify --seed 1") == bundle);
    const auto parsed = nlohmann::json::parse(bundle);
    CHECK(parsed.at("summary").at("passed") == 1);
    CHECK(parsed.at("summary").at("failed") == 1);
    CHECK(parsed.at("reports").at(0).at("name") == "alpha");
    CHECK(parsed.at("reports").at(0).at("verdict") == "pass");
    CHECK(parsed.at("reports").at(1).at("verdict") == "fail");
    CHECK(parsed.at("reproduce") == "penrose verify --seed 1");
}

TEST_CASE("SVG rendering is deterministic with one polygon per tile") {
    const Patch patch = build_patch(regular_params(42, 18.0), 15.0);
    const std::string svg = render_svg(patch, ColorBy::Shape);
    CHECK(count_occurrences(svg, "<polygon") == patch.tiles.size());
    CHECK(svg.find("viewBox") != std::string::npos);
    CHECK(render_svg(patch, ColorBy::Shape) == svg);

    const PenroseGraph g = build_graph(patch);
    const CorrectorField c = solve_harmonic(g);
    const std::string chi_svg = render_svg(patch, ColorBy::Chi, &c);
    CHECK(count_occurrences(chi_svg, "<polygon") == patch.tiles.size());
    CHECK(chi_svg != svg);
    const std::string class_svg = render_svg(patch, ColorBy::Class);
    CHECK(count_occurrences(class_svg, "<polygon") == patch.tiles.size());
}
