#include "penrose/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace penrose {

namespace {

using nlohmann::json;

void append_csv_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace

std::string grid_params_to_json(const GridParams& params) {
    json j;
    j["gamma"] = params.gamma;
    j["torus"] = {params.torus.first, params.torus.second};
    j["seed"] = params.seed;
    return j.dump();
}

GridParams grid_params_from_json(const std::string& text) {
    const json j = json::parse(text);
    GridParams params;
    for (int k = 0; k < 5; ++k) params.gamma[static_cast<size_t>(k)] = j.at("gamma").at(k).get<double>();
    params.torus = {j.at("torus").at(0).get<int>(), j.at("torus").at(1).get<int>()};
    params.seed = j.at("seed").get<uint64_t>();
    return params;
}

std::string patch_to_json(const Patch& patch) {
    json j;
    j["params"] = json::parse(grid_params_to_json(patch.params));
    j["radius"] = patch.radius;
    json tiles = json::array();
    for (const Tile& t : patch.tiles) {
        json entry;
        entry["ij"] = {t.key.i, t.key.j};
        entry["pq"] = {t.key.p, t.key.q};
        entry["K"] = t.base;
        tiles.push_back(std::move(entry));
    }
    j["tiles"] = std::move(tiles);
    return j.dump();
}

Patch patch_from_json(const std::string& text) {
    const json j = json::parse(text);
    Patch patch;
    patch.params = grid_params_from_json(j.at("params").dump());
    patch.radius = j.at("radius").get<double>();
    const StarVectors& sv = star_vectors();
    for (const json& entry : j.at("tiles")) {
        Tile t;
        t.key.i = static_cast<int8_t>(entry.at("ij").at(0).get<int>());
        t.key.j = static_cast<int8_t>(entry.at("ij").at(1).get<int>());
        t.key.p = entry.at("pq").at(0).get<int32_t>();
        t.key.q = entry.at("pq").at(1).get<int32_t>();
        for (int k = 0; k < 5; ++k) t.base[static_cast<size_t>(k)] = entry.at("K").at(k).get<int32_t>();
        const int d = t.key.j - t.key.i;
        t.shape = (d == 1 || d == 4) ? TileShape::Thick : TileShape::Thin;
        t.rotation_class = rotation_class_of(t.key.i, t.key.j);
        Vec2 c;
        for (int k = 0; k < 5; ++k) c += sv.e[static_cast<size_t>(k)] * static_cast<double>(t.base[static_cast<size_t>(k)]);
        t.center = c + (sv.e[static_cast<size_t>(t.key.i)] + sv.e[static_cast<size_t>(t.key.j)]) * 0.5;
        patch.tiles.push_back(t);
    }
    // Recentre exactly as build_patch does: raw center nearest the origin,
    // lexicographic tie-break.
    if (patch.tiles.empty()) throw EmptyPatchError("patch JSON contains no tiles");
    std::size_t best = 0;
    auto before = [](Vec2 a, Vec2 b) {
        if (a.norm2() != b.norm2()) return a.norm2() < b.norm2();
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    };
    for (std::size_t t = 1; t < patch.tiles.size(); ++t) {
        if (before(patch.tiles[t].center, patch.tiles[best].center)) best = t;
    }
    patch.offset = patch.tiles[best].center;
    for (Tile& t : patch.tiles) t.center -= patch.offset;
    std::sort(patch.tiles.begin(), patch.tiles.end(), [](const Tile& a, const Tile& b) { return a.key < b.key; });
    for (std::size_t t = 0; t < patch.tiles.size(); ++t) {
        if (patch.tiles[t].center == Vec2{0.0, 0.0}) {
            patch.origin_index = t;
            break;
        }
    }
    return patch;
}

std::string vertex_table_csv(const PenroseGraph& g, const Patch& patch) {
    std::string out = "id,center_x,center_y,shape,rotation_class,interior\n";
    for (std::size_t t = 0; t < g.size(); ++t) {
        out += std::to_string(t);
        out += ',';
        append_csv_double(out, g.centers[t].x);
        out += ',';
        append_csv_double(out, g.centers[t].y);
        out += ',';
        out += patch.tiles[t].shape == TileShape::Thick ? "thick" : "thin";
        out += ',';
        out += std::to_string(static_cast<int>(patch.tiles[t].rotation_class));
        out += ',';
        out += g.interior[t] ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string edge_list_csv(const PenroseGraph& g) {
    std::string out = "vertex_id_a,vertex_id_b,step_x,step_y\n";
    for (std::size_t t = 0; t < g.size(); ++t) {
        const auto v = static_cast<VertexId>(t);
        for (VertexId w : g.neighbors(v)) {
            if (w <= v) continue;
            const Vec2 s = g.step(v, w);
            out += std::to_string(v);
            out += ',';
            out += std::to_string(w);
            out += ',';
            append_csv_double(out, s.x);
            out += ',';
            append_csv_double(out, s.y);
            out += '\n';
        }
    }
    return out;
}

std::string corrector_csv(const CorrectorField& c) {
    std::string out = "vertex_id,chi_x,chi_y\n";
    for (std::size_t t = 0; t < c.chi.size(); ++t) {
        out += std::to_string(t);
        out += ',';
        append_csv_double(out, c.chi[t].x);
        out += ',';
        append_csv_double(out, c.chi[t].y);
        out += '\n';
    }
    return out;
}

std::string profile_max_csv(const SublinearityProfile& p) {
    std::string out = "n,max_ratio\n";
    for (std::size_t k = 0; k < p.ns.size(); ++k) {
        out += std::to_string(p.ns[k]);
        out += ',';
        append_csv_double(out, p.max_ratio[k]);
        out += '\n';
    }
    return out;
}

std::string profile_ribbon_csv(const SublinearityProfile& p) {
    std::string out = "k,ribbon_ratio_a,ribbon_ratio_b\n";
    for (std::size_t k = 0; k < p.ks.size(); ++k) {
        out += std::to_string(p.ks[k]);
        out += ',';
        append_csv_double(out, p.ribbon_ratio_a[k]);
        out += ',';
        append_csv_double(out, p.ribbon_ratio_b[k]);
        out += '\n';
    }
    return out;
}

std::string walk_csv(const WalkPath& w, const PenroseGraph& g) {
    std::string out = "k,vertex_id,x,y\n";
    for (std::size_t k = 0; k < w.vertices.size(); ++k) {
        const Vec2 c = g.centers[static_cast<size_t>(w.vertices[k])];
        out += std::to_string(k);
        out += ',';
        out += std::to_string(w.vertices[k]);
        out += ',';
        append_csv_double(out, c.x);
        out += ',';
        append_csv_double(out, c.y);
        out += '\n';
    }
    return out;
}

std::string batch_summary_json(const BatchSummary& summary) {
    json j;
    j["master_seed"] = summary.master_seed;
    j["n"] = summary.n;
    j["walks_requested"] = summary.requested;
    j["walks_completed"] = summary.completed;
    j["aborted"] = summary.aborted;
    return j.dump();
}

std::string reports_to_json(std::span<const TestReport> reports, const std::string& command,
                            const std::string& reproduce) {
    json j;
    j["command"] = command;
    j["reproduce"] = reproduce;
    json list = json::array();
    int passed = 0;
    for (const TestReport& r : reports) {
        json entry;
        entry["name"] = r.name;
        entry["statistic"] = r.statistic;
        entry["threshold"] = r.threshold;
        entry["verdict"] = r.pass ? "pass" : "fail";
        json meta = json::object();
        for (const auto& [k, v] : r.metadata) meta[k] = v;
        entry["metadata"] = std::move(meta);
        list.push_back(std::move(entry));
        if (r.pass) ++passed;
    }
    j["reports"] = std::move(list);
    j["summary"] = {{"passed", passed}, {"failed", static_cast<int>(reports.size()) - passed}};
    return j.dump(2) + "\n";
}

namespace {

const char* kClassPalette[10] = {"#e6712b", "#2b7de6", "#37a862", "#c2b02e", "#8a52c9",
                                 "#d98f3a", "#55b7c4", "#c94f79", "#7d8f2a", "#4a5fa5"};

std::string ramp_color(double t) {
    // Blue (low) to red (high) through white.
    t = std::clamp(t, 0.0, 1.0);
    const auto lerp = [](double a, double b, double u) { return a + (b - a) * u; };
    double r, g, b;
    if (t < 0.5) {
        const double u = t * 2.0;
        r = lerp(43, 245, u);
        g = lerp(96, 245, u);
        b = lerp(214, 245, u);
    } else {
        const double u = (t - 0.5) * 2.0;
        r = lerp(245, 214, u);
        g = lerp(245, 69, u);
        b = lerp(245, 43, u);
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(r), static_cast<int>(g),
                  static_cast<int>(b));
    return buf;
}

void append_fixed(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    out += buf;
}

}  // namespace

std::string render_svg(const Patch& patch, ColorBy color_by, const CorrectorField* chi) {
    const double r = patch.radius + 1.5;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
    append_fixed(out, -r);
    out += ' ';
    append_fixed(out, -r);
    out += ' ';
    append_fixed(out, 2 * r);
    out += ' ';
    append_fixed(out, 2 * r);
    out += "\">\n<g transform=\"scale(1,-1)\" stroke=\"#333333\" stroke-width=\"0.03\">\n";

    double chi_max = 0.0;
    if (color_by == ColorBy::Chi && chi) {
        for (const Vec2& v : chi->chi) chi_max = std::max(chi_max, v.norm());
        if (chi_max == 0.0) chi_max = 1.0;
    }
    for (std::size_t t = 0; t < patch.tiles.size(); ++t) {
        const Tile& tile = patch.tiles[t];
        std::string fill;
        switch (color_by) {
            case ColorBy::Shape:
                fill = tile.shape == TileShape::Thick ? "#e8b84b" : "#4b7de8";
                break;
            case ColorBy::Class:
                fill = kClassPalette[tile.rotation_class - 1];
                break;
            case ColorBy::Chi:
                fill = ramp_color(chi && t < chi->chi.size() ? chi->chi[t].norm() / chi_max : 0.0);
                break;
        }
        out += "<polygon fill=\"" + fill + "\" points=\"";
        const auto corners = tile_corners(tile, patch);
        for (int k = 0; k < 4; ++k) {
            if (k) out += ' ';
            append_fixed(out, corners[static_cast<size_t>(k)].x);
            out += ',';
            append_fixed(out, corners[static_cast<size_t>(k)].y);
        }
        out += "\"/>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace penrose
