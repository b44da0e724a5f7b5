#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "penrose/corrector.hpp"
#include "penrose/io.hpp"
#include "penrose/parallel.hpp"
#include "penrose/rng.hpp"
#include "penrose/stats.hpp"
#include "penrose/walk.hpp"
#include "pipeline.hpp"

namespace fs = std::filesystem;
using namespace penrose;
using nlohmann::json;

namespace {

constexpr int kExitTestFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

void apply_thread_flag(int threads) {
    if (threads > 0) {
        set_thread_count(static_cast<unsigned>(threads));
        return;
    }
    if (const char* env = std::getenv("PENROSE_RW_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) set_thread_count(static_cast<unsigned>(n));
    }
}

std::string out_path(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

int cmd_generate(uint64_t seed, double radius, const std::string& out_dir, bool svg) {
    const std::string reproduce = "penrose generate --seed " + std::to_string(seed) + " --radius " +
                                  std::to_string(radius) + " --out-dir " + out_dir + (svg ? " --svg" : "");
    const GridParams params = cli::sample_regular_environment(seed, radius);
    if (params.seed != seed) {
        std::fprintf(stderr, "note: seed %llu gave a singular pentagrid; resampled to %llu\n",
                     static_cast<unsigned long long>(seed), static_cast<unsigned long long>(params.seed));
    }
    const Patch patch = build_patch(params, radius);
    const PenroseGraph g = build_graph(patch);

    write_file(out_path(out_dir, "patch.json"), patch_to_json(patch));
    write_file(out_path(out_dir, "vertices.csv"), vertex_table_csv(g, patch));
    write_file(out_path(out_dir, "edges.csv"), edge_list_csv(g));
    if (svg) write_file(out_path(out_dir, "patch.svg"), render_svg(patch, ColorBy::Shape));
    json cfg;
    cfg["command"] = "generate";
    cfg["seed"] = seed;
    cfg["radius"] = radius;
    cfg["svg"] = svg;
    write_file(out_path(out_dir, "config.json"), cfg.dump(2) + "\n");

    int64_t thick = 0, thin = 0;
    std::array<int64_t, 10> by_class{};
    for (const Tile& t : patch.tiles) {
        (t.shape == TileShape::Thick ? thick : thin)++;
        by_class[static_cast<size_t>(t.rotation_class - 1)]++;
    }
    std::printf("tiles: %zu  thick: %lld  thin: %lld  ratio: %.6f\n", patch.tiles.size(),
                static_cast<long long>(thick), static_cast<long long>(thin),
                static_cast<double>(thick) / static_cast<double>(thin));
    for (int k = 0; k < 10; ++k) {
        std::printf("class R%d: %lld%s", k + 1, static_cast<long long>(by_class[static_cast<size_t>(k)]),
                    k == 9 ? "\n" : "  ");
    }
    std::printf("reproduce: %s\n", reproduce.c_str());
    return 0;
}

int cmd_render(const std::string& patch_file, const std::string& out_file, const std::string& color_by,
               const std::string& chi_file) {
    const Patch patch = patch_from_json(read_file(patch_file));
    ColorBy mode = ColorBy::Shape;
    if (color_by == "class") mode = ColorBy::Class;
    if (color_by == "chi") mode = ColorBy::Chi;
    CorrectorField chi;
    if (mode == ColorBy::Chi) {
        if (chi_file.empty()) {
            const PenroseGraph g = build_graph(patch);
            chi = solve_harmonic(g);
        } else {
            // CSV: vertex_id,chi_x,chi_y
            const std::string text = read_file(chi_file);
            chi.chi.assign(patch.tiles.size(), Vec2{});
            std::size_t pos = text.find('\n') + 1;
            while (pos < text.size()) {
                std::size_t eol = text.find('\n', pos);
                if (eol == std::string::npos) eol = text.size();
                const std::string line = text.substr(pos, eol - pos);
                unsigned long id = 0;
                double x = 0, y = 0;
                if (std::sscanf(line.c_str(), "%lu,%lf,%lf", &id, &x, &y) == 3 && id < chi.chi.size()) {
                    chi.chi[id] = {x, y};
                }
                pos = eol + 1;
            }
        }
    }
    write_file(out_file, render_svg(patch, mode, mode == ColorBy::Chi ? &chi : nullptr));
    std::printf("reproduce: penrose render --patch %s --out %s --color-by %s%s%s\n", patch_file.c_str(),
                out_file.c_str(), color_by.c_str(), chi_file.empty() ? "" : " --chi ",
                chi_file.c_str());
    return 0;
}

int cmd_corrector(const std::string& patch_file, const std::string& method, double epsilon,
                  const std::string& out_dir, const std::vector<double>& scan,
                  const std::vector<int>& profile_ns, int kmax) {
    const Patch patch = patch_from_json(read_file(patch_file));
    const PenroseGraph g = build_graph(patch);
    const CorrectorField c = method == "resolvent" ? solve_resolvent(g, epsilon) : solve_harmonic(g);
    write_file(out_path(out_dir, "corrector.csv"), corrector_csv(c));
    std::printf("method: %s  residual: %.3e  max|chi|: %.6f\n", method.c_str(), c.residual, [&] {
        double m = 0.0;
        for (const Vec2& v : c.chi) m = std::max(m, v.norm());
        return m;
    }());
    if (!scan.empty()) {
        const std::vector<double> values = resolvent_norm_scan(g, scan);
        std::string csv = "epsilon,eps_mean_psi_sq\n";
        for (std::size_t k = 0; k < scan.size(); ++k) {
            csv += std::to_string(scan[k]) + "," + std::to_string(values[k]) + "\n";
            std::printf("eps=%-10g eps*mean|psi|^2 = %.6e\n", scan[k], values[k]);
        }
        write_file(out_path(out_dir, "resolvent_scan.csv"), csv);
    }
    if (!profile_ns.empty()) {
        const SublinearityProfile prof = sublinearity_profile(c, g, patch, profile_ns, kmax);
        write_file(out_path(out_dir, "profile_max.csv"), profile_max_csv(prof));
        write_file(out_path(out_dir, "profile_ribbon.csv"), profile_ribbon_csv(prof));
    }
    std::printf("reproduce: penrose corrector --patch %s --method %s --out-dir %s\n", patch_file.c_str(),
                method.c_str(), out_dir.c_str());
    return 0;
}

int cmd_walk(const std::string& patch_file, int n, int walks, uint64_t seed, const std::string& out_dir,
             int paths_to_write) {
    const Patch patch = patch_from_json(read_file(patch_file));
    const PenroseGraph g = build_graph(patch);
    BatchSummary summary;
    const std::vector<WalkPath> batch = simulate_batch(g, n, walks, seed, &summary);
    write_file(out_path(out_dir, "batch.json"), batch_summary_json(summary) + "\n");
    for (int k = 0; k < paths_to_write && k < static_cast<int>(batch.size()); ++k) {
        write_file(out_path(out_dir, "path_" + std::to_string(k) + ".csv"),
                   walk_csv(batch[static_cast<size_t>(k)], g));
    }
    std::printf("walks: %d completed, %d aborted\n", summary.completed, summary.aborted);
    std::printf("reproduce: penrose walk --patch %s --n %d --walks %d --seed %llu --out-dir %s\n",
                patch_file.c_str(), n, walks, static_cast<unsigned long long>(seed), out_dir.c_str());
    return 0;
}

int cmd_estimate_d(const std::string& patch_file, int n, int walks, uint64_t seed,
                   const std::string& out_dir) {
    const std::string reproduce = "penrose estimate-d --patch " + patch_file + " --n " +
                                  std::to_string(n) + " --walks " + std::to_string(walks) + " --seed " +
                                  std::to_string(seed) + " --out-dir " + out_dir;
    const Patch patch = patch_from_json(read_file(patch_file));
    const PenroseGraph g = build_graph(patch);
    const CorrectorField c = solve_harmonic(g);
    const DiffusionEstimate gen = estimate_D_generator(g, c, c.boundary_margin);
    const std::vector<WalkPath> batch = simulate_batch(g, n, walks, seed, nullptr, c.boundary_margin);
    std::vector<Vec2> endpoints;
    endpoints.reserve(batch.size());
    for (const WalkPath& w : batch) endpoints.push_back(scaled_endpoint(w, c, g));
    const DiffusionEstimate emp = estimate_D_empirical(endpoints, n, Rng::mix(seed ^ 0xB005ULL));

    std::vector<TestReport> reports;
    TestReport gen_report;
    gen_report.name = "generator_estimate";
    gen_report.statistic = gen.D.eigenvalues().lo;
    gen_report.threshold = 0.0;
    gen_report.pass = gen_report.statistic > 0.0;
    gen_report.note("D11", gen.D.xx);
    gen_report.note("D12", gen.D.xy);
    gen_report.note("D22", gen.D.yy);
    gen_report.note("vertices", static_cast<double>(gen.sample_count));
    reports.push_back(gen_report);

    TestReport emp_report;
    emp_report.name = "empirical_estimate";
    emp_report.statistic = emp.D.eigenvalues().lo;
    emp_report.threshold = 0.0;
    emp_report.pass = emp_report.statistic > 0.0;
    emp_report.note("D11", emp.D.xx);
    emp_report.note("D12", emp.D.xy);
    emp_report.note("D22", emp.D.yy);
    emp_report.note("hw11", emp.stderr95.xx);
    emp_report.note("hw12", emp.stderr95.xy);
    emp_report.note("hw22", emp.stderr95.yy);
    emp_report.note("walks", static_cast<double>(endpoints.size()));
    reports.push_back(emp_report);
    reports.push_back(isotropy_test(gen));

    const std::string bundle = reports_to_json(reports, "estimate-d", reproduce);
    write_file(out_path(out_dir, "estimate_d.json"), bundle);
    std::fputs(bundle.c_str(), stdout);
    std::printf("reproduce: %s\n", reproduce.c_str());
    bool ok = true;
    for (const TestReport& r : reports) ok = ok && r.pass;
    return ok ? 0 : kExitTestFailure;
}

int cmd_verify(cli::VerifyConfig config, const std::string& out_dir, bool emit_json) {
    const std::string reproduce = "penrose verify --preset " + config.preset + " --seed " +
                                  std::to_string(config.env_seed) + " --walk-seed " +
                                  std::to_string(config.walk_seed) + " --out-dir " + out_dir +
                                  (emit_json ? " --json" : "") +
                                  (config.debug_zero_chi ? " --debug-zero-chi" : "");
    apply_thread_flag(config.threads);
    const cli::VerifyResult result = cli::run_verify(config);
    for (const TestReport& r : result.reports) {
        std::printf("[%s] %-24s statistic=%.6g threshold=%.6g\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.statistic, r.threshold);
    }
    write_file(out_path(out_dir, "config.json"), config.to_json());
    const std::string bundle = reports_to_json(result.reports, "verify", reproduce);
    write_file(out_path(out_dir, "verify.json"), bundle);
    if (emit_json) std::fputs(bundle.c_str(), stdout);
    std::printf("reproduce: %s\n", reproduce.c_str());
    return result.all_passed ? 0 : kExitTestFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Penrose tiling random-walk laboratory"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: hardware, env PENROSE_RW_THREADS)");

    // generate
    auto* generate = app.add_subcommand("generate", "sample an environment and build a patch");
    uint64_t gen_seed = 42;
    double gen_radius = 50.0;
    std::string gen_out = "out";
    bool gen_svg = false;
    std::string gen_config;
    generate->add_option("--seed", gen_seed, "environment seed");
    auto* gen_radius_opt = generate->add_option("--radius", gen_radius, "patch radius");
    generate->add_option("--out-dir", gen_out, "output directory");
    generate->add_flag("--svg", gen_svg, "also render patch.svg");
    generate->add_option("--config", gen_config, "JSON config file (flags override)");

    // render
    auto* render = app.add_subcommand("render", "render a patch to SVG");
    std::string render_patch, render_out = "patch.svg", render_color = "shape", render_chi;
    render->add_option("--patch", render_patch, "patch JSON file")->required();
    render->add_option("--out", render_out, "output SVG file");
    render->add_option("--color-by", render_color, "shape|class|chi")
        ->check(CLI::IsMember({"shape", "class", "chi"}));
    render->add_option("--chi", render_chi, "corrector CSV for --color-by chi");

    // corrector
    auto* corrector = app.add_subcommand("corrector", "solve the corrector on a patch");
    std::string cor_patch, cor_method = "harmonic", cor_out = "out";
    double cor_eps = 1e-3;
    std::vector<double> cor_scan;
    std::vector<int> cor_profile;
    int cor_kmax = 40;
    corrector->add_option("--patch", cor_patch, "patch JSON file")->required();
    corrector->add_option("--method", cor_method, "harmonic|resolvent")
        ->check(CLI::IsMember({"harmonic", "resolvent"}));
    corrector->add_option("--epsilon", cor_eps, "resolvent epsilon");
    corrector->add_option("--out-dir", cor_out, "output directory");
    corrector->add_option("--scan", cor_scan, "epsilon ladder for the norm scan");
    corrector->add_option("--profile", cor_profile, "BFS radii for the sublinearity profile");
    corrector->add_option("--kmax", cor_kmax, "ribbon profile depth");

    // walk
    auto* walk = app.add_subcommand("walk", "simulate a batch of walks");
    std::string walk_patch, walk_out = "out";
    int walk_n = 1000, walk_count = 1000, walk_paths = 1;
    uint64_t walk_seed = 1;
    walk->add_option("--patch", walk_patch, "patch JSON file")->required();
    walk->add_option("--n", walk_n, "steps per walk")->check(CLI::PositiveNumber);
    walk->add_option("--walks", walk_count, "number of walks")->check(CLI::PositiveNumber);
    walk->add_option("--seed", walk_seed, "master seed");
    walk->add_option("--out-dir", walk_out, "output directory");
    walk->add_option("--paths", walk_paths, "number of path CSVs to write");

    // estimate-d
    auto* estd = app.add_subcommand("estimate-d", "generator and empirical diffusion estimates");
    std::string estd_patch, estd_out = "out";
    int estd_n = 1000, estd_walks = 2000;
    uint64_t estd_seed = 1;
    estd->add_option("--patch", estd_patch, "patch JSON file")->required();
    estd->add_option("--n", estd_n, "steps per walk")->check(CLI::PositiveNumber);
    estd->add_option("--walks", estd_walks, "number of walks")->check(CLI::PositiveNumber);
    estd->add_option("--seed", estd_seed, "master seed");
    estd->add_option("--out-dir", estd_out, "output directory");

    // verify
    auto* verify = app.add_subcommand("verify", "end-to-end pipeline with pass/fail reports");
    std::string verify_preset = "quick", verify_out = "out", verify_config_file;
    uint64_t verify_seed = 7, verify_walk_seed = 20250800;
    double verify_radius = 0.0;
    int verify_n = 0, verify_walks = 0;
    bool verify_json = false, verify_zero_chi = false;
    verify->add_option("--preset", verify_preset, "tiny|quick|full")
        ->check(CLI::IsMember({"tiny", "quick", "full"}));
    auto* vs = verify->add_option("--seed", verify_seed, "environment seed");
    auto* vw = verify->add_option("--walk-seed", verify_walk_seed, "walk master seed");
    auto* vr = verify->add_option("--radius", verify_radius, "patch radius override");
    auto* vn = verify->add_option("--n", verify_n, "walk length override");
    auto* vk = verify->add_option("--walks", verify_walks, "walk count override");
    verify->add_option("--out-dir", verify_out, "output directory");
    verify->add_flag("--json", verify_json, "print the JSON bundle to stdout");
    verify->add_flag("--debug-zero-chi", verify_zero_chi, "fault injection: zero the corrector");
    verify->add_option("--config", verify_config_file, "JSON config file (flags override)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    apply_thread_flag(threads);
    try {
        if (generate->parsed()) {
            if (!gen_config.empty()) {
                const json cfg = json::parse(read_file(gen_config));
                if (generate->count("--seed") == 0 && cfg.contains("seed")) gen_seed = cfg["seed"];
                if (gen_radius_opt->count() == 0 && cfg.contains("radius")) gen_radius = cfg["radius"];
                if (generate->count("--out-dir") == 0 && cfg.contains("out_dir")) gen_out = cfg["out_dir"];
                if (generate->count("--svg") == 0 && cfg.contains("svg")) gen_svg = cfg["svg"];
            }
            if (gen_radius < 2.0) {
                std::fprintf(stderr, "error: --radius must be at least 2 (got %g)\n", gen_radius);
                return kExitUsage;
            }
            return cmd_generate(gen_seed, gen_radius, gen_out, gen_svg);
        }
        if (render->parsed()) return cmd_render(render_patch, render_out, render_color, render_chi);
        if (corrector->parsed())
            return cmd_corrector(cor_patch, cor_method, cor_eps, cor_out, cor_scan, cor_profile, cor_kmax);
        if (walk->parsed()) return cmd_walk(walk_patch, walk_n, walk_count, walk_seed, walk_out, walk_paths);
        if (estd->parsed()) return cmd_estimate_d(estd_patch, estd_n, estd_walks, estd_seed, estd_out);
        if (verify->parsed()) {
            cli::VerifyConfig config;
            if (!verify_config_file.empty()) {
                config = cli::VerifyConfig::from_json(read_file(verify_config_file));
                if (verify->count("--preset") != 0) config = cli::VerifyConfig::preset_config(verify_preset);
            } else {
                config = cli::VerifyConfig::preset_config(verify_preset);
            }
            if (vs->count()) config.env_seed = verify_seed;
            if (vw->count()) config.walk_seed = verify_walk_seed;
            if (vr->count()) config.radius = verify_radius;
            if (vn->count()) config.n = verify_n;
            if (vk->count()) config.walks = verify_walks;
            if (verify_zero_chi) config.debug_zero_chi = true;
            if (threads > 0) config.threads = threads;
            return cmd_verify(config, verify_out, verify_json);
        }
    } catch (const SingularGridError& e) {
        std::fprintf(stderr, "numerical failure (singular grid): %s\n", e.what());
        return kExitNumerical;
    } catch (const NoConvergenceError& e) {
        std::fprintf(stderr, "numerical failure (no convergence): %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return 0;
}
