#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "penrose/stats.hpp"

namespace penrose::cli {

/// Effective parameters of one `verify` run. Presets fill the numeric
/// fields; explicit flags override them; the whole struct round-trips
/// through JSON losslessly.
struct VerifyConfig {
    std::string preset = "quick";
    uint64_t env_seed = 7;
    uint64_t walk_seed = 20250800;
    double radius = 0.0;
    int n = 0;
    int walks = 0;
    std::vector<double> eps_ladder;
    std::vector<int> ns_ladder;
    int ribbon_k_lo = 0;  // 0 disables the ribbon decay check
    int ribbon_k_hi = 0;
    std::vector<int> influence_ladder;
    int influence_walks = 0;
    std::vector<uint64_t> quenched_seeds;
    double quenched_radius = 0.0;
    int quenched_n = 0;
    int quenched_walks = 0;
    bool debug_zero_chi = false;
    int threads = 0;

    static VerifyConfig preset_config(const std::string& preset);
    std::string to_json() const;
    static VerifyConfig from_json(const std::string& text);
};

struct VerifyResult {
    std::vector<TestReport> reports;
    bool all_passed = false;
};

/// generate -> graph -> corrector -> walks -> stats, emitting one report
/// per check. Throws SingularGridError / NoConvergenceError upward.
VerifyResult run_verify(const VerifyConfig& config);

/// Environment sampling with singular-grid retries: tries seed, seed+1, ...
/// up to `attempts`, requiring regularity on radius+3. Returns the accepted
/// params; throws SingularGridError if all attempts are singular.
GridParams sample_regular_environment(uint64_t seed, double radius, int attempts = 10);

}  // namespace penrose::cli
