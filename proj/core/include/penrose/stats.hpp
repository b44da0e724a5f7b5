#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "penrose/walk.hpp"

namespace penrose {

enum class EstimateSource : uint8_t { Generator, Empirical };

/// Diffusion matrix estimate with entrywise 95% half-widths.
struct DiffusionEstimate {
    Mat2Sym D;
    Mat2Sym stderr95;
    EstimateSource source = EstimateSource::Generator;
    std::size_t sample_count = 0;
};

/// One named check: pass iff `statistic` is within `threshold` in the sense
/// of the individual test. Metadata rows keep seeds and intermediate values
/// and serialize to JSON in insertion order.
struct TestReport {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::vector<std::pair<std::string, std::string>> metadata;

    void note(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
    void note(std::string key, double value);
};

/// Environment average of the one-step corrected covariance
/// (1/4) sum_y m m^T with m = (center+chi)(y) - (center+chi)(x), taken over
/// interior vertices at graph distance >= margin from the boundary.
DiffusionEstimate estimate_D_generator(const PenroseGraph& g, const CorrectorField& c, int margin = 10);

/// Sample covariance of the scaled corrected endpoints M_n / sqrt(n) with
/// percentile-bootstrap half-widths (default 1000 resamples, 95%).
DiffusionEstimate estimate_D_empirical(std::span<const Vec2> endpoints, int n,
                                       uint64_t bootstrap_seed = 0x9E3779B9ULL,
                                       int resamples = 1000);

/// |D11 - D22| <= max(0.05 D11, 3 se) and |D12| <= max(0.02 D11, 3 se).
TestReport isotropy_test(const DiffusionEstimate& d);

/// Endpoints standardized by their own covariance; pass iff each component's
/// excess kurtosis is within [-0.2, 0.2] and a 20-bin chi-square fit of the
/// squared radius against Exp(2) has p >= 0.01.
TestReport gaussianity_test(std::span<const Vec2> endpoints);

/// 95th percentile of max_{k<=n} |chi(X_k)| / sqrt(n) per batch; pass iff
/// the percentile at the largest n is <= 0.6x its value at the smallest.
TestReport corrector_influence(std::span<const std::vector<WalkPath>> batches_by_n,
                               const CorrectorField& c, const PenroseGraph& g);

/// Builds each environment, solves the corrector, runs `walks_per_env`
/// walks of n steps and compares the per-environment empirical estimates
/// pairwise: |D_a - D_b| entrywise <= halfwidths_a + halfwidths_b +
/// 0.05 * mean-trace/2.
TestReport quenched_comparison(std::span<const uint64_t> env_seeds, double radius, int n,
                               int walks_per_env, uint64_t master_seed,
                               std::vector<DiffusionEstimate>* per_env = nullptr);

// Small reusable statistics.
double percentile(std::vector<double> values, double p);        // nearest-rank
double excess_kurtosis(std::span<const double> values);
double chi_square_upper_tail(double statistic, int dof);        // regularized Q(dof/2, x/2)
double ks_uniform_statistic(std::vector<double> values);        // vs U[0,1)
Mat2Sym sample_covariance(std::span<const Vec2> samples);

}  // namespace penrose
