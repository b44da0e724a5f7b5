#include "penrose/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "penrose/rng.hpp"

namespace penrose {

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

Vec2 sample_mean(std::span<const Vec2> samples) {
    Vec2 m;
    for (const Vec2& s : samples) m += s;
    return samples.empty() ? m : m / static_cast<double>(samples.size());
}

/// Regularized lower incomplete gamma P(a, x) by series / continued
/// fraction (Lentz), the textbook special-function pair.
double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Continued fraction for Q(a, x).
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    const double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

Mat2Sym entrywise_abs(const Mat2Sym& m) { return {std::abs(m.xx), std::abs(m.xy), std::abs(m.yy)}; }

bool entrywise_leq(const Mat2Sym& a, const Mat2Sym& b) {
    return a.xx <= b.xx && a.xy <= b.xy && a.yy <= b.yy;
}

}  // namespace

void TestReport::note(std::string key, double value) { metadata.emplace_back(std::move(key), format_double(value)); }

DiffusionEstimate estimate_D_generator(const PenroseGraph& g, const CorrectorField& c, int margin) {
    Mat2Sym sum, sum_sq;
    std::size_t count = 0;
    for (std::size_t t = 0; t < g.size(); ++t) {
        if (!g.interior[t] || g.dist_boundary[t] < margin) continue;
        const auto v = static_cast<VertexId>(t);
        const Vec2 base = g.centers[t] + c.chi[t];
        Mat2Sym local;
        for (VertexId w : g.neighbors(v)) {
            const Vec2 m = g.centers[static_cast<size_t>(w)] + c.chi[static_cast<size_t>(w)] - base;
            local += Mat2Sym::outer(m);
        }
        local = local * 0.25;
        sum += local;
        sum_sq += {local.xx * local.xx, local.xy * local.xy, local.yy * local.yy};
        ++count;
    }
    DiffusionEstimate est;
    est.source = EstimateSource::Generator;
    est.sample_count = count;
    if (count == 0) return est;
    const double inv = 1.0 / static_cast<double>(count);
    est.D = sum * inv;
    // Entrywise spread of the per-vertex contributions; 1.96 sd / sqrt(N) as
    // a 95% half-width (contributions are treated as exchangeable samples).
    auto half_width = [&](double sq, double mean) {
        const double var = std::max(0.0, sq * inv - mean * mean);
        return 1.96 * std::sqrt(var * inv);
    };
    est.stderr95 = {half_width(sum_sq.xx, est.D.xx), half_width(sum_sq.xy, est.D.xy),
                    half_width(sum_sq.yy, est.D.yy)};
    return est;
}

Mat2Sym sample_covariance(std::span<const Vec2> samples) {
    const std::size_t n = samples.size();
    if (n < 2) return {};
    const Vec2 mean = sample_mean(samples);
    Mat2Sym acc;
    for (const Vec2& s : samples) acc += Mat2Sym::outer(s - mean);
    return acc * (1.0 / static_cast<double>(n - 1));
}

DiffusionEstimate estimate_D_empirical(std::span<const Vec2> endpoints, int n, uint64_t bootstrap_seed,
                                       int resamples) {
    if (endpoints.size() < 1000) {
        throw InsufficientSamplesError("empirical D needs >= 1000 paths, got " +
                                       std::to_string(endpoints.size()));
    }
    DiffusionEstimate est;
    est.source = EstimateSource::Empirical;
    est.sample_count = endpoints.size();
    est.D = sample_covariance(endpoints);
    (void)n;

    std::vector<double> xx(static_cast<size_t>(resamples));
    std::vector<double> xy(static_cast<size_t>(resamples));
    std::vector<double> yy(static_cast<size_t>(resamples));
    std::vector<Vec2> resample(endpoints.size());
    for (int r = 0; r < resamples; ++r) {
        Rng rng = Rng::stream(bootstrap_seed, static_cast<uint64_t>(r));
        for (std::size_t k = 0; k < endpoints.size(); ++k) {
            resample[k] = endpoints[rng.uniform_below(endpoints.size())];
        }
        const Mat2Sym cov = sample_covariance(resample);
        xx[static_cast<size_t>(r)] = cov.xx;
        xy[static_cast<size_t>(r)] = cov.xy;
        yy[static_cast<size_t>(r)] = cov.yy;
    }
    auto spread = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        const auto lo = static_cast<std::size_t>(std::floor(0.025 * (static_cast<double>(v.size()) - 1)));
        const auto hi = static_cast<std::size_t>(std::ceil(0.975 * (static_cast<double>(v.size()) - 1)));
        return 0.5 * (v[hi] - v[lo]);
    };
    est.stderr95 = {spread(xx), spread(xy), spread(yy)};
    return est;
}

TestReport isotropy_test(const DiffusionEstimate& d) {
    TestReport report;
    report.name = "isotropy";
    const double diag_gap = std::abs(d.D.xx - d.D.yy);
    const double se_diag = 3.0 * std::sqrt(d.stderr95.xx * d.stderr95.xx + d.stderr95.yy * d.stderr95.yy);
    const double diag_limit = std::max(0.05 * d.D.xx, se_diag);
    const double off = std::abs(d.D.xy);
    const double off_limit = std::max(0.02 * d.D.xx, 3.0 * d.stderr95.xy);
    report.pass = diag_gap <= diag_limit && off <= off_limit;
    // Report the worse of the two margins as the headline statistic.
    report.statistic = std::max(diag_gap / diag_limit, off / off_limit);
    report.threshold = 1.0;
    report.note("D11", d.D.xx);
    report.note("D22", d.D.yy);
    report.note("D12", d.D.xy);
    report.note("diag_gap", diag_gap);
    report.note("diag_limit", diag_limit);
    report.note("offdiag", off);
    report.note("offdiag_limit", off_limit);
    return report;
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(
        std::min<double>(static_cast<double>(values.size()) - 1,
                         std::max(0.0, std::ceil(p * static_cast<double>(values.size())) - 1)));
    return values[rank];
}

double excess_kurtosis(std::span<const double> values) {
    const auto n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    return m4 / (m2 * m2) - 3.0;
}

double chi_square_upper_tail(double statistic, int dof) {
    return 1.0 - gamma_p(0.5 * dof, 0.5 * statistic);
}

double ks_uniform_statistic(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double f = values[k];
        d = std::max(d, std::abs(f - static_cast<double>(k) / n));
        d = std::max(d, std::abs(static_cast<double>(k + 1) / n - f));
    }
    return d;
}

TestReport gaussianity_test(std::span<const Vec2> endpoints) {
    if (endpoints.size() < 5000) {
        throw InsufficientSamplesError("gaussianity test needs >= 5000 endpoints, got " +
                                       std::to_string(endpoints.size()));
    }
    const Vec2 mean = sample_mean(endpoints);
    const Mat2Sym cov = sample_covariance(endpoints);
    // Cholesky factor of cov: standardize u = L^{-1} (e - mean).
    const double l11 = std::sqrt(cov.xx);
    const double l21 = cov.xy / l11;
    const double l22 = std::sqrt(std::max(1e-300, cov.yy - l21 * l21));

    std::vector<double> ux(endpoints.size()), uy(endpoints.size()), r2(endpoints.size());
    for (std::size_t k = 0; k < endpoints.size(); ++k) {
        const Vec2 d = endpoints[k] - mean;
        const double a = d.x / l11;
        const double b = (d.y - l21 * a) / l22;
        ux[k] = a;
        uy[k] = b;
        r2[k] = a * a + b * b;
    }
    const double kx = excess_kurtosis(ux);
    const double ky = excess_kurtosis(uy);

    // Squared radius of a standard 2d Gaussian is Exp(mean 2); 20
    // equiprobable bins, dof reduced for the 5 moments estimated from the
    // same sample (calibrated against the synthetic Gaussian null).
    constexpr int kBins = 20;
    std::array<int64_t, kBins> counts{};
    for (double v : r2) {
        const double u = 1.0 - std::exp(-0.5 * v);  // CDF value in [0,1)
        auto bin = static_cast<int>(u * kBins);
        bin = std::clamp(bin, 0, kBins - 1);
        ++counts[static_cast<size_t>(bin)];
    }
    const double expected = static_cast<double>(endpoints.size()) / kBins;
    double chi2 = 0.0;
    for (int64_t c : counts) {
        const double d = static_cast<double>(c) - expected;
        chi2 += d * d / expected;
    }
    const int dof = kBins - 1 - 3;
    const double p = chi_square_upper_tail(chi2, dof);

    TestReport report;
    report.name = "gaussianity";
    const bool kurt_ok = std::abs(kx) <= 0.2 && std::abs(ky) <= 0.2;
    report.pass = kurt_ok && p >= 0.01;
    report.statistic = p;
    report.threshold = 0.01;
    report.note("kurtosis_x", kx);
    report.note("kurtosis_y", ky);
    report.note("kurtosis_limit", 0.2);
    report.note("chi2", chi2);
    report.note("dof", static_cast<double>(dof));
    report.note("p_value", p);
    report.note("samples", static_cast<double>(endpoints.size()));
    return report;
}

TestReport corrector_influence(std::span<const std::vector<WalkPath>> batches_by_n,
                               const CorrectorField& c, const PenroseGraph& g) {
    if (c.chi.size() != g.size()) {
        throw OutOfRangeError("corrector field does not cover the graph");
    }
    TestReport report;
    report.name = "corrector_influence";
    std::vector<std::pair<int, double>> ladder;
    for (const auto& batch : batches_by_n) {
        if (batch.empty()) continue;
        const int n = batch.front().steps();
        const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(std::max(1, n)));
        std::vector<double> stats;
        stats.reserve(batch.size());
        for (const WalkPath& w : batch) {
            double peak = 0.0;
            for (VertexId v : w.vertices) peak = std::max(peak, c.chi[static_cast<size_t>(v)].norm());
            stats.push_back(peak * inv_sqrt_n);
        }
        ladder.emplace_back(n, percentile(std::move(stats), 0.95));
    }
    std::sort(ladder.begin(), ladder.end());
    for (const auto& [n, pct] : ladder) report.note("p95_n" + std::to_string(n), pct);
    if (ladder.size() < 2) {
        report.pass = !ladder.empty() && ladder.front().second == 0.0;
        report.statistic = ladder.empty() ? 0.0 : ladder.front().second;
        report.threshold = 0.0;
        return report;
    }
    const double first = ladder.front().second;
    const double last = ladder.back().second;
    report.statistic = first > 0.0 ? last / first : 0.0;
    report.threshold = 0.6;
    report.pass = report.statistic <= report.threshold;
    return report;
}

TestReport quenched_comparison(std::span<const uint64_t> env_seeds, double radius, int n,
                               int walks_per_env, uint64_t master_seed,
                               std::vector<DiffusionEstimate>* per_env) {
    if (env_seeds.size() < 5) {
        throw InsufficientSamplesError("quenched comparison needs >= 5 environments, got " +
                                       std::to_string(env_seeds.size()));
    }
    TestReport report;
    report.name = "quenched_universality";
    std::vector<DiffusionEstimate> estimates;
    estimates.reserve(env_seeds.size());
    for (std::size_t e = 0; e < env_seeds.size(); ++e) {
        const GridParams params = sample_environment(env_seeds[e]);
        const Patch patch = build_patch(params, radius);
        const PenroseGraph g = build_graph(patch);
        const CorrectorField c = solve_harmonic(g);
        // Walk and bootstrap streams are keyed by the environment seed, so
        // repeating an environment repeats its estimate exactly.
        const std::vector<WalkPath> walks = simulate_batch(
            g, n, walks_per_env, Rng::mix(master_seed ^ env_seeds[e]), nullptr, c.boundary_margin);
        std::vector<Vec2> endpoints;
        endpoints.reserve(walks.size());
        for (const WalkPath& w : walks) endpoints.push_back(scaled_endpoint(w, c, g));
        estimates.push_back(
            estimate_D_empirical(endpoints, n, Rng::mix(master_seed ^ env_seeds[e] ^ 0xB00757A9D5ULL)));
        report.note("env" + std::to_string(e) + "_seed", std::to_string(env_seeds[e]));
        report.note("env" + std::to_string(e) + "_D11", estimates.back().D.xx);
        report.note("env" + std::to_string(e) + "_D22", estimates.back().D.yy);
        report.note("env" + std::to_string(e) + "_D12", estimates.back().D.xy);
    }

    double worst = 0.0;
    bool pass = true;
    for (std::size_t a = 0; a < estimates.size(); ++a) {
        for (std::size_t b = a + 1; b < estimates.size(); ++b) {
            const Mat2Sym gap = entrywise_abs(estimates[a].D - estimates[b].D);
            const double slack = 0.05 * 0.25 * (estimates[a].D.trace() + estimates[b].D.trace());
            const Mat2Sym limit = estimates[a].stderr95 + estimates[b].stderr95 + Mat2Sym{slack, slack, slack};
            pass = pass && entrywise_leq(gap, limit);
            worst = std::max({worst, gap.xx / limit.xx, gap.xy / limit.xy, gap.yy / limit.yy});
        }
    }
    report.pass = pass;
    report.statistic = worst;
    report.threshold = 1.0;
    if (per_env) *per_env = std::move(estimates);
    return report;
}

}  // namespace penrose
