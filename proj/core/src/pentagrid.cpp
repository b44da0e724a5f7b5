#include "penrose/pentagrid.hpp"

#include <cmath>

#include "penrose/rng.hpp"

namespace penrose {

namespace {

constexpr double kTau = 1.6180339887498948482;  // (1+sqrt 5)/2

StarVectors make_star_vectors() {
    StarVectors sv;
    for (int k = 0; k < 5; ++k) {
        const double angle = 2.0 * M_PI * k / 5.0;
        sv.e[static_cast<size_t>(k)] = {std::cos(angle), std::sin(angle)};
        sv.eperp[static_cast<size_t>(k)] = sv.e[static_cast<size_t>(k)].perp();
    }
    return sv;
}

// The ten tori: (j-i) mod 5 == 1 puts a thick rhombus at the origin, == 2 a
// thin one. Kunz's measure weights the thick class by tau.
constexpr std::array<std::pair<int, int>, 5> kThickTori = {{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}};
constexpr std::array<std::pair<int, int>, 5> kThinTori = {{{0, 2}, {1, 3}, {2, 4}, {3, 0}, {4, 1}}};

}  // namespace

const StarVectors& star_vectors() {
    static const StarVectors sv = make_star_vectors();
    return sv;
}

GridParams sample_environment(uint64_t seed) {
    Rng rng(seed);
    const double total = 5.0 * kTau + 5.0;
    const double u = rng.uniform01() * total;
    std::pair<int, int> torus;
    if (u < 5.0 * kTau) {
        torus = kThickTori[static_cast<size_t>(std::min(4.0, std::floor(u / kTau)))];
    } else {
        torus = kThinTori[static_cast<size_t>(std::min(4.0, std::floor((u - 5.0 * kTau))))];
    }
    const double gn = rng.uniform01();
    const double gm = rng.uniform01();

    // Complement of {i,j}, ascending; label the free pair (n,m) by the first
    // candidate with (m-n) mod 5 in {1,2}. The joint law of the three
    // dependent offsets is exchangeable, so the labeling is cosmetic.
    std::array<int, 3> rest{};
    int r = 0;
    for (int k = 0; k < 5; ++k) {
        if (k != torus.first && k != torus.second) rest[static_cast<size_t>(r++)] = k;
    }
    const std::array<std::pair<int, int>, 3> candidates = {
        {{rest[1], rest[2]}, {rest[0], rest[2]}, {rest[0], rest[1]}}};
    int n = -1, m = -1, l = -1;
    for (const auto& [a, b] : candidates) {
        const int d = ((b - a) % 5 + 5) % 5;
        if (d == 1 || d == 2) {
            n = a;
            m = b;
            break;
        }
    }
    for (int k : rest) {
        if (k != n && k != m) l = k;
    }

    GridParams params;
    params.seed = seed;
    params.torus = torus;
    params.gamma[static_cast<size_t>(n)] = gn;
    params.gamma[static_cast<size_t>(m)] = gm;
    double gl = 1.0 - gn - gm;
    gl -= std::floor(gl);
    if (gl >= 1.0) gl = 0.0;
    params.gamma[static_cast<size_t>(l)] = gl;
    return params;
}

std::vector<Intersection> intersections_in_disk(const GridParams& params, double radius) {
    std::vector<Intersection> out;
    const bool regular =
        detail::scan_intersections(params, radius, [&](const Intersection& x) { out.push_back(x); });
    if (!regular) {
        throw SingularGridError("pentagrid has a triple intersection within radius " +
                                std::to_string(radius));
    }
    return out;
}

bool regularity_check(const GridParams& params, double radius) {
    return detail::scan_intersections(params, radius, [](const Intersection&) {});
}

}  // namespace penrose
