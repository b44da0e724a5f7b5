#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "penrose/errors.hpp"
#include "penrose/vec2.hpp"

namespace penrose {

/// Two distinct intersections closer than this are treated as one triple
/// point and the grid is rejected as singular. Double precision keeps line
/// residuals far below this for every radius used here.
inline constexpr double kPointTolerance = 1e-9;

/// The five grid directions e[k] = (cos 2kpi/5, sin 2kpi/5) and their
/// quarter-turn companions eperp[k]. Lines of family k run along e[k] and
/// have normal eperp[k].
struct StarVectors {
    std::array<Vec2, 5> e;
    std::array<Vec2, 5> eperp;
};

const StarVectors& star_vectors();

/// One sampled pentagrid environment: offsets gamma[k] in [0,1) with
/// integer sum, the torus of the ten-tori parametrization it was drawn
/// from, and the seed that produced it.
struct GridParams {
    std::array<double, 5> gamma{};
    std::pair<int, int> torus{0, 0};  // ordered (i,j), (j-i) mod 5 in {1,2}
    uint64_t seed = 0;

    bool operator==(const GridParams&) const = default;
};

/// Line index `index` of family `family`: { z : z.eperp[family] = gamma[family] + index }.
struct GridLine {
    int family = 0;
    int index = 0;
    bool operator==(const GridLine&) const = default;
};

/// Crossing of two grid lines from distinct families, a.family < b.family.
struct Intersection {
    GridLine a;
    GridLine b;
    Vec2 point;
};

/// Draws an environment from the invariant measure on the ten tori: a torus
/// is selected with weight tau = (1+sqrt 5)/2 when its origin tile is thick
/// ((j-i) mod 5 == 1) and weight 1 when thin, then the two free offsets are
/// uniform on [0,1)^2 and the remaining one is fixed by the integer-sum
/// constraint. Deterministic in `seed`.
GridParams sample_environment(uint64_t seed);

/// All intersections of two pentagrid lines within `radius` of the origin,
/// each exactly once. Throws SingularGridError when a third line passes
/// within kPointTolerance of any of them.
std::vector<Intersection> intersections_in_disk(const GridParams& params, double radius);

/// True iff no point of the disk lies on three or more grid lines within
/// kPointTolerance.
bool regularity_check(const GridParams& params, double radius);

namespace detail {

/// Streaming intersection scan shared by intersections_in_disk and patch
/// construction; avoids materializing the (large) intersection list.
/// Returns false as soon as a singular point is found.
template <class Emit>
bool scan_intersections(const GridParams& params, double radius, Emit&& emit) {
    const StarVectors& sv = star_vectors();
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
            const Vec2 ni = sv.eperp[static_cast<size_t>(i)];
            const Vec2 nj = sv.eperp[static_cast<size_t>(j)];
            const double det = ni.cross(nj);
            // Columns of the inverse of [ni; nj]: point = c_i*U + c_j*W.
            const Vec2 U = Vec2{nj.y, -nj.x} / det;
            const Vec2 W = Vec2{-ni.y, ni.x} / det;
            const double gi = params.gamma[static_cast<size_t>(i)];
            const double gj = params.gamma[static_cast<size_t>(j)];
            const int pmin = static_cast<int>(std::ceil(-radius - gi));
            const int pmax = static_cast<int>(std::floor(radius - gi));
            for (int p = pmin; p <= pmax; ++p) {
                const Vec2 A = U * (gi + p);
                // |A + s W|^2 <= r^2 as a quadratic in s = gj + q.
                const double a = W.norm2();
                const double b = 2.0 * A.dot(W);
                const double c = A.norm2() - radius * radius;
                const double disc = b * b - 4.0 * a * c;
                if (disc < 0.0) continue;
                const double sq = std::sqrt(disc);
                const double slo = (-b - sq) / (2.0 * a);
                const double shi = (-b + sq) / (2.0 * a);
                const int qmin = static_cast<int>(std::ceil(slo - gj));
                const int qmax = static_cast<int>(std::floor(shi - gj));
                for (int q = qmin; q <= qmax; ++q) {
                    const Vec2 x = A + W * (gj + q);
                    if (x.norm2() > radius * radius) continue;
                    // Regularity: no third family's line through x.
                    bool singular = false;
                    for (int k = 0; k < 5 && !singular; ++k) {
                        if (k == i || k == j) continue;
                        const double v = x.dot(sv.eperp[static_cast<size_t>(k)]) -
                                         params.gamma[static_cast<size_t>(k)];
                        if (std::abs(v - std::round(v)) < kPointTolerance) singular = true;
                    }
                    if (singular) return false;
                    emit(Intersection{GridLine{i, p}, GridLine{j, q}, x});
                }
            }
        }
    }
    return true;
}

}  // namespace detail

}  // namespace penrose
