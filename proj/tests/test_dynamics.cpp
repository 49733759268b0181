#include <cmath>
#include <random>
#include <vector>

#include "hb/dynamics.hpp"
#include "hb/numerics.hpp"
#include "support.hpp"

using namespace hb;
using hb::test::mild_ellipse_spec;
using hb::test::throws_code;

namespace {

// Width of the table in direction e: max <gamma, e> - min <gamma, e>.
double width(const TableCurve& t, const Vec2& e) {
    auto extreme = [&](double sign) {
        double best = -1e300, arg = 0.0;
        for (int j = 0; j < 1024; ++j) {
            const double v = sign * t.position(j / 1024.0).dot(e);
            if (v > best) best = v, arg = j / 1024.0;
        }
        return sign * maximize_on([&](double q) { return sign * t.position(q).dot(e); }, arg - 1e-3, arg + 1e-3).second;
    };
    return extreme(1.0) - extreme(-1.0);
}

std::vector<double> random_tuple(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> qs(n);
    for (int i = 0; i < n; ++i) qs[i] = (i + 0.2 + 0.6 * u(rng)) / n;
    return qs;
}

}  // namespace

TEST_CASE("orbit functional") {
    const TableCurve disc = disc_table();
    CHECK(std::abs(orbit_functional(disc, {0.0, 0.5}) - 2.0 / kPi) < 1e-14);
    CHECK(std::abs(orbit_functional(disc, {0.0, 1.0 / 3, 2.0 / 3}) - 3.0 * std::sqrt(3.0) / (2.0 * kPi)) < 1e-14);

    const TableCurve t = build_fourier_table(mild_ellipse_spec());
    const std::vector<double> qs{0.1, 0.35, 0.62, 0.8};
    CHECK(orbit_functional(t, qs) == orbit_functional(t, {0.35, 0.62, 0.8, 0.1}));
    CHECK(std::abs(orbit_functional(t, qs) - orbit_functional(t, {0.8, 0.62, 0.35, 0.1})) < 1e-15);
    const TableCurve moved = t.rotated(0.7, {0.1, 0.2}).translated({-0.3, 0.05});
    CHECK(std::abs(orbit_functional(t, qs) - orbit_functional(moved, qs)) < 1e-14);

    CHECK(throws_code([&] { orbit_functional(t, {0.2, 1.2}); }, ErrorCode::DiagonalPoint));
    CHECK(throws_code([&] { orbit_gradient(t, {0.2, 0.4, 0.4}); }, ErrorCode::DiagonalPoint));
}

TEST_CASE("orbit gradient and Hessian") {
    const TableCurve disc = disc_table();
    for (double g : orbit_gradient(disc, {0.0, 0.5})) CHECK(std::abs(g) < 1e-14);
    for (double g : orbit_gradient(disc, {0.0, 1.0 / 3, 2.0 / 3})) CHECK(std::abs(g) < 1e-14);

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 6; ++trial) {
        const TableCurve t = build_fourier_table(hb::test::random_spec(rng));
        const int n = 2 + trial % 3;
        const std::vector<double> qs = random_tuple(rng, n);
        const std::vector<double> g = orbit_gradient(t, qs);
        const std::vector<double> h = orbit_hessian(t, qs);
        for (int i = 0; i < n; ++i) {
            std::vector<double> plus(qs), minus(qs);
            plus[i] += 1e-6;
            minus[i] -= 1e-6;
            CHECK(std::abs((orbit_functional(t, plus) - orbit_functional(t, minus)) / 2e-6 - g[i]) < 1e-6);
            const auto gp = orbit_gradient(t, plus), gm = orbit_gradient(t, minus);
            for (int j = 0; j < n; ++j) CHECK(std::abs((gp[j] - gm[j]) / 2e-6 - h[j * n + i]) < 1e-5);
        }
    }
}

TEST_CASE("periodic orbits of the disc") {
    const TableCurve disc = disc_table();
    const auto two = find_periodic_orbits(disc, 2);
    REQUIRE(two.size() == 1);
    CHECK(two[0].degenerate_family);
    CHECK(two[0].accepted);
    CHECK(std::abs(two[0].action - 2.0 / kPi) < 1e-9);

    const auto three = find_periodic_orbits(disc, 3);
    REQUIRE(three.size() == 1);
    CHECK(three[0].degenerate_family);
    CHECK(std::abs(three[0].action - 3.0 * std::sqrt(3.0) / (2.0 * kPi)) < 1e-9);
}

TEST_CASE("periodic orbits of the mild ellipse") {
    const TableCurve t = build_fourier_table(mild_ellipse_spec());
    const auto two = find_periodic_orbits(t, 2);
    REQUIRE(two.size() == 2);
    const double minor = 2.0 * width(t, {0.0, 1.0}), major = 2.0 * width(t, {1.0, 0.0});
    CHECK(minor < major);
    CHECK(std::abs(two[0].action - minor) < 1e-9);
    CHECK(std::abs(two[1].action - major) < 1e-9);
    for (const auto& o : two) {
        CHECK(!o.degenerate_family);
        CHECK(o.residual < kOrbitResidualTol);
        CHECK(o.fixed_point_error < kFixedPointTol);
    }

    // the torus search and the phase-space Newton oracle find the same orbits
    for (int n : {2, 3}) {
        const auto torus = find_periodic_orbits(t, n);
        const auto phase = fixed_point_orbits(t, n);
        REQUIRE(!phase.empty());
        for (const auto& p : phase) {
            CHECK(p.residual < 1e-8);
            double best = 1.0;
            for (const auto& o : torus) best = std::min(best, orbit_class_distance(p, o));
            CHECK(best < 1e-8);
        }
        for (const auto& o : torus) {
            double best = 1.0;
            for (const auto& p : phase) best = std::min(best, orbit_class_distance(p, o));
            CHECK(best < 1e-8);
        }
    }
}

TEST_CASE("functional gap") {
    const TableCurve disc = disc_table();
    CHECK(functional_gap(disc, disc, 2).gap == 0.0);
    const FunctionalGap moved = functional_gap(disc, disc.translated({0.02, -0.01}), 3, 32);
    CHECK(moved.gap < 1e-12);
    CHECK(std::abs(moved.c0 - std::hypot(0.02, 0.01)) < 1e-12);

    const TableCurve e = build_fourier_table(mild_ellipse_spec());
    const FunctionalGap g = functional_gap(disc, e, 2);
    CHECK(g.gap > 0.0);
    CHECK(g.gap <= 4.0 * g.c0);
    CHECK(g.argmax.size() == 2);
    CHECK(std::abs(std::abs(orbit_functional(disc, g.argmax) - orbit_functional(e, g.argmax)) - g.gap) < 1e-14);
    CHECK(throws_code([&] { functional_gap(disc, e, 2, 4097); }, ErrorCode::ResolutionTooLarge));
}

TEST_CASE("almost periodicity experiment") {
    const TableCurve disc = disc_table();
    // a diameter off the symmetry axes of the ellipses below
    const PeriodicOrbitCandidate orbit = classify_orbit(disc, {0.125, 0.625});
    REQUIRE(orbit.accepted);
    const auto same = almost_periodicity_experiment(disc, disc, orbit, 2, 0.05, 100, 1, false);
    CHECK(same.min_distance == 0.0);
    const auto moved = almost_periodicity_experiment(disc, disc.translated({0.1, 0.2}), orbit, 2, 0.05, 100, 1);
    CHECK(moved.min_distance < 1e-9);
    CHECK(!moved.d_b_upper);

    double prev_min = std::numeric_limits<double>::infinity(), prev_center = prev_min;
    for (double c : {0.04, 0.02, 0.01, 0.005}) {
        const auto rep =
            almost_periodicity_experiment(disc, build_fourier_table(mild_ellipse_spec(c)), orbit, 2, 0.05, 200, 3);
        CHECK(rep.min_distance <= prev_min);
        CHECK(rep.center_displacement < prev_center);
        REQUIRE(rep.d_b_upper);
        prev_min = rep.min_distance;
        prev_center = rep.center_displacement;
    }
}

TEST_CASE("table reconstruction from chords") {
    const TableCurve disc = disc_table();
    const Reconstruction r = reconstruct_table(chord_data(disc));
    const Reconstruction a = align_to(r, disc);
    const Vec2 center = disc.centroid();
    for (const Vec2& p : a.points) CHECK(std::abs((p - center).norm() - 1.0 / kTwoPi) < 1e-8);
    CHECK(reconstruction_error(r, disc) < 1e-12);

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 3; ++trial) {
        const TableCurve t = build_fourier_table(hb::test::random_spec(rng));
        CHECK(reconstruction_error(reconstruct_table(chord_data(t)), t) < 1e-6);
    }

    ChordData bad = chord_data(disc);
    bad.from_start[10] += 0.1;
    bool flagged = false;
    try {
        const Reconstruction rb = reconstruct_table(bad);
        const Reconstruction ab = align_to(rb, disc);
        double worst = 0.0;
        std::size_t where = 0;
        for (std::size_t j = 0; j < ab.t.size(); ++j) {
            const double e = (ab.points[j] - disc.position(ab.t[j])).norm();
            if (e > worst) worst = e, where = j;
        }
        flagged = where == 10 && worst > 1e-2;
    } catch (const Error& e) {
        flagged = e.code() == ErrorCode::InconsistentChords && e.index() == 10;
    }
    CHECK(flagged);
    bad.diameter = 0.0;
    CHECK(throws_code([&] { reconstruct_table(bad); }, ErrorCode::InconsistentChords));
}
