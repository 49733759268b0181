#include <cmath>
#include <random>

#include "doctest.h"
#include "hb/curves.hpp"
#include "hb/numerics.hpp"
#include "support.hpp"

using namespace hb;

namespace {

// Perimeter of the inscribed polygon with n vertices, Richardson-extrapolated
// in n; independent of the arc-length machinery under test.
double polyline_length(const TableCurve& t, int n) {
    auto poly = [&](int m) {
        double sum = 0.0;
        for (int j = 0; j < m; ++j) {
            sum += (t.position(double(j + 1) / m) - t.position(double(j) / m)).norm();
        }
        return sum;
    };
    return (4.0 * poly(2 * n) - poly(n)) / 3.0;
}

}  // namespace

TEST_CASE("disc table conventions") {
    const TableCurve d = disc_table();
    CHECK(d.position(0.0).x() == doctest::Approx(1.0 / kTwoPi).epsilon(1e-15));
    CHECK(std::abs(d.position(0.0).y()) < 1e-15);
    CHECK(d.tangent(0.0).x() == doctest::Approx(0.0));
    CHECK(d.tangent(0.0).y() == doctest::Approx(1.0));
    for (int j = 0; j < 64; ++j) CHECK(d.curvature(j / 64.0) == doctest::Approx(kTwoPi).epsilon(1e-14));
}

TEST_CASE("fourier table: constant support is the disc") {
    const TableCurve f = build_fourier_table({5.0, {}, {}});
    CHECK(c0_distance(f, disc_table()) < 1e-10);
}

TEST_CASE("fourier table: length is normalized to 1") {
    const TableCurve t = build_fourier_table({1.0, {0.0, 0.1}, {}});
    CHECK(std::abs(polyline_length(t, 4096) - 1.0) < 1e-10);
    // quadrature of rho = h + h'' over one turn, before and after rescaling
    FourierSupportSpec raw{1.0, {0.0, 0.1}, {}};
    auto rho_integral = [](const FourierSupportSpec& s) {
        std::vector<double> v(1025);
        for (int j = 0; j <= 1024; ++j) {
            const SupportJet h = evaluate_support(s, kTwoPi * j / 1024);
            v[j] = h.h + h.d2h;
        }
        return simpson(v, 0.0, kTwoPi);
    };
    CHECK(rho_integral(raw) == doctest::Approx(kTwoPi).epsilon(1e-13));
    CHECK(rho_integral(normalize_length(raw)) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("fourier table: negative radius of curvature is rejected") {
    CHECK(test::throws_code([] { build_fourier_table({1.0, {0.0, 0.4}, {}}); },
                            ErrorCode::CurvatureNotPositive));
    CHECK(test::throws_code([] { build_fourier_table({-1.0, {}, {}}); },
                            ErrorCode::CurvatureNotPositive));
}

TEST_CASE("c0_distance examples") {
    const TableCurve d = disc_table();
    const TableCurve e = build_fourier_table(test::mild_ellipse_spec());
    CHECK(c0_distance(e, e) == 0.0);
    CHECK(c0_distance(d, d.translated({0.05, 0.0})) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(c0_distance(d, d.with_mark_shift(0.25)) ==
          doctest::Approx(std::sin(0.25 * kPi) / kPi).epsilon(1e-12));
}

TEST_CASE("table invariants hold on random fourier tables") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const TableCurve t = build_fourier_table(test::random_spec(rng));
        for (int j = 0; j < 1024; ++j) {
            const double q = j / 1024.0;
            const CurveFrame f = t.frame(q);
            CHECK(std::abs(f.tangent.norm() - 1.0) < 1e-8);
            CHECK(f.curvature > 0.0);
            CHECK((t.position(q + 1.0) - f.position).norm() < 1e-10);
        }
        // tangent is the arc-length derivative of position
        for (double q : {0.1, 0.37, 0.8}) {
            const double h = 1e-5;
            const Vec2 fd = (t.position(q + h) - t.position(q - h)) / (2 * h);
            CHECK((fd - t.tangent(q)).norm() < 1e-8);
        }
    }
}

TEST_CASE("arc-length inversion round trip") {
    std::mt19937_64 rng(5);
    const FourierSupportSpec spec = normalize_length(test::random_spec(rng, 0.06));
    const TableCurve t = build_fourier_table(spec);
    for (int j = 0; j < 200; ++j) {
        const double ell = (j + 0.5) / 200.0;
        const Vec2 tan = t.tangent(ell);
        double theta = std::atan2(-tan.x(), tan.y());
        if (theta < 0) theta += kTwoPi;
        CHECK(std::abs(support_arc_length(spec, theta) - ell) < 1e-10);
    }
}

TEST_CASE("first harmonic translates the body") {
    const FourierSupportSpec base{1.0, {0.0, 0.05, 0.01}, {0.0, 0.02}};
    FourierSupportSpec shifted = base;
    shifted.cos[0] = 0.3;
    shifted.sin[0] = -0.2;
    const TableCurve a = build_fourier_table(base);
    const TableCurve b = build_fourier_table(shifted);
    const Vec2 offset = b.centroid() - a.centroid();
    CHECK(offset.norm() > 0.01);
    CHECK(c0_distance(a.translated(offset), b) < 1e-8);
}

TEST_CASE("isometries and mark shifts") {
    const TableCurve e = build_fourier_table(test::mild_ellipse_spec());
    const TableCurve g = e.rotated(0.7, {0.1, -0.2}).translated({0.3, 0.4});
    for (double q : {0.0, 0.2, 0.55}) {
        CHECK((e.frame(q).curvature - g.frame(q).curvature) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(std::abs((e.position(q) - e.position(q + 0.3)).norm() -
                       (g.position(q) - g.position(q + 0.3)).norm()) < 1e-14);
    }
    const TableCurve s = e.with_mark_shift(0.3);
    CHECK((s.position(0.0) - e.position(0.3)).norm() < 1e-15);
    CHECK(!g.support_spec().has_value());
    CHECK(e.support_spec().has_value());
}

TEST_CASE("trigonometric sample interpolation reproduces a smooth table") {
    const TableCurve e = build_fourier_table(test::mild_ellipse_spec(0.08));
    std::vector<Vec2> pts(256);
    for (int j = 0; j < 256; ++j) pts[j] = e.position(j / 256.0);
    const TableCurve r = table_from_samples(pts);
    CHECK(r.representation() == Representation::reconstructed_samples);
    CHECK(r.strictly_convex());
    // samples are arc-length spaced, so the reparametrized interpolant matches pointwise
    CHECK(c0_distance(r, e) < 1e-9);
}
