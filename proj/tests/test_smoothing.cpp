#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hb/billiard.hpp"
#include "hb/smoothing.hpp"
#include "support.hpp"

using namespace hb;
using hb::test::throws_code;

namespace {

PolygonSpec unit_square(double mark = 0.125) {
    return {{{0.0, 0.0}, {0.25, 0.0}, {0.25, 0.25}, {0.0, 0.25}}, mark};
}

PolygonSpec regular_hexagon() {
    std::vector<Vec2> v;
    for (int i = 0; i < 6; ++i) v.push_back({std::cos(kTwoPi * i / 6), std::sin(kTwoPi * i / 6)});
    return scaled_to_unit_perimeter(v, 0.5 / 6.0);
}

double gk(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-12);
}

// Richardson-extrapolated inscribed polygon length of a closed curve.
double polyline_length(const TableCurve& t, int n) {
    auto chords = [&](int m) {
        double sum = 0.0;
        for (int i = 0; i < m; ++i) sum += (t.position((i + 1.0) / m) - t.position(static_cast<double>(i) / m)).norm();
        return sum;
    };
    return (4.0 * chords(2 * n) - chords(n)) / 3.0;
}

}  // namespace

TEST_CASE("corner profile") {
    const CornerProfile f = make_profile(1.0, 0.01);
    CHECK(f(0.02).f == 0.02);
    CHECK(f(-0.03).f == 0.03);
    CHECK(std::abs(f(0.01).f - 0.01) < 1e-12);
    CHECK(std::abs(f(-0.01).f - 0.01) < 1e-12);
    CHECK(f(0.0).f > 0.0);

    const double mass = gk([](double t) { return std::exp(-1.0 / (1.0 - t * t)); }, -1.0, 1.0);
    const double moment = gk([](double t) { return std::abs(t) * std::exp(-1.0 / (1.0 - t * t)); }, -1.0, 1.0) / mass;
    CHECK(std::abs(mollifier_abs_moment() - moment) < 1e-13);
    CHECK(std::abs(f(0.0).f - 0.01 * moment) < 1e-14);

    // f = |.| * rho_w by direct convolution
    for (double x : {-0.007, -0.002, 0.0, 0.0031, 0.0099}) {
        const double direct =
            gk([&](double y) { return std::abs(x - y) * std::exp(-1.0 / (1.0 - y * y / 1e-4)) / (mass * 0.01); },
               -0.01, 0.01);
        CHECK(std::abs(f(x).f - direct) < 1e-13);
    }
    for (int j = -200; j <= 200; ++j) {
        const double x = 0.015 * j / 200.0;
        const auto v = f(x);
        CHECK(v.d2f >= 0.0);
        CHECK(std::abs(v.f - f(-x).f) < 1e-15);
        const double fd = (f(x + 1e-6).f - f(x - 1e-6).f) / 2e-6;
        CHECK(std::abs(fd - v.df) < 1e-8);
    }
    const double graph = gk([&](double x) { return std::hypot(1.0, f(x).df); }, -0.01, 0.01);
    CHECK(std::abs(f.graph_length() - graph) < 1e-14);
    CHECK(f.defect() > 0.0);
    CHECK(std::abs(f.defect() - (0.02 * std::sqrt(2.0) - graph)) < 1e-14);
    for (double arc : {0.0, 0.003, 0.011, f.graph_length()}) {
        CHECK(std::abs(f.graph_length(f.graph_point(arc)) - arc) < 1e-14);
    }

    // a square corner has slope 1
    const auto phi = exterior_angles({{{0.0, 0.0}, {0.25, 0.0}, {0.25, 0.25}, {0.0, 0.25}}, 0.125});
    for (double p : phi) CHECK(std::abs(corner_slope(p) - 1.0) < 1e-15);

    CHECK(throws_code([] { make_profile(1.0, 0.0); }, ErrorCode::InvalidWidth));
    CHECK(throws_code([] { make_profile(0.0, 0.01); }, ErrorCode::InvalidProfile));
}

TEST_CASE("square family construction") {
    const SmoothingFamily fam = family_from_polygon(unit_square(), 0.01);
    CHECK(fam.defects().size() == 4);
    const double L = fam.perimeter();
    CHECK(std::abs(L - 1.0) < 1e-15);

    for (double s : {1.0, 0.5, 0.25, 0.1}) {
        CHECK(std::abs(fam.measured_length(s) - (L - s * fam.defect_sum())) < 1e-9);
    }
    const TableCurve t1 = fam.table(1.0);
    CHECK(std::abs(polyline_length(t1, 1 << 15) - 1.0) < 1e-9);
    CHECK(fam.lambda(0.25) < fam.lambda(0.5));

    // edges coincide with the polygon outside the corners
    const Vec2 o = fam.center();
    CHECK((o - Vec2(0.125, 0.125)).norm() < 1e-15);
    for (double s : {1.0, 0.3}) {
        for (int j = 0; j < 400; ++j) {
            const double t = (j + 0.5) / 400.0;
            if (!fam.on_edge(s, t)) continue;
            const int e = static_cast<int>(std::floor(t / 0.25));
            const Vec2& a = fam.polygon().vertices[e];
            const Vec2& b = fam.polygon().vertices[(e + 1) % 4];
            const Vec2 p = a + (t - 0.25 * e) / 0.25 * (b - a);
            const double q = fam.raw_arc_of(s, t) / fam.length(s);
            CHECK((fam.raw_frame(s, q).position - p).norm() < 1e-12);
            CHECK((fam.frame(s, q).position - (o + (p - o) / fam.length(s))).norm() < 1e-12);
        }
    }
    // mark and continuity
    CHECK((fam.frame(0.7, 0.0).position - (o + (Vec2(0.125, 0.0) - o) / fam.length(0.7))).norm() < 1e-15);
    for (int j = 0; j < 2000; ++j) {
        const double q = j / 2000.0;
        const double gap = (fam.frame(0.5, q + 1e-7).position - fam.frame(0.5, q).position).norm();
        CHECK(gap <= 1e-7 * (1.0 + 1e-6));
    }

    // C0 convergence to the polygon
    const TableCurve poly = fam.table(0.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double s : {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125}) {
        const double d = c0_distance(fam.table(s), poly);
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("family errors") {
    CHECK(throws_code([] { family_from_polygon(unit_square(0.0), 0.01); }, ErrorCode::MarkInCorner));
    CHECK(throws_code([] { family_from_polygon(unit_square(0.251), 0.01); }, ErrorCode::MarkInCorner));
    CHECK(throws_code([] { family_from_polygon(unit_square(), 0.2); }, ErrorCode::InvalidWidth));
    PolygonSpec cw = unit_square();
    std::reverse(cw.vertices.begin(), cw.vertices.end());
    CHECK(throws_code([&] { family_from_polygon(cw, 0.01); }, ErrorCode::InvalidPolygon));
    PolygonSpec big = unit_square();
    for (Vec2& v : big.vertices) v *= 2.0;
    CHECK(throws_code([&] { family_from_polygon(big, 0.01); }, ErrorCode::InvalidPolygon));
    std::vector<CornerProfile> wrong(4, make_profile(0.5, 0.01));
    CHECK(throws_code([&] { family_from_polygon(unit_square(), wrong); }, ErrorCode::InvalidProfile));
}

TEST_CASE("family speeds are uniformly bounded") {
    const SmoothingFamily fam = family_from_polygon(unit_square(), 0.01);
    const double bound = family_speed_bound(fam);
    const double edge = edge_speed_bound(fam);
    for (int k = 0; k <= 6; ++k) {
        const double s = std::ldexp(1.0, -k);
        const double v = family_speed(fam, s);
        CHECK(v > 0.0);
        CHECK(v <= bound);
        for (double e : edge_midpoint_speeds(fam, s)) CHECK(e <= edge * (1.0 + 1e-6));
    }
    const SmoothingFamily hex = family_from_polygon(regular_hexagon());
    for (double s : {1.0, 0.25, 0.0625}) {
        const double v = family_speed(hex, s);
        CHECK(std::isfinite(v));
        CHECK(v <= family_speed_bound(hex));
    }
}

TEST_CASE("Cauchy tail") {
    const SmoothingFamily fam = family_from_polygon(unit_square(), 0.01);
    const TailReport t1 = cauchy_tail(fam, 1.0);
    const TailReport th = cauchy_tail(fam, 0.5);
    CHECK(std::isfinite(t1.value));
    CHECK(th.value < t1.value);
    const double vmax = *std::max_element(t1.speed.begin(), t1.speed.end());
    CHECK(t1.value - th.value <= vmax * 0.5);
    for (std::size_t k = 1; k < t1.increments.size(); ++k) CHECK(t1.increments[k] < t1.increments[k - 1]);

    const TailReport t16 = cauchy_tail(fam, 1.0, 16);
    CHECK(std::abs(t16.value - t1.value) < 1e-3);
    CHECK(t16.increments.back() < 1e-3 * t16.value);

    // l_B of the restricted family between consecutive scales is dominated by the tail pieces
    const double lb = path_geometric_length(restriction_path(fam, 0.5, 0.25), 9, 1024).value;
    CHECK(lb <= (0.5 - 0.25) * vmax * 1.01);
}

TEST_CASE("profile independence") {
    const SmoothingFamily a = family_from_polygon(unit_square(), 0.005);
    const SmoothingFamily b = family_from_polygon(unit_square(), 0.01);
    CHECK(profile_independence_gap(b, b, 0.25).gap < 1e-12);

    const GapReport swapped = profile_independence_gap(b, a, 0.25);
    CHECK(swapped.swapped);
    const GapReport plain = profile_independence_gap(a, b, 0.25);
    CHECK(!plain.swapped);
    CHECK(std::abs(plain.gap - swapped.gap) < 1e-12);

    const GapSlope fit = gap_slope(a, b);
    CHECK(fit.pass);
    CHECK(fit.slope >= 0.9);
    CHECK(fit.slope <= 1.1);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < fit.s.size(); ++i) {
        lo = std::min(lo, fit.gap[i] / fit.s[i]);
        hi = std::max(hi, fit.gap[i] / fit.s[i]);
    }
    CHECK(hi / lo < 1.5);
}

TEST_CASE("positive curvature lift") {
    const SmoothingFamily fam = family_from_polygon(unit_square(), 0.01);
    const Lift same = positive_curvature_lift(fam, 0.25, 0.0);
    CHECK(c0_distance(same.table, fam.table(0.25)) == 0.0);
    CHECK(!same.table.strictly_convex());

    const double eps = 1e-3;
    const Lift lift = positive_curvature_lift(fam, 0.25, eps);
    CHECK(lift.table.strictly_convex());
    CHECK(lift.min_curvature > kCurvatureFloor);
    CHECK(lift.c0_to_source <= 2.0 * eps);
    CHECK(std::abs(polyline_length(lift.table, 1 << 11) - 1.0) < 1e-6);
    const AnnulusPoint x{0.3, 0.2};
    const AnnulusPoint y = forward_map(lift.table, x);
    CHECK(std::abs(inverse_map(lift.table, y).q - x.q) < 1e-9);
    CHECK(std::abs(jacobian_determinant(lift.table, x) - 1.0) < 1e-6);
}
