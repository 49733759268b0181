#include <cmath>
#include <random>
#include <vector>

#include "hb/billiard.hpp"
#include "hb/homotopy.hpp"
#include "hb/numerics.hpp"
#include "support.hpp"

using namespace hb;
using hb::test::disc_spec;
using hb::test::mild_ellipse_spec;
using hb::test::throws_code;

namespace {

TablePath disc_to_ellipse() { return support_interp_path(disc_spec(), mild_ellipse_spec(0.05)); }

std::vector<AnnulusPoint> sample_points(std::mt19937_64& rng, int n, double pmax) {
    std::uniform_real_distribution<double> uq(0.0, 1.0), up(-pmax, pmax);
    std::vector<AnnulusPoint> out;
    for (int i = 0; i < n; ++i) out.push_back({uq(rng), up(rng)});
    return out;
}

HoferGrid small_grid() { return {17, 64, 31, 1.0 - 1.0 / 128.0}; }

}  // namespace

TEST_CASE("translation path") {
    const TableCurve t = build_fourier_table(mild_ellipse_spec());
    const Vec2 v{0.1, 0.0};
    const TablePath p = translation_path(t, v);
    CHECK(p.kind() == PathKind::translation);
    CHECK(c0_distance(p.at(1.0), t.translated(v)) < 1e-12);
    CHECK(std::abs(path_geometric_length(p).value - 0.1) < 1e-9);

    const TablePath still = translation_path(t, Vec2::Zero());
    CHECK(path_geometric_length(still).value == 0.0);

    const PathSlice slice = p.slice(0.3);
    for (double Q : {0.0, 0.2, 0.7})
        for (double P : {-0.9, 0.0, 0.5}) CHECK(std::abs(hamiltonian_value(slice, Q, P)) < 1e-15);
    CHECK(hofer_length(p, small_grid()).length.value < 1e-12);

    const ComparisonCertificate c = verify_comparison(p, small_grid(), 256);
    CHECK(c.ratio < 1e-10);
    CHECK(c.pass);

    std::mt19937_64 rng(3);
    const auto pts = sample_points(rng, 20, 0.9);
    CHECK(hamilton_jacobi_residual(p, 0.5, pts) < 1e-10);

    const DistanceBracket b = bracket_dB(p);
    CHECK(std::abs(b.lower - 0.1) < 1e-9);
    CHECK(std::abs(b.upper - 0.1) < 1e-9);
}

TEST_CASE("rigid motions give a null Hamiltonian") {
    const TableCurve t = build_fourier_table(mild_ellipse_spec(0.06));
    const Vec2 c{0.02, -0.01};
    const double omega = 0.7;
    // gamma_s = R(omega s) gamma about c, velocity omega J (gamma - c)
    const TablePath p(PathKind::translation, [=](double s) { return t.rotated(omega * s, c); },
                      [=](double, const TableCurve& table) {
                          return std::function<Vec2(double)>(
                              [table, c, omega](double q) { return Vec2(omega * perp(table.position(q) - c)); });
                      });
    const PathSlice slice = p.slice(0.4);
    for (double Q : {0.1, 0.45, 0.8})
        for (double P : {-0.7, 0.1, 0.6}) CHECK(std::abs(hamiltonian_value(slice, Q, P)) < 1e-12);
}

TEST_CASE("support interpolation path") {
    const TablePath still = support_interp_path(mild_ellipse_spec(), mild_ellipse_spec());
    CHECK(path_geometric_length(still, 17, 256).value < 1e-12);
    const DistanceBracket b0 = bracket_dB(still, 17, 256);
    CHECK(b0.lower < 1e-12);
    CHECK(b0.upper < 1e-12);

    CHECK(throws_code([] { support_interp_path(disc_spec(), {1.0, {0.0, 0.4}, {}}); },
                      ErrorCode::CurvatureNotPositive));

    const TablePath p = disc_to_ellipse();
    CHECK(p.analytic_velocity());
    // analytic s-velocity against differences of the slices themselves
    for (double s : {0.1, 0.5, 0.9}) {
        const PathSlice slice = p.slice(s);
        const TableCurve plus = p.at(s + 1e-5), minus = p.at(s - 1e-5);
        for (int i = 0; i < 64; ++i) {
            const double q = i / 64.0;
            const Vec2 fd = (plus.position(q) - minus.position(q)) / 2e-5;
            CHECK((fd - slice.velocity(q)).norm() < 1e-7);
        }
    }

    // endpoints
    CHECK(c0_distance(p.at(0.0), disc_table()) < 1e-10);
    CHECK(c0_distance(p.at(1.0), build_fourier_table(mild_ellipse_spec(0.05))) < 1e-12);

    const QuadratureReport coarse = path_geometric_length(p, 65, 1024);
    const QuadratureReport fine = path_geometric_length(p, 129, 2048);
    CHECK(coarse.value > 0.0);
    CHECK(std::abs(coarse.value - fine.value) < 1e-4);
    CHECK(coarse.error_estimate < 1e-4);

    const DistanceBracket b = bracket_dB(p);
    CHECK(b.lower > 0.0);
    CHECK(b.lower <= b.upper * (1.0 + 1e-6));
}

TEST_CASE("Hamiltonian against differences of the chord length") {
    const TablePath p = disc_to_ellipse();
    const double s = 0.5, Q = 0.3, P = 0.2, h = 1e-4;
    const PathSlice slice = p.slice(s);
    const double q = inverse_map_lifted(slice.table(), Q, P).q;
    const double fd = -(chord_length(p.at(s + h), q, Q) - chord_length(p.at(s - h), q, Q)) / (2 * h);
    CHECK(std::abs(hamiltonian_value(slice, Q, P) - fd) < 1e-6);

    const HamiltonianField field(p);
    CHECK(std::abs(field(s, Q, P) - hamiltonian_value(slice, Q, P)) < 1e-15);
}

TEST_CASE("Hamiltonian bound and boundary decay") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 4; ++trial) {
        const TablePath p = support_interp_path(hb::test::random_spec(rng), hb::test::random_spec(rng));
        for (double s : {0.0, 0.37, 1.0}) {
            const PathSlice slice = p.slice(s);
            double vmax = 0.0;
            for (int i = 0; i < 256; ++i) vmax = std::max(vmax, slice.velocity(i / 256.0).norm());
            for (const AnnulusPoint& x : sample_points(rng, 50, 0.99)) {
                CHECK(std::abs(hamiltonian_value(slice, x.q, x.p)) <= hamiltonian_bound(slice, x.q, x.p) + 1e-9);
            }
            for (double Q : {0.05, 0.5, 0.81}) {
                for (double sign : {-1.0, 1.0}) {
                    double prev = std::numeric_limits<double>::infinity();
                    for (int k = 2; k <= 6; ++k) {
                        const double v = std::abs(hamiltonian_value(slice, Q, sign * (1.0 - std::pow(10.0, -k))));
                        CHECK(v <= prev + 1e-12);
                        prev = v;
                    }
                    CHECK(prev <= 1e-3 * vmax);
                }
            }
        }
    }
}

TEST_CASE("Hofer length of the disc to ellipse path") {
    const TablePath p = disc_to_ellipse();
    const HoferReport a = hofer_length(p, {17, 128, 63, 1.0 - 1.0 / 128.0});
    const HoferReport b = hofer_length(p, {33, 256, 127, 1.0 - 1.0 / 128.0});
    CHECK(a.length.value > 0.0);
    CHECK(std::abs(a.length.value - b.length.value) < 1e-3);

    const ComparisonCertificate c = verify_comparison(p, small_grid(), 1024);
    CHECK(c.pass);
    CHECK(c.l_H <= 2.0 * c.generating_integral * (1.0 + kComparisonSlack));
    CHECK(2.0 * c.generating_integral <= 4.0 * c.l_B * (1.0 + kComparisonSlack));
}

TEST_CASE("comparison certificate on random support paths") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 5; ++trial) {
        const TablePath p = support_interp_path(hb::test::random_spec(rng), hb::test::random_spec(rng));
        const ComparisonCertificate c = verify_comparison(p, {9, 48, 23, 1.0 - 1.0 / 128.0}, 512);
        CHECK(c.pass);
        CHECK(c.l_H <= 2.0 * c.generating_integral * (1.0 + kComparisonSlack));
    }
}

TEST_CASE("Hamilton-Jacobi residual") {
    const TablePath p = disc_to_ellipse();
    std::mt19937_64 rng(5);
    const auto pts = sample_points(rng, 100, 0.9);
    CHECK(hamilton_jacobi_residual(p, 0.5, pts) < 1e-3);

    // second order in the time step
    const auto few = std::vector<AnnulusPoint>(pts.begin(), pts.begin() + 10);
    const double r0 = hamilton_jacobi_residual(p, 0.5, few, 0.02);
    const double r2 = hamilton_jacobi_residual(p, 0.5, few, 0.005);
    CHECK(r0 >= 4.0 * r2);
}

TEST_CASE("normal perturbation path") {
    const TableCurve disc = disc_table();
    std::vector<double> zero(256, 0.0);
    const NormalPerturbation still = normal_perturbation_path(disc, zero);
    CHECK(still.bound == 0.0);
    CHECK(path_geometric_length(still.path, 17, 256).value < 1e-12);

    std::vector<double> f(256);
    for (int j = 0; j < 256; ++j) f[j] = 0.01 * std::cos(kTwoPi * j / 256.0);
    const NormalPerturbation np = normal_perturbation_path(disc, f);
    CHECK(std::abs(np.max_f - 0.01) < 1e-12);
    CHECK(std::abs(np.max_df - 0.01 * kTwoPi) < 1e-9);
    const double lb = path_geometric_length(np.path, 33, 1024).value;
    CHECK(lb > 0.0);
    CHECK(lb <= np.bound);
    // every slice is an arc-length table of length 1 through the image of q = 0
    const TableCurve end = np.path.at(1.0);
    double len = 0.0;
    for (int i = 0; i < 4096; ++i) len += (end.position((i + 1) / 4096.0) - end.position(i / 4096.0)).norm();
    CHECK(std::abs(len - 1.0) < 1e-6);
    CHECK(std::abs(end.tangent(0.3).norm() - 1.0) < 1e-12);

    std::vector<double> big(256, 0.5);
    CHECK(throws_code([&] { normal_perturbation_path(disc, big); }, ErrorCode::PerturbationTooLarge));
    CHECK(throws_code([&] { normal_perturbation_path(disc, std::vector<double>(100, 0.0)); },
                      ErrorCode::InvalidInput));
}
