#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hb/billiard.hpp"
#include "hb/curves.hpp"

namespace hb {

/// Periodic orbit as a cyclic tuple of boundary parameters.
struct PeriodicOrbitCandidate {
    std::vector<double> qs;
    double action = 0.0;    // sum of chord lengths
    double residual = 0.0;  // max |dF/dq_i|
    int winding = 0;        // min(k, n - k), k = number of turns around the table
    double fixed_point_error = 0.0;
    double min_hessian_eigenvalue = 0.0;  // smallest |eigenvalue| of the Hessian of F
    bool degenerate_family = false;
    bool accepted = false;
};

inline constexpr double kOrbitResidualTol = 1e-10;
inline constexpr double kFixedPointTol = 1e-8;
inline constexpr double kOrbitDedupTol = 1e-6;

/// F(q_1..q_n) = sum |gamma(q_{i+1}) - gamma(q_i)| with q_{n+1} = q_1.
/// Throws DiagonalPoint if two consecutive entries coincide mod 1.
double orbit_functional(const TableCurve& t, const std::vector<double>& qs);

/// dF/dq_i = <u_{i-1,i}, gamma'(q_i)> - <u_{i,i+1}, gamma'(q_i)>.
std::vector<double> orbit_gradient(const TableCurve& t, const std::vector<double>& qs);

/// Analytic Hessian of F (cyclic tridiagonal, row-major n x n).
std::vector<double> orbit_hessian(const TableCurve& t, const std::vector<double>& qs);

/// Phase point (q_1, p_1) of the trajectory through the tuple.
AnnulusPoint orbit_phase_point(const TableCurve& t, const std::vector<double>& qs);

/// Residual, winding, fixed-point error, Hessian spectrum and acceptance of a tuple.
PeriodicOrbitCandidate classify_orbit(const TableCurve& t, std::vector<double> qs);

/// Sup distance between two orbits as point sets on the circle (so modulo
/// cyclic shift and reversal). Infinite when the sizes differ.
double orbit_class_distance(const PeriodicOrbitCandidate& a, const PeriodicOrbitCandidate& b);

/// Critical points of F by damped Newton on the torus. Seeds: the rotational
/// tuples q_0 + i k / n for each winding k coprime to n, then `random_seeds`
/// uniform tuples drawn from `seed`. Accepted candidates are deduplicated; a
/// degenerate family is reported once per (winding, action).
std::vector<PeriodicOrbitCandidate> find_periodic_orbits(const TableCurve& t, int n, int random_seeds = 32,
                                                         std::uint64_t seed = 1);

/// Independent oracle: Newton on psi^n(x) - (x + k) in phase space, seeded on
/// (j / starts, cos(pi k / n)). Results are converted to tuples and classified.
std::vector<PeriodicOrbitCandidate> fixed_point_orbits(const TableCurve& t, int n, int starts = 16);

struct FunctionalGap {
    double gap = 0.0;
    double c0 = 0.0;
    double bound = 0.0;  // 2 n c0
    std::vector<double> argmax;
};

/// max |F_a - F_b| over the torus grid (j_1..j_n) / grid, skipping tuples with
/// cyclically consecutive indices at distance <= 1. Throws BoundViolated if the
/// gap exceeds 2 n c0. Throws ResolutionTooLarge above 2^24 tuples.
FunctionalGap functional_gap(const TableCurve& a, const TableCurve& b, int n, int grid = 64);

struct AlmostPeriodicityReport {
    double min_distance = 0.0;         // min_x dist(psi_b^n(x), psi_a^n(cloud))
    double center_displacement = 0.0;  // |psi_b^n(x0) - psi_a^n(x0)| at the orbit point
    std::optional<double> d_b_upper;   // path bound when both tables are support tables
    std::vector<AnnulusPoint> cloud, image_a, image_b;
};

/// Samples the phase-space ball of `radius` around the orbit point (the point
/// itself first) and compares the n-th iterates under the two maps.
AlmostPeriodicityReport almost_periodicity_experiment(const TableCurve& a, const TableCurve& b,
                                                      const PeriodicOrbitCandidate& orbit, int n, double radius,
                                                      int samples = 400, std::uint64_t seed = 1,
                                                      bool with_bracket = true);

/// Chord data F(0, t), F(t, 1/2) on a grid of t in (0, 1/2) u (1/2, 1), and F(0, 1/2).
struct ChordData {
    double diameter = 0.0;
    std::vector<double> t;
    std::vector<double> from_start;
    std::vector<double> to_half;
};

/// t_j = j / samples for 0 < j < samples, j != samples / 2.
ChordData chord_data(const TableCurve& table, int samples = 256);

struct Reconstruction {
    std::vector<double> t;
    std::vector<Vec2> points;
    Vec2 start = Vec2::Zero();  // beta(0) = beta(1)
    Vec2 half = Vec2::Zero();   // beta(1/2)
};

/// Places beta(0) at the origin and beta(1/2) on the positive x axis, and each
/// beta(t) at the circle intersection on the side of the curve's orientation:
/// below the axis for t < 1/2, above for t > 1/2. Throws InconsistentChords.
Reconstruction reconstruct_table(const ChordData& data);

/// Rigid motion taking start -> table(0) and the direction start -> half onto
/// table(0) -> table(1/2).
Reconstruction align_to(const Reconstruction& r, const TableCurve& table);

/// max_j |beta(t_j) - table(t_j)| after align_to.
double reconstruction_error(const Reconstruction& r, const TableCurve& table);

}  // namespace hb
