#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hb/billiard.hpp"
#include "hb/curves.hpp"

namespace hb {

enum class PathKind { translation, support_interp, normal_perturbation, smoothing_restriction };

const char* to_string(PathKind k);

/// A path of tables frozen at one value of s: the table gamma_s and its
/// s-velocity d gamma_s / ds as a function of q.
class PathSlice {
public:
    PathSlice(TableCurve table, std::function<Vec2(double)> velocity)
        : table_(std::move(table)), velocity_(std::move(velocity)) {}

    const TableCurve& table() const { return table_; }
    Vec2 velocity(double q) const { return velocity_(q); }

private:
    TableCurve table_;
    std::function<Vec2(double)> velocity_;
};

/// One-parameter family s in [0, 1] -> TableCurve.
///
/// When no analytic velocity is supplied, d gamma / ds is taken by central
/// differences with step 1e-4 (second-order one-sided differences within one
/// step of the ends).
class TablePath {
public:
    using SliceFn = std::function<TableCurve(double)>;
    using VelocityFn = std::function<std::function<Vec2(double)>(double, const TableCurve&)>;

    TablePath(PathKind kind, SliceFn slice, VelocityFn analytic_velocity = {});

    PathKind kind() const { return kind_; }
    TableCurve at(double s) const { return slice_(s); }
    PathSlice slice(double s) const;
    bool analytic_velocity() const { return static_cast<bool>(velocity_); }

    static constexpr double kStep = 1e-4;

private:
    PathKind kind_;
    SliceFn slice_;
    VelocityFn velocity_;
};

/// gamma_s = gamma + s v.
TablePath translation_path(const TableCurve& t, const Vec2& v);

/// Linear interpolation of length-normalized support functions. Throws
/// CurvatureNotPositive (index = failing s node) when h_s + h_s'' <= 1e-8 on the
/// (s, theta) validation grid.
TablePath support_interp_path(const FourierSupportSpec& a, const FourierSupportSpec& b,
                              int s_grid = 64, int theta_grid = 1024);

struct NormalPerturbation {
    TablePath path;
    double constant = 0.0;  // C in  l_B <= C (max|f| + max|f'|)
    double max_f = 0.0;
    double max_df = 0.0;
    double bound = 0.0;
    double curvature_max = 0.0;
    double radius = 0.0;     // max distance of the base table from the homothety center
    double min_length = 0.0; // lower bound for the length of every slice
};

/// gamma_s = alpha + s f n (outer normal n), each slice rescaled to length 1
/// about alpha's centroid and reparametrized by arc length from the image of
/// q = 0. `f` holds N >= 256 uniform samples of a periodic function of q and is
/// interpolated spectrally.
///
/// The reported constant is
///   C = 1/Lmin + (R + m) K / Lmin^2 + 2 K / Lmin,
/// with K = max(1, max curvature of alpha), R the radius of alpha about the
/// centroid, m = max|f| + max|f'| and Lmin = 1 - max curvature * max|f|.
NormalPerturbation normal_perturbation_path(const TableCurve& t, std::span<const double> f,
                                            int s_grid = 64, int q_grid = 1024);

struct QuadratureReport {
    double value = 0.0;
    double error_estimate = 0.0;  // |Simpson(all nodes) - Simpson(every other node)|
    int s_nodes = 0;
    std::vector<double> integrand;
};

/// l_B = int_0^1 max_q ||d gamma_s/ds(q)|| ds by Simpson in s over a sampled max
/// in q (one local refinement per node). Approximates l_B from below in q.
QuadratureReport path_geometric_length(const TablePath& p, int s_nodes = 65, int q_nodes = 1024);

/// H_s(Q, P) = -dF_s/ds (q_s(Q, P), Q), F_s the chord length of gamma_s.
double hamiltonian_value(const PathSlice& slice, double Q, double P);

class HamiltonianField {
public:
    explicit HamiltonianField(TablePath path) : path_(std::move(path)) {}
    double operator()(double s, double Q, double P) const;
    const TablePath& path() const { return path_; }

private:
    TablePath path_;
};

/// Upper bound for |H_s(Q, P)|: || dgamma/ds(q_s) - dgamma/ds(Q) ||.
double hamiltonian_bound(const PathSlice& slice, double Q, double P);

struct HoferGrid {
    int s_nodes = 65;
    int q_nodes = 256;
    int p_nodes = 127;
    double p_max = 1.0 - 1.0 / 128.0;
};

struct HoferReport {
    QuadratureReport length;
    HoferGrid grid;
    std::vector<double> max_h, min_h;
};

/// l_H = int_0^1 (max H_s - min H_s) ds over a uniform (Q, P) grid with
/// |P| <= p_max.
HoferReport hofer_length(const TablePath& p, const HoferGrid& grid = {});

/// int_0^1 sup_{q != Q} |dF_s/ds(q, Q)| ds over a torus grid.
QuadratureReport generating_speed_integral(const TablePath& p, int s_nodes = 65, int torus_nodes = 256);

struct ComparisonCertificate {
    double l_H = 0.0;
    double l_B = 0.0;
    double ratio = 0.0;
    double generating_integral = 0.0;  // int sup |dF/ds|
    bool pass = false;
    HoferGrid grid;
    int q_nodes = 0;
};

inline constexpr double kComparisonSlack = 1e-2;

/// Certificate for l_H <= 4 l_B on one path; passes iff ratio <= 4 (1 + 1e-2).
ComparisonCertificate verify_comparison(const TablePath& p, const HoferGrid& grid = {},
                                        int q_nodes = 1024);

/// Max over samples of the discrepancy between the central difference
/// (psi_{s+h}(x) - psi_{s-h}(x)) / 2h on the universal cover and the symplectic
/// gradient (dH/dP, -dH/dQ) at psi_s(x).
double hamilton_jacobi_residual(const TablePath& p, double s, std::span<const AnnulusPoint> samples,
                                double h = 1e-4, double gradient_step = 1e-5);

struct DistanceBracket {
    double lower = 0.0;
    double upper = 0.0;
};

/// lower = C0 distance between the endpoints, upper = l_B of the path. Throws
/// BracketInverted if lower > upper (1 + 1e-6).
DistanceBracket bracket_dB(const TablePath& p, int s_nodes = 65, int q_nodes = 1024);

}  // namespace hb
