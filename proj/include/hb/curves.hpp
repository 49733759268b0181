#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace hb {

using Vec2 = Eigen::Vector2d;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }
// Counterclockwise quarter turn.
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

enum class Representation {
    disc,
    fourier_support,
    smoothed_polygon,
    reconstructed_samples,
    normal_perturbation,
};

const char* to_string(Representation r);

/// Point, unit tangent and signed curvature at one arc-length parameter.
struct CurveFrame {
    Vec2 position;
    Vec2 tangent;
    double curvature = 0.0;
};

/// Support function h(theta) = c0 + sum_k cos[k-1] cos(k theta) + sin[k-1] sin(k theta).
struct FourierSupportSpec {
    double c0 = 0.0;
    std::vector<double> cos;
    std::vector<double> sin;

    std::size_t harmonics() const { return std::max(cos.size(), sin.size()); }
};

/// Back end of a TableCurve: a closed counterclockwise curve of length 1 in
/// arc-length parameter q in [0, 1), marked at q = 0.
class CurveShape {
public:
    virtual ~CurveShape() = default;
    virtual CurveFrame frame(double q) const = 0;
    virtual Vec2 position(double q) const { return frame(q).position; }
    virtual Representation representation() const = 0;
    // Member of the strictly convex class (positive curvature everywhere).
    virtual bool strictly_convex() const = 0;
    virtual std::optional<FourierSupportSpec> support() const { return std::nullopt; }
};

/// A marked billiard table: immutable, cheap to copy, safe to share across threads.
///
/// Positions are those of the underlying shape moved by a rigid motion, and the
/// parameter may be shifted (`with_mark_shift`) to move the marked point along
/// the boundary.
class TableCurve {
public:
    explicit TableCurve(std::shared_ptr<const CurveShape> shape);

    CurveFrame frame(double q) const;
    Vec2 position(double q) const;
    Vec2 tangent(double q) const { return frame(q).tangent; }
    double curvature(double q) const { return frame(q).curvature; }
    Vec2 outward_normal(double q) const;

    Representation representation() const { return shape_->representation(); }
    bool strictly_convex() const { return shape_->strictly_convex(); }

    TableCurve translated(const Vec2& v) const;
    // Rotation by `angle` about `center`.
    TableCurve rotated(double angle, const Vec2& center = Vec2::Zero()) const;
    // position'(q) = position(q + r)
    TableCurve with_mark_shift(double r) const;

    // Area centroid of the enclosed body.
    Vec2 centroid(int samples = 4096) const;
    // Normalized support coefficients, when this table is an unmoved
    // support-function table.
    std::optional<FourierSupportSpec> support_spec() const;

    const CurveShape& shape() const { return *shape_; }

private:
    std::shared_ptr<const CurveShape> shape_;
    double cos_ = 1.0, sin_ = 0.0;
    Vec2 offset_ = Vec2::Zero();
    double shift_ = 0.0;
};

/// Circle of radius 1/(2 pi) centred at the origin, marked at (1/(2 pi), 0).
TableCurve disc_table();

/// Table from a support function. Coefficients are rescaled so the boundary
/// has length 1; throws CurvatureNotPositive when h + h'' <= 1e-8 somewhere on
/// the validation grid.
TableCurve build_fourier_table(const FourierSupportSpec& spec, int validation_grid = 4096);

inline constexpr double kCurvatureFloor = 1e-8;

struct SupportJet {
    double h = 0.0, dh = 0.0, d2h = 0.0;
};
SupportJet evaluate_support(const FourierSupportSpec& spec, double theta);
// Arc length of the boundary from theta = 0 to theta.
double support_arc_length(const FourierSupportSpec& spec, double theta);
// Boundary point with outer normal direction theta.
Vec2 support_point(const FourierSupportSpec& spec, double theta);
double min_radius_of_curvature(const FourierSupportSpec& spec, int grid);
// Homothety about the origin to boundary length 1.
FourierSupportSpec normalize_length(const FourierSupportSpec& spec);

/// c, c', c'' of a regular closed curve in an arbitrary parameter u in [0, 1).
struct CurveJet {
    Vec2 d0, d1, d2;
};

/// Node layout shared by parametric tables: knots u_j = j / cells and the 16
/// Gauss-Legendre nodes of each cell, stored cell by cell.
struct ParametricLayout {
    int cells = 0;
    std::vector<double> knots;
    std::vector<double> nodes;
    std::vector<double> weights;
};
ParametricLayout parametric_layout(int cells);

/// Arc-length reparametrized table from a closed parametrized curve. The curve
/// is scaled about `center` to length 1 and marked at u = 0. Arc length comes
/// from Gauss-Legendre quadrature of the speed on each cell; the reparametrized
/// curve is a quintic Hermite interpolant through the knots.
TableCurve make_parametric_table(const std::function<CurveJet(double)>& jet, const Vec2& center,
                                 Representation tag, bool strictly_convex, int cells = 4096);

/// Same, from jets sampled at the layout knots and speeds ||c'|| at its nodes.
TableCurve make_parametric_table(const ParametricLayout& layout, std::span<const CurveJet> knot_jets,
                                 std::span<const double> node_speeds, const Vec2& center,
                                 Representation tag, bool strictly_convex);

/// Table through periodic samples points[j] = beta(j / N) by trigonometric
/// interpolation, tagged reconstructed_samples.
TableCurve table_from_samples(std::span<const Vec2> points);

/// Largest ||a(q) - b(q)|| over a uniform grid with one local refinement pass
/// around the best grid point. Never exceeds the true maximum.
double c0_distance(const TableCurve& a, const TableCurve& b, int grid = 4096);

/// Smallest curvature seen on a uniform grid.
double min_curvature(const TableCurve& t, int grid = 4096);

}  // namespace hb
