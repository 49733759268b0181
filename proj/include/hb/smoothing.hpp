#pragma once

#include <memory>
#include <vector>

#include "hb/curves.hpp"
#include "hb/homotopy.hpp"
#include "hb/numerics.hpp"

namespace hb {

/// Convex polygon with counterclockwise vertices, perimeter 1, and a marked
/// boundary point at arc length `mark` from vertex 0.
struct PolygonSpec {
    std::vector<Vec2> vertices;
    double mark = 0.0;
};

/// Checks strict convexity and unit perimeter; throws InvalidPolygon.
void validate_polygon(const PolygonSpec& p);

/// Homothety about the vertex centroid to perimeter 1.
PolygonSpec scaled_to_unit_perimeter(std::vector<Vec2> vertices, double mark = 0.0);

/// Area centroid of the polygon.
Vec2 polygon_centroid(const PolygonSpec& p);

/// Exterior angle at each vertex, in (0, pi).
std::vector<double> exterior_angles(const PolygonSpec& p);

/// Smooth even convex corner profile f with f(x) = a|x| for |x| >= width().
///
/// f = a sum_k c_k (|.| * rho_{w_k}), a convex mixture of mollified absolute
/// values with the standard bump mollifier rho_w(x) = rho(x / w) / w. A single
/// component is what make_profile returns; mixtures arise from blend().
class CornerProfile {
public:
    struct Component {
        double weight;
        double width;
    };

    CornerProfile(double slope, std::vector<Component> components);

    double slope() const { return slope_; }
    double width() const { return width_; }
    const std::vector<Component>& components() const { return components_; }

    QuinticHermite::Jet operator()(double x) const;

    // Graph arc length from -width() to x, and its inverse.
    double graph_length(double x) const;
    double graph_length() const { return total_; }
    double graph_point(double arc) const;

    // Length of the two tangent segments of a|x| over [-width, width].
    double corner_length() const;
    // corner_length() - graph_length(): the length defect of the corner.
    double defect() const { return corner_length() - total_; }

private:
    double slope_;
    std::vector<Component> components_;
    double width_;
    double total_ = 0.0;
    QuinticHermite arc_;
};

/// Throws InvalidWidth if w <= 0, InvalidProfile if a <= 0.
CornerProfile make_profile(double slope, double width);

/// (1 - t) g + t f for profiles with the same slope.
CornerProfile blend(const CornerProfile& g, const CornerProfile& f, double t);

/// First absolute moment of the unit bump mollifier.
double mollifier_abs_moment();

/// Slope of the corner graph for an exterior angle phi: tan(phi / 2).
inline double corner_slope(double exterior_angle) { return std::tan(0.5 * exterior_angle); }

/// The family gamma_s (s in [0, 1]) of convex curves that follow the polygon
/// outside corner neighborhoods and the graph of s f_i(x / s) near corner i, and
/// its normalization gamma~_s = O + (gamma_s - O) / L(s) about the polygon
/// centroid O. Both are parametrized proportionally to arc length from the
/// mark. s = 0 is the polygon boundary itself.
class SmoothingFamily {
public:
    SmoothingFamily(PolygonSpec polygon, std::vector<CornerProfile> profiles);

    const PolygonSpec& polygon() const;
    const std::vector<CornerProfile>& profiles() const;
    const std::vector<double>& defects() const;
    double defect_sum() const;
    double perimeter() const;
    Vec2 center() const;

    // Affine law L(s) = perimeter - s sum delta_i.
    double length(double s) const;
    double lambda(double s) const { return 1.0 / length(s); }
    // Length of gamma_s by direct adaptive quadrature of the corner graphs.
    double measured_length(double s) const;

    // gamma_s(q), q in [0, 1), speed L(s).
    CurveFrame raw_frame(double s, double q) const;
    // gamma~_s(q), unit speed.
    CurveFrame frame(double s, double q) const;
    TableCurve table(double s) const;

    // Parameters q at which the sup of a velocity is sampled: a uniform grid plus
    // points concentrated on the corner arcs of gamma_s.
    std::vector<double> sample_parameters(double s, int uniform = 4096, int per_corner = 65) const;

    // Polygon arc-length coordinate (from vertex 0) of each vertex.
    const std::vector<double>& vertex_coordinates() const;
    // Raw arc-length position along gamma_s (from the mark) of the polygon point
    // with polygon coordinate t, for t outside every corner neighborhood at s.
    double raw_arc_of(double s, double t) const;
    // True when the polygon point with coordinate t lies on gamma_s.
    bool on_edge(double s, double t) const;

private:
    struct Data;
    std::shared_ptr<const Data> data_;
};

/// Profiles a_i |x| mollified with a common width w (default: min(0.01, shortest
/// edge / 4)). Throws InvalidWidth, MarkInCorner, InvalidPolygon.
SmoothingFamily family_from_polygon(const PolygonSpec& p, double width = 0.0);
SmoothingFamily family_from_polygon(const PolygonSpec& p, std::vector<CornerProfile> profiles);

double default_profile_width(const PolygonSpec& p);

/// max_q || d gamma~_s / ds (q) || by central differences in s with step
/// min(1e-4, s / 10) (one-sided at s = 1).
double family_speed(const SmoothingFamily& fam, double s);

/// Uniform bound for family_speed on (0, 1] from the edge and corner estimates.
double family_speed_bound(const SmoothingFamily& fam);

/// 2 L sum delta / (L - sum delta): bound for || d gamma_s / ds || on edges.
double edge_speed_bound(const SmoothingFamily& fam);

/// || d gamma_s / ds || at the raw parameter of each edge midpoint.
std::vector<double> edge_midpoint_speeds(const SmoothingFamily& fam, double s);

struct TailReport {
    double value = 0.0;
    std::vector<double> s;             // s_k = s0 2^-k
    std::vector<double> speed;         // family_speed(s_k)
    std::vector<double> increments;    // trapezoid piece on [s_{k+1}, s_k]
    std::vector<double> partial_sums;  // running sums of increments
    double remainder = 0.0;            // s_K * speed_K bound for [0, s_K]
};

/// int_0^{s0} family_speed ds on the geometric grid s0 2^-k, k = 0..K.
TailReport cauchy_tail(const SmoothingFamily& fam, double s0, int K = 8);

/// Path s' -> gamma~_{from + (to - from) s'} of normalized curves.
TablePath restriction_path(const SmoothingFamily& fam, double from, double to);

struct GapReport {
    double gap = 0.0;
    bool swapped = false;
    std::vector<double> t;
    std::vector<double> integrand;
};

/// int_0^1 max_q || d gamma~_{t,s} / dt || dt for the families built from the
/// blended profiles (1 - t) g + t f; g belongs to `a`, f to `b`, swapped when
/// needed so g <= f.
GapReport profile_independence_gap(const SmoothingFamily& a, const SmoothingFamily& b, double s,
                                   int t_nodes = 17);

struct GapSlope {
    std::vector<double> s, gap;
    double slope = 0.0;
    bool pass = false;  // slope in [0.9, 1.1]
};
GapSlope gap_slope(const SmoothingFamily& a, const SmoothingFamily& b,
                   const std::vector<double>& s = {0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125});

struct Lift {
    TableCurve table;
    double min_curvature = 0.0;
    double c0_to_source = 0.0;
    int harmonics = 0;
};

/// Strictly convex table near gamma~_s: the support function of gamma~_s about
/// the centroid is sampled on `angles` directions, smoothed by the wrapped
/// Gaussian of angular width eps, enlarged by an eps-disc and renormalized to
/// length 1; the mark is moved to the point nearest gamma~_s(0). eps = 0 returns
/// gamma~_s unchanged.
Lift positive_curvature_lift(const SmoothingFamily& fam, double s, double eps, int angles = 65536);

}  // namespace hb
