#include "hb/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unsupported/Eigen/FFT>

#include "hb/error.hpp"
#include "hb/parallel.hpp"

namespace hb {

// ---------------------------------------------------------------------------
// Polygons

void validate_polygon(const PolygonSpec& p) {
    const std::size_t n = p.vertices.size();
    if (n < 3) throw Error(ErrorCode::InvalidPolygon, "need at least 3 vertices");
    double perimeter = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = p.vertices[i];
        const Vec2& b = p.vertices[(i + 1) % n];
        const Vec2& c = p.vertices[(i + 2) % n];
        if (!(cross(b - a, c - b) > 0.0)) {
            throw Error(ErrorCode::InvalidPolygon,
                        "vertex sequence is not strictly convex and counterclockwise at vertex " +
                            std::to_string((i + 1) % n),
                        static_cast<long>((i + 1) % n));
        }
        perimeter += (b - a).norm();
    }
    if (std::abs(perimeter - 1.0) > 1e-10) {
        throw Error(ErrorCode::InvalidPolygon, "perimeter " + std::to_string(perimeter) + " is not 1");
    }
    if (!(p.mark >= 0.0 && p.mark < 1.0)) throw Error(ErrorCode::InvalidPolygon, "mark outside [0, 1)");
}

PolygonSpec scaled_to_unit_perimeter(std::vector<Vec2> vertices, double mark) {
    const std::size_t n = vertices.size();
    if (n < 3) throw Error(ErrorCode::InvalidPolygon, "need at least 3 vertices");
    Vec2 c = Vec2::Zero();
    for (const Vec2& v : vertices) c += v;
    c /= static_cast<double>(n);
    double perimeter = 0.0;
    for (std::size_t i = 0; i < n; ++i) perimeter += (vertices[(i + 1) % n] - vertices[i]).norm();
    for (Vec2& v : vertices) v = c + (v - c) / perimeter;
    return {std::move(vertices), mark};
}

Vec2 polygon_centroid(const PolygonSpec& p) {
    const std::size_t n = p.vertices.size();
    double area2 = 0.0;
    Vec2 acc = Vec2::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = p.vertices[i];
        const Vec2& b = p.vertices[(i + 1) % n];
        const double w = cross(a, b);
        area2 += w;
        acc += w * (a + b);
    }
    return acc / (3.0 * area2);
}

std::vector<double> exterior_angles(const PolygonSpec& p) {
    const std::size_t n = p.vertices.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 din = p.vertices[i] - p.vertices[(i + n - 1) % n];
        const Vec2 dout = p.vertices[(i + 1) % n] - p.vertices[i];
        out[i] = std::atan2(cross(din, dout), din.dot(dout));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Mollifier tables

namespace {

double bump(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

double bump_slope(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    const double d = 1.0 - t * t;
    return bump(t) * (-2.0 * t / (d * d));
}

// Phi(t) = int_{-1}^t rho and mu(t) = int_{-1}^t y rho(y) dy for the unit bump
// rho of mass one, as quintic Hermite tables with exact knot integrals.
struct Mollifier {
    double mass = 0.0;
    double abs_moment = 0.0;
    QuinticHermite phi, mu;

    Mollifier() {
        constexpr int cells = 2048;
        const std::vector<double> t = linspace(-1.0, 1.0, cells + 1);
        std::vector<double> p(cells + 1, 0.0), m(cells + 1, 0.0);
        for (int j = 0; j < cells; ++j) {
            p[j + 1] = p[j] + gauss_legendre16(bump, t[j], t[j + 1]);
            m[j + 1] = m[j] + gauss_legendre16([](double y) { return y * bump(y); }, t[j], t[j + 1]);
        }
        mass = p.back();
        std::vector<double> r(cells + 1), dr(cells + 1), mr(cells + 1), dmr(cells + 1);
        for (int j = 0; j <= cells; ++j) {
            p[j] /= mass;
            m[j] /= mass;
            r[j] = bump(t[j]) / mass;
            dr[j] = bump_slope(t[j]) / mass;
            mr[j] = t[j] * r[j];
            dmr[j] = r[j] + t[j] * dr[j];
        }
        p.back() = 1.0;
        m.back() = 0.0;
        abs_moment = -2.0 * m[cells / 2];
        phi = QuinticHermite(t, p, r, dr);
        mu = QuinticHermite(t, m, mr, dmr);
    }
};

const Mollifier& mollifier() {
    static const Mollifier m;
    return m;
}

// (|.| * rho_w)(x) and two derivatives.
QuinticHermite::Jet mollified_abs(double x, double w) {
    const double t = x / w;
    if (t >= 1.0) return {x, 1.0, 0.0};
    if (t <= -1.0) return {-x, -1.0, 0.0};
    const Mollifier& m = mollifier();
    const double phi = m.phi(t).f;
    const double mu = m.mu(t).f;
    return {x * (2.0 * phi - 1.0) - 2.0 * w * mu, 2.0 * phi - 1.0, 2.0 * bump(t) / (m.mass * w)};
}

}  // namespace

double mollifier_abs_moment() { return mollifier().abs_moment; }

// ---------------------------------------------------------------------------
// Corner profiles

CornerProfile::CornerProfile(double slope, std::vector<Component> components)
    : slope_(slope), components_(std::move(components)) {
    if (!(slope_ > 0.0) || !std::isfinite(slope_)) {
        throw Error(ErrorCode::InvalidProfile, "corner slope must be positive");
    }
    if (components_.empty()) throw Error(ErrorCode::InvalidProfile, "profile has no components");
    double total_weight = 0.0;
    width_ = 0.0;
    for (const Component& c : components_) {
        if (!(c.width > 0.0) || !std::isfinite(c.width)) {
            throw Error(ErrorCode::InvalidWidth, "mollifier width must be positive");
        }
        if (!(c.weight > 0.0)) throw Error(ErrorCode::InvalidProfile, "component weights must be positive");
        total_weight += c.weight;
        width_ = std::max(width_, c.width);
    }
    for (Component& c : components_) c.weight /= total_weight;

    constexpr int cells = 512;
    const std::vector<double> x = linspace(-width_, width_, cells + 1);
    std::vector<double> g(cells + 1, 0.0), dg(cells + 1), d2g(cells + 1);
    auto speed = [this](double u) { return std::hypot(1.0, (*this)(u).df); };
    for (int j = 0; j < cells; ++j) g[j + 1] = g[j] + gauss_legendre16(speed, x[j], x[j + 1]);
    for (int j = 0; j <= cells; ++j) {
        const QuinticHermite::Jet f = (*this)(x[j]);
        dg[j] = std::hypot(1.0, f.df);
        d2g[j] = f.df * f.d2f / dg[j];
    }
    total_ = g.back();
    arc_ = QuinticHermite(x, std::move(g), std::move(dg), std::move(d2g));
}

QuinticHermite::Jet CornerProfile::operator()(double x) const {
    QuinticHermite::Jet out;
    for (const Component& c : components_) {
        const QuinticHermite::Jet j = mollified_abs(x, c.width);
        out.f += c.weight * j.f;
        out.df += c.weight * j.df;
        out.d2f += c.weight * j.d2f;
    }
    out.f *= slope_;
    out.df *= slope_;
    out.d2f *= slope_;
    return out;
}

double CornerProfile::graph_length(double x) const {
    if (x <= -width_) return 0.0;
    if (x >= width_) return total_ + (x - width_) * std::hypot(1.0, slope_);
    return arc_(x).f;
}

double CornerProfile::graph_point(double arc) const {
    if (arc <= 0.0) return -width_;
    if (arc >= total_) return width_;
    auto fdf = [&](double u) -> std::pair<double, double> {
        const QuinticHermite::Jet j = arc_(u);
        return {j.f - arc, j.df};
    };
    const double guess = -width_ + 2.0 * width_ * arc / total_;
    return newton_in_bracket(fdf, -width_, width_, guess, 1e-15 * std::max(1.0, total_), 100).x;
}

double CornerProfile::corner_length() const { return 2.0 * width_ * std::hypot(1.0, slope_); }

CornerProfile make_profile(double slope, double width) {
    if (!(width > 0.0)) throw Error(ErrorCode::InvalidWidth, "mollifier width must be positive");
    return CornerProfile(slope, {{1.0, width}});
}

CornerProfile blend(const CornerProfile& g, const CornerProfile& f, double t) {
    if (std::abs(g.slope() - f.slope()) > 1e-12 * std::max(1.0, f.slope())) {
        throw Error(ErrorCode::InvalidProfile, "blended profiles must share the corner slope");
    }
    std::vector<CornerProfile::Component> parts;
    auto add = [&](double weight, double width) {
        if (weight <= 0.0) return;
        for (auto& p : parts) {
            if (p.width == width) {
                p.weight += weight;
                return;
            }
        }
        parts.push_back({weight, width});
    };
    for (const auto& c : g.components()) add((1.0 - t) * c.weight, c.width);
    for (const auto& c : f.components()) add(t * c.weight, c.width);
    return CornerProfile(f.slope(), std::move(parts));
}

// ---------------------------------------------------------------------------
// Families

struct SmoothingFamily::Data {
    PolygonSpec polygon;
    std::vector<CornerProfile> profiles;
    std::size_t n = 0;
    std::vector<Vec2> vertex, dir, xhat, yhat;
    std::vector<double> ell, coord, tau, graph, delta;
    double delta_sum = 0.0;
    double perimeter = 0.0;
    Vec2 center;
    std::size_t mark_edge = 0;
    double mark_offset = 0.0;  // distance of the mark from the start of its edge
    Vec2 mark_point;

    // Calls visit(kind, index, start, length) for each piece of gamma_s in order
    // from the mark until it returns true. kind 0 = edge segment, 1 = corner arc.
    template <class F>
    void walk(double s, F&& visit) const {
        const std::size_t k = mark_edge;
        double start = 0.0;
        const double first = ell[k] - mark_offset - s * tau[(k + 1) % n];
        if (visit(0, k, start, first, true)) return;
        start += first;
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t c = (k + j) % n;
            const double corner = s * graph[c];
            if (visit(1, c, start, corner, false)) return;
            start += corner;
            const double seg = j < n ? ell[c] - s * (tau[c] + tau[(c + 1) % n]) : mark_offset - s * tau[k];
            if (visit(0, c, start, seg, false)) return;
            start += seg;
        }
    }

    CurveFrame raw_at_arc(double s, double sigma) const {
        CurveFrame out;
        bool found = false;
        walk(s, [&](int kind, std::size_t i, double start, double len, bool from_mark) {
            if (sigma >= start + len) return false;
            const double lam = std::max(0.0, sigma - start);
            if (kind == 0) {
                const Vec2 origin = from_mark ? mark_point : Vec2(vertex[i] + s * tau[i] * dir[i]);
                out.position = origin + lam * dir[i];
                out.tangent = dir[i];
                out.curvature = 0.0;
            } else {
                const CornerProfile& prof = profiles[i];
                const double u = prof.graph_point(lam / s);
                const QuinticHermite::Jet f = prof(u);
                const double g = std::hypot(1.0, f.df);
                out.position = vertex[i] + s * u * xhat[i] + s * f.f * yhat[i];
                out.tangent = (xhat[i] + f.df * yhat[i]) / g;
                out.curvature = f.d2f / (s * g * g * g);
            }
            found = true;
            return true;
        });
        if (!found) {
            // sigma rounds to the full length: the mark itself
            out.position = mark_point;
            out.tangent = dir[mark_edge];
            out.curvature = 0.0;
        }
        return out;
    }
};

namespace {

class SmoothedShape final : public CurveShape {
public:
    SmoothedShape(SmoothingFamily fam, double s) : fam_(std::move(fam)), s_(s) {}
    CurveFrame frame(double q) const override { return fam_.frame(s_, q); }
    Representation representation() const override { return Representation::smoothed_polygon; }
    bool strictly_convex() const override { return false; }

private:
    SmoothingFamily fam_;
    double s_;
};

}  // namespace

SmoothingFamily::SmoothingFamily(PolygonSpec polygon, std::vector<CornerProfile> profiles) {
    validate_polygon(polygon);
    auto d = std::make_shared<Data>();
    const std::size_t n = polygon.vertices.size();
    if (profiles.size() != n) throw Error(ErrorCode::InvalidProfile, "need one profile per vertex");
    d->n = n;
    d->vertex = polygon.vertices;
    d->dir.resize(n);
    d->ell.resize(n);
    d->coord.resize(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e = polygon.vertices[(i + 1) % n] - polygon.vertices[i];
        d->ell[i] = e.norm();
        d->dir[i] = e / d->ell[i];
        d->coord[i + 1] = d->coord[i] + d->ell[i];
    }
    d->perimeter = d->coord[n];
    d->coord.pop_back();
    const std::vector<double> phi = exterior_angles(polygon);
    d->xhat.resize(n);
    d->yhat.resize(n);
    d->tau.resize(n);
    d->graph.resize(n);
    d->delta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& din = d->dir[(i + n - 1) % n];
        const Vec2& dout = d->dir[i];
        d->xhat[i] = (din + dout).normalized();
        d->yhat[i] = perp(d->xhat[i]);
        const double a = corner_slope(phi[i]);
        const CornerProfile& prof = profiles[i];
        if (std::abs(prof.slope() - a) > 1e-9 * std::max(1.0, a)) {
            throw Error(ErrorCode::InvalidProfile,
                        "profile slope at vertex " + std::to_string(i) + " must be tan(exterior angle / 2)",
                        static_cast<long>(i));
        }
        d->tau[i] = prof.width() * std::hypot(1.0, prof.slope());
        d->graph[i] = prof.graph_length();
        d->delta[i] = prof.defect();
        d->delta_sum += d->delta[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double room = 0.5 * std::min(d->ell[(i + n - 1) % n], d->ell[i]);
        if (d->tau[i] > room) {
            throw Error(ErrorCode::InvalidWidth,
                        "corner neighborhood at vertex " + std::to_string(i) + " exceeds half an adjacent edge",
                        static_cast<long>(i));
        }
    }
    const double t0 = polygon.mark * d->perimeter;
    std::size_t k = 0;
    while (k + 1 < n && d->coord[k + 1] <= t0) ++k;
    d->mark_edge = k;
    d->mark_offset = t0 - d->coord[k];
    if (d->mark_offset < d->tau[k]) {
        throw Error(ErrorCode::MarkInCorner, "mark lies in the neighborhood of vertex " + std::to_string(k),
                    static_cast<long>(k));
    }
    if (d->ell[k] - d->mark_offset < d->tau[(k + 1) % n]) {
        throw Error(ErrorCode::MarkInCorner,
                    "mark lies in the neighborhood of vertex " + std::to_string((k + 1) % n),
                    static_cast<long>((k + 1) % n));
    }
    d->mark_point = d->vertex[k] + d->mark_offset * d->dir[k];
    d->center = polygon_centroid(polygon);
    d->polygon = std::move(polygon);
    d->profiles = std::move(profiles);
    data_ = std::move(d);
}

const PolygonSpec& SmoothingFamily::polygon() const { return data_->polygon; }
const std::vector<CornerProfile>& SmoothingFamily::profiles() const { return data_->profiles; }
const std::vector<double>& SmoothingFamily::defects() const { return data_->delta; }
double SmoothingFamily::defect_sum() const { return data_->delta_sum; }
double SmoothingFamily::perimeter() const { return data_->perimeter; }
Vec2 SmoothingFamily::center() const { return data_->center; }
double SmoothingFamily::length(double s) const { return data_->perimeter - s * data_->delta_sum; }
const std::vector<double>& SmoothingFamily::vertex_coordinates() const { return data_->coord; }

double SmoothingFamily::measured_length(double s) const {
    const Data& d = *data_;
    double total = 0.0;
    std::vector<Vec2> m(d.n), nn(d.n);
    for (std::size_t i = 0; i < d.n; ++i) {
        const CornerProfile& prof = d.profiles[i];
        const double w = prof.width();
        // corner graph endpoints, from the profile itself
        m[i] = d.vertex[i] + s * (-w * d.xhat[i] + prof(-w).f * d.yhat[i]);
        nn[i] = d.vertex[i] + s * (w * d.xhat[i] + prof(w).f * d.yhat[i]);
        auto speed = [&prof](double u) { return std::hypot(1.0, prof(u).df); };
        total += s * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(speed, -w, w, 15, 1e-12);
    }
    for (std::size_t i = 0; i < d.n; ++i) total += (m[(i + 1) % d.n] - nn[i]).norm();
    return total;
}

CurveFrame SmoothingFamily::raw_frame(double s, double q) const {
    return data_->raw_at_arc(s, wrap_unit(q) * length(s));
}

CurveFrame SmoothingFamily::frame(double s, double q) const {
    const double len = length(s);
    CurveFrame f = data_->raw_at_arc(s, wrap_unit(q) * len);
    f.position = data_->center + (f.position - data_->center) / len;
    f.curvature *= len;
    return f;
}

TableCurve SmoothingFamily::table(double s) const {
    return TableCurve(std::make_shared<SmoothedShape>(*this, s));
}

std::vector<double> SmoothingFamily::sample_parameters(double s, int uniform, int per_corner) const {
    std::vector<double> q;
    q.reserve(static_cast<std::size_t>(uniform + per_corner * static_cast<int>(data_->n)));
    for (int j = 0; j < uniform; ++j) q.push_back(static_cast<double>(j) / uniform);
    const double len = length(s);
    data_->walk(s, [&](int kind, std::size_t, double start, double piece, bool) {
        if (kind == 1 && piece > 0.0) {
            for (int j = 0; j < per_corner; ++j) {
                q.push_back((start + piece * j / (per_corner - 1)) / len);
            }
        }
        return false;
    });
    for (double& x : q) x = std::min(x, std::nextafter(1.0, 0.0));
    return q;
}

double SmoothingFamily::raw_arc_of(double s, double t) const {
    const Data& d = *data_;
    const double t0 = d.polygon.mark * d.perimeter;
    const double dist = wrap_unit((t - t0) / d.perimeter) * d.perimeter;
    double passed = 0.0;
    for (std::size_t c = 0; c < d.n; ++c) {
        const double offset = wrap_unit((d.coord[c] - t0) / d.perimeter) * d.perimeter;
        if (offset < dist) passed += d.delta[c];
    }
    return dist - s * passed;
}

bool SmoothingFamily::on_edge(double s, double t) const {
    const Data& d = *data_;
    for (std::size_t c = 0; c < d.n; ++c) {
        const double gap = std::abs(cyclic_delta(t / d.perimeter, d.coord[c] / d.perimeter)) * d.perimeter;
        if (gap < s * d.tau[c]) return false;
    }
    return true;
}

SmoothingFamily family_from_polygon(const PolygonSpec& p, double width) {
    validate_polygon(p);
    const double w = width > 0.0 ? width : default_profile_width(p);
    if (width < 0.0) throw Error(ErrorCode::InvalidWidth, "mollifier width must be positive");
    std::vector<CornerProfile> profiles;
    for (double phi : exterior_angles(p)) profiles.push_back(make_profile(corner_slope(phi), w));
    return SmoothingFamily(p, std::move(profiles));
}

SmoothingFamily family_from_polygon(const PolygonSpec& p, std::vector<CornerProfile> profiles) {
    return SmoothingFamily(p, std::move(profiles));
}

double default_profile_width(const PolygonSpec& p) {
    double shortest = std::numeric_limits<double>::infinity();
    const std::size_t n = p.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        shortest = std::min(shortest, (p.vertices[(i + 1) % n] - p.vertices[i]).norm());
    }
    return std::min(0.01, shortest / 4.0);
}

// ---------------------------------------------------------------------------
// Speeds and tails

namespace {

double max_norm(std::size_t n, const std::function<double(std::size_t)>& f) {
    std::vector<double> v(n);
    parallel_for(n, [&](std::size_t i) { v[i] = f(i); });
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

}  // namespace

double family_speed(const SmoothingFamily& fam, double s) {
    if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorCode::InvalidInput, "family_speed needs s in (0, 1]");
    const double h = std::min(1e-4, s / 10.0);
    const std::vector<double> q = fam.sample_parameters(s);
    if (s + h <= 1.0) {
        return max_norm(q.size(), [&](std::size_t i) {
            return (fam.frame(s + h, q[i]).position - fam.frame(s - h, q[i]).position).norm() / (2.0 * h);
        });
    }
    return max_norm(q.size(), [&](std::size_t i) {
        const Vec2 v = 3.0 * fam.frame(s, q[i]).position - 4.0 * fam.frame(s - h, q[i]).position +
                       fam.frame(s - 2.0 * h, q[i]).position;
        return v.norm() / (2.0 * h);
    });
}

double edge_speed_bound(const SmoothingFamily& fam) {
    const double L = fam.perimeter(), D = fam.defect_sum();
    return 2.0 * L * D / (L - D);
}

double family_speed_bound(const SmoothingFamily& fam) {
    const double L = fam.perimeter(), D = fam.defect_sum(), L1 = L - D;
    double tau = 0.0;
    for (const CornerProfile& p : fam.profiles()) tau = std::max(tau, p.width() * std::hypot(1.0, p.slope()));
    const double corner = tau + 2.0 * L * (D + L) / L1 + L * L / L1;
    const double raw = std::max(edge_speed_bound(fam), corner);
    double radius = 0.0;
    for (const Vec2& v : fam.polygon().vertices) radius = std::max(radius, (v - fam.center()).norm());
    return D / (L1 * L1) * radius + raw / L1;
}

std::vector<double> edge_midpoint_speeds(const SmoothingFamily& fam, double s) {
    const auto& coord = fam.vertex_coordinates();
    const auto& v = fam.polygon().vertices;
    const std::size_t n = v.size();
    const double h = std::min(1e-4, s / 10.0);
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = coord[i] + 0.5 * (v[(i + 1) % n] - v[i]).norm();
        const double q = fam.raw_arc_of(s, t) / fam.length(s);
        Vec2 d;
        if (s + h <= 1.0) {
            d = (fam.raw_frame(s + h, q).position - fam.raw_frame(s - h, q).position) / (2.0 * h);
        } else {
            d = (3.0 * fam.raw_frame(s, q).position - 4.0 * fam.raw_frame(s - h, q).position +
                 fam.raw_frame(s - 2.0 * h, q).position) / (2.0 * h);
        }
        out.push_back(d.norm());
    }
    return out;
}

TailReport cauchy_tail(const SmoothingFamily& fam, double s0, int K) {
    if (!(s0 > 0.0 && s0 <= 1.0) || K < 1) throw Error(ErrorCode::InvalidInput, "bad tail parameters");
    TailReport r;
    for (int k = 0; k <= K; ++k) {
        r.s.push_back(std::ldexp(s0, -k));
        r.speed.push_back(family_speed(fam, r.s.back()));
    }
    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
        const double inc = 0.5 * (r.s[k] - r.s[k + 1]) * (r.speed[k] + r.speed[k + 1]);
        r.increments.push_back(inc);
        sum += inc;
        r.partial_sums.push_back(sum);
    }
    r.remainder = r.s[K] * r.speed[K];
    r.value = sum + r.remainder;
    return r;
}

TablePath restriction_path(const SmoothingFamily& fam, double from, double to) {
    return TablePath(PathKind::smoothing_restriction,
                     [fam, from, to](double s) { return fam.table(from + (to - from) * s); });
}

// ---------------------------------------------------------------------------
// Profile independence

namespace {

bool below(const CornerProfile& g, const CornerProfile& f) {
    const double w = std::max(g.width(), f.width());
    for (int j = 0; j <= 400; ++j) {
        const double x = -w + 2.0 * w * j / 400.0;
        if (g(x).f > f(x).f + 1e-15) return false;
    }
    return true;
}

}  // namespace

GapReport profile_independence_gap(const SmoothingFamily& a, const SmoothingFamily& b, double s,
                                   int t_nodes) {
    const PolygonSpec& pa = a.polygon();
    const PolygonSpec& pb = b.polygon();
    if (pa.vertices != pb.vertices || pa.mark != pb.mark) {
        throw Error(ErrorCode::InvalidInput, "families must share the marked polygon");
    }
    if (t_nodes < 3 || t_nodes % 2 == 0) throw Error(ErrorCode::InvalidInput, "need an odd number of t nodes");
    GapReport r;
    const std::size_t n = pa.vertices.size();
    bool forward = true, backward = true;
    for (std::size_t i = 0; i < n; ++i) {
        forward = forward && below(a.profiles()[i], b.profiles()[i]);
        backward = backward && below(b.profiles()[i], a.profiles()[i]);
    }
    if (!forward && !backward) throw Error(ErrorCode::InvalidProfile, "profiles are not ordered pointwise");
    r.swapped = !forward;
    const auto& g = r.swapped ? b.profiles() : a.profiles();
    const auto& f = r.swapped ? a.profiles() : b.profiles();

    auto family_at = [&](double t) {
        std::vector<CornerProfile> mix;
        for (std::size_t i = 0; i < n; ++i) mix.push_back(blend(g[i], f[i], t));
        return SmoothingFamily(pa, std::move(mix));
    };
    constexpr double h = 1e-3;
    r.t = linspace(0.0, 1.0, static_cast<std::size_t>(t_nodes));
    for (double t : r.t) {
        const SmoothingFamily mid = family_at(t);
        const std::vector<double> q = mid.sample_parameters(s);
        double best = 0.0;
        if (t - h >= 0.0 && t + h <= 1.0) {
            const SmoothingFamily lo = family_at(t - h), hi = family_at(t + h);
            best = max_norm(q.size(), [&](std::size_t i) {
                return (hi.frame(s, q[i]).position - lo.frame(s, q[i]).position).norm() / (2.0 * h);
            });
        } else {
            const double dir = t - h < 0.0 ? 1.0 : -1.0;
            const SmoothingFamily f1 = family_at(t + dir * h), f2 = family_at(t + 2.0 * dir * h);
            best = max_norm(q.size(), [&](std::size_t i) {
                const Vec2 v = -3.0 * mid.frame(s, q[i]).position + 4.0 * f1.frame(s, q[i]).position -
                               f2.frame(s, q[i]).position;
                return v.norm() / (2.0 * h);
            });
        }
        r.integrand.push_back(best);
    }
    r.gap = simpson(r.integrand, 0.0, 1.0);
    return r;
}

GapSlope gap_slope(const SmoothingFamily& a, const SmoothingFamily& b, const std::vector<double>& s) {
    GapSlope out;
    out.s = s;
    std::vector<double> ls, lg;
    for (double x : s) {
        out.gap.push_back(profile_independence_gap(a, b, x).gap);
        ls.push_back(std::log(x));
        lg.push_back(std::log(out.gap.back()));
    }
    out.slope = fit_slope(ls, lg);
    out.pass = out.slope >= 0.9 && out.slope <= 1.1;
    return out;
}

// ---------------------------------------------------------------------------
// Positive-curvature lift

namespace {

double wrap_angle(double a) {
    a = std::fmod(a + kPi, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a - kPi;
}

}  // namespace

Lift positive_curvature_lift(const SmoothingFamily& fam, double s, double eps, int angles) {
    if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidInput, "lift radius must be nonnegative");
    const TableCurve source = fam.table(s);
    if (eps == 0.0) return {source, min_curvature(source), 0.0, 0};
    if (angles < 1024 || angles % 2 != 0) throw Error(ErrorCode::InvalidInput, "need an even number >= 1024 of angles");

    const PolygonSpec& poly = fam.polygon();
    const std::size_t n = poly.vertices.size();
    const std::vector<double> phi = exterior_angles(poly);
    const Vec2 o = fam.center();
    const double len = fam.length(s);
    std::vector<Vec2> vtx = poly.vertices, xh(n), yh(n);
    std::vector<double> axis(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 din = (vtx[i] - vtx[(i + n - 1) % n]).normalized();
        const Vec2 dout = (vtx[(i + 1) % n] - vtx[i]).normalized();
        xh[i] = (din + dout).normalized();
        yh[i] = perp(xh[i]);
        axis[i] = std::atan2(-yh[i].y(), -yh[i].x());  // outer normal at the corner apex
    }

    // support function of gamma~_s about the centroid
    std::vector<double> h(static_cast<std::size_t>(angles));
    parallel_for(h.size(), [&](std::size_t j) {
        const double theta = kTwoPi * static_cast<double>(j) / angles;
        std::size_t c = 0;
        double off = 0.0, best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double d = wrap_angle(theta - axis[i]);
            const double excess = std::abs(d) - 0.5 * phi[i];
            if (excess < best) {
                best = excess;
                c = i;
                off = d;
            }
        }
        const CornerProfile& prof = fam.profiles()[c];
        const double target = std::tan(std::clamp(off, -0.5 * phi[c], 0.5 * phi[c]));
        double u;
        if (target >= prof.slope()) {
            u = prof.width();
        } else if (target <= -prof.slope()) {
            u = -prof.width();
        } else {
            auto fdf = [&](double x) -> std::pair<double, double> {
                const QuinticHermite::Jet f = prof(x);
                return {f.df - target, f.d2f};
            };
            u = newton_in_bracket(fdf, -prof.width(), prof.width(), 0.0, 1e-15, 200).x;
        }
        const Vec2 p = vtx[c] + s * u * xh[c] + s * prof(u).f * yh[c];
        const Vec2 normal{std::cos(theta), std::sin(theta)};
        h[j] = (p - o).dot(normal) / len;
    });

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, h);
    const double m = static_cast<double>(angles);
    const int top = std::min(angles / 2 - 1, static_cast<int>(std::ceil(std::sqrt(2.0 * std::log(1e17)) / eps)));
    FourierSupportSpec support;
    support.c0 = spec[0].real() / m + eps;
    for (int k = 1; k <= top; ++k) {
        const double damp = std::exp(-0.5 * k * k * eps * eps);
        support.cos.push_back(2.0 * spec[k].real() / m * damp);
        support.sin.push_back(-2.0 * spec[k].imag() / m * damp);
    }
    TableCurve lifted = build_fourier_table(support).translated(o);

    const Vec2 start = source.position(0.0);
    constexpr int grid = 4096;
    int arg = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid; ++j) {
        const double d = (lifted.position(static_cast<double>(j) / grid) - start).norm();
        if (d < best) {
            best = d;
            arg = j;
        }
    }
    const double q0 = static_cast<double>(arg) / grid;
    const auto refined = maximize_on([&](double q) { return -(lifted.position(q) - start).norm(); },
                                     q0 - 1.0 / grid, q0 + 1.0 / grid);
    const double shift = -refined.second < best ? refined.first : q0;
    lifted = lifted.with_mark_shift(wrap_unit(shift));

    Lift out{lifted, 0.0, 0.0, top};
    out.min_curvature = min_curvature(lifted);
    out.c0_to_source = c0_distance(lifted, source);
    return out;
}

}  // namespace hb
