#include "hb/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "hb/error.hpp"
#include "hb/numerics.hpp"
#include "hb/parallel.hpp"

namespace hb {

const char* to_string(PathKind k) {
    switch (k) {
        case PathKind::translation: return "translation";
        case PathKind::support_interp: return "support_interp";
        case PathKind::normal_perturbation: return "normal_perturbation";
        case PathKind::smoothing_restriction: return "smoothing_restriction";
    }
    return "unknown";
}

TablePath::TablePath(PathKind kind, SliceFn slice, VelocityFn analytic_velocity)
    : kind_(kind), slice_(std::move(slice)), velocity_(std::move(analytic_velocity)) {}

PathSlice TablePath::slice(double s) const {
    TableCurve table = slice_(s);
    if (velocity_) {
        auto v = velocity_(s, table);
        return PathSlice(std::move(table), std::move(v));
    }
    const double h = kStep;
    if (s - h >= 0.0 && s + h <= 1.0) {
        auto minus = std::make_shared<TableCurve>(slice_(s - h));
        auto plus = std::make_shared<TableCurve>(slice_(s + h));
        return PathSlice(std::move(table), [minus, plus, h](double q) -> Vec2 {
            return (plus->position(q) - minus->position(q)) / (2.0 * h);
        });
    }
    const double dir = s - h < 0.0 ? 1.0 : -1.0;
    auto t0 = std::make_shared<TableCurve>(table);
    auto t1 = std::make_shared<TableCurve>(slice_(s + dir * h));
    auto t2 = std::make_shared<TableCurve>(slice_(s + 2.0 * dir * h));
    return PathSlice(std::move(table), [t0, t1, t2, h, dir](double q) -> Vec2 {
        return dir * (-3.0 * t0->position(q) + 4.0 * t1->position(q) - t2->position(q)) / (2.0 * h);
    });
}

// ---------------------------------------------------------------------------
// Path constructions

TablePath translation_path(const TableCurve& t, const Vec2& v) {
    return TablePath(
        PathKind::translation, [t, v](double s) { return t.translated(s * v); },
        [v](double, const TableCurve&) { return std::function<Vec2(double)>([v](double) { return v; }); });
}

namespace {

FourierSupportSpec padded(const FourierSupportSpec& s, std::size_t n) {
    FourierSupportSpec out = s;
    out.cos.resize(n, 0.0);
    out.sin.resize(n, 0.0);
    return out;
}

FourierSupportSpec lerp(const FourierSupportSpec& a, const FourierSupportSpec& b, double s) {
    FourierSupportSpec out = a;
    out.c0 = (1.0 - s) * a.c0 + s * b.c0;
    for (std::size_t k = 0; k < a.cos.size(); ++k) {
        out.cos[k] = (1.0 - s) * a.cos[k] + s * b.cos[k];
        out.sin[k] = (1.0 - s) * a.sin[k] + s * b.sin[k];
    }
    return out;
}

}  // namespace

TablePath support_interp_path(const FourierSupportSpec& a_in, const FourierSupportSpec& b_in,
                              int s_grid, int theta_grid) {
    const std::size_t n = std::max(a_in.harmonics(), b_in.harmonics());
    const FourierSupportSpec a = padded(a_in, n), b = padded(b_in, n);
    for (int j = 0; j < s_grid; ++j) {
        const double s = s_grid > 1 ? static_cast<double>(j) / (s_grid - 1) : 0.0;
        const FourierSupportSpec h = lerp(a, b, s);
        const double rho = h.c0 > 0.0 ? min_radius_of_curvature(normalize_length(h), theta_grid) : -1.0;
        if (!(rho > kCurvatureFloor)) {
            throw Error(ErrorCode::CurvatureNotPositive,
                        "interpolated support function fails at s = " + std::to_string(s), j);
        }
    }
    auto slice = [a, b](double s) { return build_fourier_table(lerp(a, b, s)); };
    // h^_s = h_s / (2 pi c0_s); D = d h^_s / ds has zero constant term, and
    // d gamma_s / ds = D n + D' T - l_D(theta) T, l_D the arc-length functional of D.
    auto velocity = [a, b](double s, const TableCurve&) {
        const FourierSupportSpec h = lerp(a, b, s);
        const double c = h.c0, dc = b.c0 - a.c0;
        auto d = std::make_shared<FourierSupportSpec>(h);
        d->c0 = 0.0;
        for (std::size_t k = 0; k < h.cos.size(); ++k) {
            d->cos[k] = ((b.cos[k] - a.cos[k]) - h.cos[k] * dc / c) / (kTwoPi * c);
            d->sin[k] = ((b.sin[k] - a.sin[k]) - h.sin[k] * dc / c) / (kTwoPi * c);
        }
        auto table = std::make_shared<TableCurve>(build_fourier_table(h));
        return std::function<Vec2(double)>([d, table](double q) -> Vec2 {
            const Vec2 t = table->tangent(q);
            const double theta = std::atan2(-t.x(), t.y());
            const SupportJet j = evaluate_support(*d, theta);
            const double arc = support_arc_length(*d, theta);
            const Vec2 normal{t.y(), -t.x()};
            return j.h * normal + (j.dh - arc) * t;
        });
    };
    return TablePath(PathKind::support_interp, slice, velocity);
}

namespace {

struct PerturbationBase {
    ParametricLayout layout;
    Vec2 center;
    // per point, knots first then quadrature nodes
    std::vector<Vec2> pos, tan, nrm;
    std::vector<double> kappa, dkappa, f, df, d2f;

    void jet(std::size_t i, double s, CurveJet& out) const {
        const double g = 1.0 + s * f[i] * kappa[i];
        out.d0 = pos[i] + s * f[i] * nrm[i];
        out.d1 = g * tan[i] + s * df[i] * nrm[i];
        out.d2 = (2.0 * s * df[i] * kappa[i] + s * f[i] * dkappa[i]) * tan[i] +
                 (s * d2f[i] - g * kappa[i]) * nrm[i];
    }
};

}  // namespace

NormalPerturbation normal_perturbation_path(const TableCurve& t, std::span<const double> samples,
                                            int s_grid, int q_grid) {
    if (samples.size() < 256) {
        throw Error(ErrorCode::InvalidInput, "normal perturbation needs at least 256 samples");
    }
    if (!t.strictly_convex()) throw Error(ErrorCode::NotStrictlyConvex, "base table has flat pieces");
    const PeriodicInterpolant f(samples);
    auto base = std::make_shared<PerturbationBase>();
    base->layout = parametric_layout(std::max(2048, q_grid));
    base->center = t.centroid();
    const std::size_t knots = base->layout.knots.size();
    std::vector<double> u = base->layout.knots;
    u.insert(u.end(), base->layout.nodes.begin(), base->layout.nodes.end());
    const std::size_t m = u.size();
    base->pos.resize(m);
    base->tan.resize(m);
    base->nrm.resize(m);
    base->kappa.resize(m);
    base->dkappa.resize(m);
    base->f.resize(m);
    base->df.resize(m);
    base->d2f.resize(m);
    parallel_for(m, [&](std::size_t i) {
        constexpr double e = 1e-5;
        const CurveFrame fr = t.frame(u[i]);
        base->pos[i] = fr.position;
        base->tan[i] = fr.tangent;
        base->nrm[i] = {fr.tangent.y(), -fr.tangent.x()};
        base->kappa[i] = fr.curvature;
        base->dkappa[i] = (t.curvature(u[i] + e) - t.curvature(u[i] - e)) / (2.0 * e);
        const PeriodicInterpolant::Jet j = f(u[i]);
        base->f[i] = j.f;
        base->df[i] = j.df;
        base->d2f[i] = j.d2f;
    });

    NormalPerturbation out{TablePath(PathKind::normal_perturbation, nullptr)};
    double kmax = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        out.max_f = std::max(out.max_f, std::abs(base->f[i]));
        out.max_df = std::max(out.max_df, std::abs(base->df[i]));
        kmax = std::max(kmax, base->kappa[i]);
        out.radius = std::max(out.radius, (base->pos[i] - base->center).norm());
    }
    out.curvature_max = kmax;
    out.min_length = 1.0 - kmax * out.max_f;
    if (!(out.min_length > 0.0)) {
        throw Error(ErrorCode::PerturbationTooLarge,
                    "max curvature * max|f| = " + std::to_string(kmax * out.max_f) + " >= 1");
    }

    for (int j = 0; j < s_grid; ++j) {
        const double s = s_grid > 1 ? static_cast<double>(j) / (s_grid - 1) : 0.0;
        CurveJet c;
        for (std::size_t i = 0; i < knots; ++i) {
            base->jet(i, s, c);
            if (!(cross(c.d1, c.d2) > kCurvatureFloor * std::pow(c.d1.norm(), 3))) {
                throw Error(ErrorCode::CurvatureNotPositive,
                            "perturbed curve loses convexity at s = " + std::to_string(s), j);
            }
        }
    }

    const double mm = out.max_f + out.max_df;
    const double kbar = std::max(1.0, kmax);
    const double lmin = out.min_length;
    out.constant = 1.0 / lmin + (out.radius + mm) * kbar / (lmin * lmin) + 2.0 * kbar / lmin;
    out.bound = out.constant * mm;

    auto slice = [base, knots](double s) {
        std::vector<CurveJet> jets(knots);
        for (std::size_t i = 0; i < knots; ++i) base->jet(i, s, jets[i]);
        std::vector<double> speeds(base->layout.nodes.size());
        for (std::size_t i = 0; i < speeds.size(); ++i) {
            const std::size_t k = knots + i;
            const double g = 1.0 + s * base->f[k] * base->kappa[k];
            speeds[i] = std::hypot(g, s * base->df[k]);
        }
        return make_parametric_table(base->layout, jets, speeds, base->center,
                                     Representation::normal_perturbation, true);
    };
    out.path = TablePath(PathKind::normal_perturbation, slice);
    return out;
}

// ---------------------------------------------------------------------------
// Quadratures

namespace {

QuadratureReport report_from(std::vector<double> integrand) {
    QuadratureReport r;
    const int n = static_cast<int>(integrand.size());
    r.s_nodes = n;
    if (n == 1) {
        r.value = integrand[0];
    } else if (n % 2 == 1) {
        r.value = simpson(integrand, 0.0, 1.0);
        if ((n - 1) % 4 == 0 && n >= 5) {
            std::vector<double> coarse;
            for (int i = 0; i < n; i += 2) coarse.push_back(integrand[i]);
            r.error_estimate = std::abs(r.value - simpson(coarse, 0.0, 1.0));
        }
    } else {
        const std::vector<double> s = linspace(0.0, 1.0, n);
        r.value = trapezoid(s, integrand);
    }
    r.integrand = std::move(integrand);
    return r;
}

std::vector<double> s_nodes_of(int n) {
    if (n < 1) throw Error(ErrorCode::InvalidInput, "need at least one s node");
    return linspace(0.0, 1.0, static_cast<std::size_t>(n));
}

double sup_speed(const PathSlice& slice, int q_nodes) {
    std::vector<double> speed(q_nodes);
    parallel_for(q_nodes, [&](std::size_t i) {
        speed[i] = slice.velocity(static_cast<double>(i) / q_nodes).norm();
    });
    const auto it = std::max_element(speed.begin(), speed.end());
    const double best = *it;
    if (best == 0.0) return 0.0;
    const double q0 = static_cast<double>(it - speed.begin()) / q_nodes;
    const double h = 1.0 / q_nodes;
    const auto refined = maximize_on([&](double q) { return slice.velocity(q).norm(); }, q0 - h, q0 + h);
    return std::max(best, refined.second);
}

}  // namespace

QuadratureReport path_geometric_length(const TablePath& p, int s_nodes, int q_nodes) {
    const std::vector<double> s = s_nodes_of(s_nodes);
    std::vector<double> integrand(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) integrand[k] = sup_speed(p.slice(s[k]), q_nodes);
    return report_from(std::move(integrand));
}

// ---------------------------------------------------------------------------
// Hamiltonian

namespace {

struct ChordSpeed {
    double dFds = 0.0;
    double bound = 0.0;
};

ChordSpeed chord_speed(const PathSlice& slice, double Q, double P) {
    const double q = inverse_map_lifted(slice.table(), Q, P).q;
    const Vec2 a = slice.table().position(q), b = slice.table().position(Q);
    const Vec2 u = (b - a).normalized();
    const Vec2 dv = slice.velocity(Q) - slice.velocity(q);
    return {u.dot(dv), dv.norm()};
}

}  // namespace

double hamiltonian_value(const PathSlice& slice, double Q, double P) {
    return -chord_speed(slice, Q, P).dFds;
}

double hamiltonian_bound(const PathSlice& slice, double Q, double P) {
    return chord_speed(slice, Q, P).bound;
}

double HamiltonianField::operator()(double s, double Q, double P) const {
    return hamiltonian_value(path_.slice(s), Q, P);
}

HoferReport hofer_length(const TablePath& p, const HoferGrid& grid) {
    if (grid.q_nodes < 1 || grid.p_nodes < 2 || !(grid.p_max > 0.0 && grid.p_max < 1.0)) {
        throw Error(ErrorCode::InvalidInput, "bad Hofer grid");
    }
    const std::vector<double> s = s_nodes_of(grid.s_nodes);
    const std::vector<double> P = linspace(-grid.p_max, grid.p_max, grid.p_nodes);
    HoferReport out;
    out.grid = grid;
    std::vector<double> osc(s.size());
    out.max_h.resize(s.size());
    out.min_h.resize(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        const PathSlice slice = p.slice(s[k]);
        std::vector<double> hi(grid.q_nodes), lo(grid.q_nodes);
        parallel_for(grid.q_nodes, [&](std::size_t i) {
            const double Q = static_cast<double>(i) / grid.q_nodes;
            double mx = -std::numeric_limits<double>::infinity(), mn = -mx;
            for (double pj : P) {
                const double h = hamiltonian_value(slice, Q, pj);
                mx = std::max(mx, h);
                mn = std::min(mn, h);
            }
            hi[i] = mx;
            lo[i] = mn;
        });
        out.max_h[k] = *std::max_element(hi.begin(), hi.end());
        out.min_h[k] = *std::min_element(lo.begin(), lo.end());
        osc[k] = out.max_h[k] - out.min_h[k];
    }
    out.length = report_from(std::move(osc));
    return out;
}

QuadratureReport generating_speed_integral(const TablePath& p, int s_nodes, int torus_nodes) {
    const std::vector<double> s = s_nodes_of(s_nodes);
    std::vector<double> integrand(s.size());
    const std::size_t n = static_cast<std::size_t>(torus_nodes);
    for (std::size_t k = 0; k < s.size(); ++k) {
        const PathSlice slice = p.slice(s[k]);
        std::vector<Vec2> pos(n), vel(n);
        parallel_for(n, [&](std::size_t i) {
            const double q = static_cast<double>(i) / n;
            pos[i] = slice.table().position(q);
            vel[i] = slice.velocity(q);
        });
        std::vector<double> row(n, 0.0);
        parallel_for(n, [&](std::size_t i) {
            double best = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const Vec2 u = (pos[j] - pos[i]).normalized();
                best = std::max(best, std::abs(u.dot(vel[j] - vel[i])));
            }
            row[i] = best;
        });
        integrand[k] = *std::max_element(row.begin(), row.end());
    }
    return report_from(std::move(integrand));
}

ComparisonCertificate verify_comparison(const TablePath& p, const HoferGrid& grid, int q_nodes) {
    ComparisonCertificate c;
    c.grid = grid;
    c.q_nodes = q_nodes;
    c.l_H = hofer_length(p, grid).length.value;
    c.l_B = path_geometric_length(p, grid.s_nodes, q_nodes).value;
    c.generating_integral = generating_speed_integral(p, grid.s_nodes, grid.q_nodes).value;
    if (c.l_B > 0.0) {
        c.ratio = c.l_H / c.l_B;
    } else {
        c.ratio = c.l_H > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    c.pass = c.ratio <= 4.0 * (1.0 + kComparisonSlack);
    return c;
}

double hamilton_jacobi_residual(const TablePath& p, double s, std::span<const AnnulusPoint> samples,
                                double h, double gradient_step) {
    const TableCurve plus = p.at(s + h), minus = p.at(s - h);
    const PathSlice slice = p.slice(s);
    std::vector<double> residual(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) {
        const AnnulusPoint& x = samples[i];
        const AnnulusPoint yp = forward_map_lifted(plus, x.q, x.p);
        const AnnulusPoint ym = forward_map_lifted(minus, x.q, x.p);
        const AnnulusPoint y = forward_map_lifted(slice.table(), x.q, x.p);
        const double dQ = (yp.q - ym.q) / (2.0 * h);
        const double dP = (yp.p - ym.p) / (2.0 * h);
        const double d = gradient_step;
        const double hQ = (hamiltonian_value(slice, y.q + d, y.p) - hamiltonian_value(slice, y.q - d, y.p)) / (2.0 * d);
        const double hP = (hamiltonian_value(slice, y.q, y.p + d) - hamiltonian_value(slice, y.q, y.p - d)) / (2.0 * d);
        residual[i] = std::hypot(dQ - hP, dP + hQ);
    });
    return residual.empty() ? 0.0 : *std::max_element(residual.begin(), residual.end());
}

DistanceBracket bracket_dB(const TablePath& p, int s_nodes, int q_nodes) {
    DistanceBracket b;
    b.lower = c0_distance(p.at(0.0), p.at(1.0));
    b.upper = path_geometric_length(p, s_nodes, q_nodes).value;
    if (b.lower > b.upper * (1.0 + 1e-6) + 1e-15) {
        throw Error(ErrorCode::BracketInverted, "C0 distance " + std::to_string(b.lower) +
                                                    " exceeds path length " + std::to_string(b.upper));
    }
    return b;
}

}  // namespace hb
