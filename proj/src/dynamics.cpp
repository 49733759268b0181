#include "hb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "hb/error.hpp"
#include "hb/homotopy.hpp"
#include "hb/numerics.hpp"
#include "hb/parallel.hpp"

namespace hb {

namespace {

struct ChordJet {
    double c, dq, dQ, qq, QQ, qQ;
};

ChordJet chord_jet(const CurveFrame& a, const CurveFrame& b) {
    const Vec2 d = b.position - a.position;
    const double c = d.norm();
    const Vec2 u = d / c;
    const double ua = u.dot(a.tangent), ub = u.dot(b.tangent);
    ChordJet j;
    j.c = c;
    j.dq = -ua;
    j.dQ = ub;
    j.qq = (1.0 - ua * ua) / c - a.curvature * u.dot(perp(a.tangent));
    j.QQ = (1.0 - ub * ub) / c + b.curvature * u.dot(perp(b.tangent));
    j.qQ = -(a.tangent.dot(b.tangent) - ua * ub) / c;
    return j;
}

std::vector<CurveFrame> frames_of(const TableCurve& t, const std::vector<double>& qs) {
    const std::size_t n = qs.size();
    if (n < 2) throw Error(ErrorCode::InvalidInput, "orbit tuples need n >= 2");
    std::vector<CurveFrame> f;
    f.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (wrap_unit(qs[i] - qs[(i + 1) % n]) == 0.0)
            throw Error(ErrorCode::DiagonalPoint, "consecutive orbit points coincide", static_cast<long>(i));
        f.push_back(t.frame(qs[i]));
    }
    return f;
}

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double phase_distance(const AnnulusPoint& a, const AnnulusPoint& b) {
    return std::hypot(cyclic_delta(a.q, b.q), a.p - b.p);
}

int turns(const std::vector<double>& qs) {
    double sum = 0.0;
    for (std::size_t i = 0; i < qs.size(); ++i) sum += wrap_unit(qs[(i + 1) % qs.size()] - qs[i]);
    return static_cast<int>(std::lround(sum));
}

// Tuple wrapped to [0, 1), oriented so that the winding is at most n / 2 and
// cyclically shifted to start at its smallest entry.
std::vector<double> canonical(std::vector<double> qs) {
    const int n = static_cast<int>(qs.size());
    for (double& q : qs) q = wrap_unit(q);
    if (2 * turns(qs) > n) std::reverse(qs.begin(), qs.end());
    std::rotate(qs.begin(), std::min_element(qs.begin(), qs.end()), qs.end());
    return qs;
}

// Damped Newton on grad F with an eigenvalue-truncated inverse Hessian.
std::vector<double> torus_newton(const TableCurve& t, std::vector<double> qs, int max_iter) {
    const int n = static_cast<int>(qs.size());
    auto norm2 = [](const std::vector<double>& g) {
        return std::sqrt(std::inner_product(g.begin(), g.end(), g.begin(), 0.0));
    };
    std::vector<double> g = orbit_gradient(t, qs);
    double gn = norm2(g);
    for (int it = 0; it < max_iter && gn > 1e-15; ++it) {
        const std::vector<double> h = orbit_hessian(t, qs);
        Eigen::MatrixXd H(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) H(i, j) = h[i * n + j];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        const Eigen::VectorXd lam = es.eigenvalues();
        const double top = lam.cwiseAbs().maxCoeff();
        Eigen::VectorXd gv = Eigen::Map<const Eigen::VectorXd>(g.data(), n);
        Eigen::VectorXd step = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < n; ++k) {
            if (std::abs(lam(k)) <= 1e-9 * top) continue;
            const Eigen::VectorXd v = es.eigenvectors().col(k);
            step -= v.dot(gv) / lam(k) * v;
        }
        const double cap = step.cwiseAbs().maxCoeff();
        if (cap > 0.05) step *= 0.05 / cap;

        bool moved = false;
        for (double alpha = 1.0; alpha > 1e-3; alpha *= 0.5) {
            std::vector<double> trial(qs);
            for (int i = 0; i < n; ++i) trial[i] += alpha * step(i);
            try {
                std::vector<double> gt = orbit_gradient(t, trial);
                const double gtn = norm2(gt);
                if (gtn < gn) {
                    qs = std::move(trial);
                    g = std::move(gt);
                    gn = gtn;
                    moved = true;
                    break;
                }
            } catch (const Error&) {
            }
        }
        if (!moved) break;
    }
    return qs;
}

std::vector<PeriodicOrbitCandidate> deduplicate(std::vector<PeriodicOrbitCandidate> found) {
    std::vector<PeriodicOrbitCandidate> out;
    for (PeriodicOrbitCandidate& c : found) {
        if (!c.accepted) continue;
        bool dup = false;
        for (const PeriodicOrbitCandidate& o : out) {
            if (c.degenerate_family && o.degenerate_family && c.winding == o.winding &&
                std::abs(c.action - o.action) < 1e-8) {
                dup = true;
                break;
            }
            if (orbit_class_distance(c, o) < kOrbitDedupTol) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const PeriodicOrbitCandidate& a, const PeriodicOrbitCandidate& b) {
        if (a.winding != b.winding) return a.winding < b.winding;
        if (a.action != b.action) return a.action < b.action;
        return a.qs < b.qs;
    });
    return out;
}

std::vector<int> coprime_windings(int n) {
    std::vector<int> ks;
    for (int k = 1; 2 * k <= n; ++k)
        if (std::gcd(k, n) == 1) ks.push_back(k);
    return ks;
}

}  // namespace

double orbit_functional(const TableCurve& t, const std::vector<double>& qs) {
    const auto f = frames_of(t, qs);
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sum += (f[(i + 1) % f.size()].position - f[i].position).norm();
    return sum;
}

std::vector<double> orbit_gradient(const TableCurve& t, const std::vector<double>& qs) {
    const auto f = frames_of(t, qs);
    const std::size_t n = f.size();
    std::vector<double> g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const ChordJet j = chord_jet(f[i], f[(i + 1) % n]);
        g[i] += j.dq;
        g[(i + 1) % n] += j.dQ;
    }
    return g;
}

std::vector<double> orbit_hessian(const TableCurve& t, const std::vector<double>& qs) {
    const auto f = frames_of(t, qs);
    const std::size_t n = f.size();
    std::vector<double> h(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = (i + 1) % n;
        const ChordJet j = chord_jet(f[i], f[k]);
        h[i * n + i] += j.qq;
        h[k * n + k] += j.QQ;
        h[i * n + k] += j.qQ;
        h[k * n + i] += j.qQ;
    }
    return h;
}

AnnulusPoint orbit_phase_point(const TableCurve& t, const std::vector<double>& qs) {
    const auto f = frames_of(t, qs);
    const Vec2 u = (f[1].position - f[0].position).normalized();
    return {wrap_unit(qs[0]), u.dot(f[0].tangent)};
}

PeriodicOrbitCandidate classify_orbit(const TableCurve& t, std::vector<double> qs) {
    PeriodicOrbitCandidate c;
    c.qs = canonical(std::move(qs));
    const int n = static_cast<int>(c.qs.size());
    c.winding = turns(c.qs);
    c.action = orbit_functional(t, c.qs);
    c.residual = sup_norm(orbit_gradient(t, c.qs));

    const std::vector<double> h = orbit_hessian(t, c.qs);
    Eigen::MatrixXd H(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) H(i, j) = h[i * n + j];
    const Eigen::VectorXd lam = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H, Eigen::EigenvaluesOnly).eigenvalues();
    c.min_hessian_eigenvalue = lam.cwiseAbs().minCoeff();
    c.degenerate_family = c.min_hessian_eigenvalue < 1e-6 * lam.cwiseAbs().maxCoeff();

    try {
        const AnnulusPoint x = orbit_phase_point(t, c.qs);
        c.fixed_point_error = phase_distance(iterate(t, x, n).back(), x);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NearGrazing) throw;
        c.fixed_point_error = std::numeric_limits<double>::infinity();
    }
    c.accepted = c.residual < kOrbitResidualTol && c.fixed_point_error < kFixedPointTol;
    return c;
}

double orbit_class_distance(const PeriodicOrbitCandidate& a, const PeriodicOrbitCandidate& b) {
    const std::size_t n = a.qs.size();
    if (b.qs.size() != n) return std::numeric_limits<double>::infinity();
    std::vector<double> x(a.qs), y(b.qs);
    for (double& q : x) q = wrap_unit(q);
    for (double& q : y) q = wrap_unit(q);
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n; ++s) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(cyclic_delta(x[i], y[(i + s) % n])));
        best = std::min(best, d);
    }
    return best;
}

std::vector<PeriodicOrbitCandidate> find_periodic_orbits(const TableCurve& t, int n, int random_seeds,
                                                         std::uint64_t seed) {
    if (n < 2) throw Error(ErrorCode::InvalidInput, "period must be at least 2");
    std::vector<std::vector<double>> seeds;
    for (int k : coprime_windings(n)) {
        for (int j = 0; j < 8; ++j) {
            std::vector<double> qs(n);
            for (int i = 0; i < n; ++i) qs[i] = j / (8.0 * n) + static_cast<double>(i * k) / n;
            seeds.push_back(std::move(qs));
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (static_cast<int>(seeds.size()) < random_seeds + static_cast<int>(coprime_windings(n).size()) * 8) {
        std::vector<double> qs(n);
        for (double& q : qs) q = u(rng);
        bool spread = true;
        for (int i = 0; i < n; ++i) spread = spread && std::abs(cyclic_delta(qs[(i + 1) % n], qs[i])) > 0.02;
        if (spread) seeds.push_back(std::move(qs));
    }

    std::vector<PeriodicOrbitCandidate> found(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        try {
            found[i] = classify_orbit(t, torus_newton(t, seeds[i], 80));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DiagonalPoint) throw;
        }
    });
    return deduplicate(std::move(found));
}

std::vector<PeriodicOrbitCandidate> fixed_point_orbits(const TableCurve& t, int n, int starts) {
    if (n < 2) throw Error(ErrorCode::InvalidInput, "period must be at least 2");
    struct Start {
        AnnulusPoint x;
        int k;
    };
    std::vector<Start> list;
    for (int k : coprime_windings(n))
        for (int j = 0; j < starts; ++j) list.push_back({{static_cast<double>(j) / starts, std::cos(kPi * k / n)}, k});

    auto residual = [&](const AnnulusPoint& x, int k) {
        AnnulusPoint y{x.q, x.p};
        for (int i = 0; i < n; ++i) y = forward_map_lifted(t, y.q, y.p);
        return Eigen::Vector2d(y.q - x.q - k, y.p - x.p);
    };

    std::vector<PeriodicOrbitCandidate> found(list.size());
    parallel_for(list.size(), [&](std::size_t idx) {
        AnnulusPoint x = list[idx].x;
        const int k = list[idx].k;
        try {
            Eigen::Vector2d r = residual(x, k);
            const double h = 1e-7;
            for (int it = 0; it < 60 && r.norm() > 1e-15; ++it) {
                Eigen::Matrix2d J;
                J.col(0) = (residual({x.q + h, x.p}, k) - residual({x.q - h, x.p}, k)) / (2 * h);
                J.col(1) = (residual({x.q, x.p + h}, k) - residual({x.q, x.p - h}, k)) / (2 * h);
                Eigen::Vector2d step = -J.completeOrthogonalDecomposition().solve(r);
                const double cap = step.cwiseAbs().maxCoeff();
                if (cap > 0.05) step *= 0.05 / cap;
                bool moved = false;
                for (double alpha = 1.0; alpha > 1e-3; alpha *= 0.5) {
                    const AnnulusPoint trial{x.q + alpha * step(0), std::clamp(x.p + alpha * step(1), -0.999, 0.999)};
                    const Eigen::Vector2d rt = residual(trial, k);
                    if (rt.norm() < r.norm()) {
                        x = trial;
                        r = rt;
                        moved = true;
                        break;
                    }
                }
                if (!moved) break;
            }
            std::vector<double> qs;
            AnnulusPoint y = x;
            for (int i = 0; i < n; ++i) {
                qs.push_back(y.q);
                y = forward_map_lifted(t, y.q, y.p);
            }
            found[idx] = classify_orbit(t, qs);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NearGrazing && e.code() != ErrorCode::DiagonalPoint) throw;
        }
    });
    return deduplicate(std::move(found));
}

FunctionalGap functional_gap(const TableCurve& a, const TableCurve& b, int n, int grid) {
    if (n < 2 || grid < 4) throw Error(ErrorCode::InvalidInput, "functional_gap needs n >= 2 and grid >= 4");
    double total = std::pow(static_cast<double>(grid), n);
    if (total > 16777216.0) throw Error(ErrorCode::ResolutionTooLarge, "torus grid above 2^24 tuples");

    std::vector<Vec2> pa(grid), pb(grid);
    double c0 = c0_distance(a, b);
    for (int j = 0; j < grid; ++j) {
        const double q = static_cast<double>(j) / grid;
        pa[j] = a.position(q);
        pb[j] = b.position(q);
        c0 = std::max(c0, (pa[j] - pb[j]).norm());
    }
    auto near = [grid](int i, int j) {
        const int d = ((j - i) % grid + grid) % grid;
        return d <= 1 || d >= grid - 1;
    };

    const long inner = static_cast<long>(total) / grid;
    std::vector<double> best(grid, -1.0);
    std::vector<long> arg(grid, -1);
    parallel_for(grid, [&](std::size_t first) {
        std::vector<int> idx(n);
        for (long r = 0; r < inner; ++r) {
            idx[0] = static_cast<int>(first);
            long rest = r;
            for (int i = n - 1; i >= 1; --i) {
                idx[i] = static_cast<int>(rest % grid);
                rest /= grid;
            }
            bool skip = false;
            for (int i = 0; i < n && !skip; ++i) skip = near(idx[i], idx[(i + 1) % n]);
            if (skip) continue;
            double fa = 0.0, fb = 0.0;
            for (int i = 0; i < n; ++i) {
                const int j = idx[i], k = idx[(i + 1) % n];
                fa += (pa[k] - pa[j]).norm();
                fb += (pb[k] - pb[j]).norm();
            }
            const double d = std::abs(fa - fb);
            if (d > best[first]) {
                best[first] = d;
                arg[first] = r;
            }
        }
    });

    FunctionalGap out;
    out.c0 = c0;
    out.bound = 2.0 * n * c0;
    int where = -1;
    for (int j = 0; j < grid; ++j) {
        if (best[j] > out.gap || where < 0) {
            if (arg[j] < 0) continue;
            out.gap = std::max(0.0, best[j]);
            where = j;
        }
    }
    if (where >= 0) {
        out.argmax.assign(n, 0.0);
        out.argmax[0] = static_cast<double>(where) / grid;
        long rest = arg[where];
        for (int i = n - 1; i >= 1; --i) {
            out.argmax[i] = static_cast<double>(rest % grid) / grid;
            rest /= grid;
        }
    }
    if (out.gap > out.bound * (1.0 + 1e-9) + 1e-14)
        throw Error(ErrorCode::BoundViolated, "sup |F_a - F_b| exceeds 2 n sup |a - b|");
    return out;
}

AlmostPeriodicityReport almost_periodicity_experiment(const TableCurve& a, const TableCurve& b,
                                                      const PeriodicOrbitCandidate& orbit, int n, double radius,
                                                      int samples, std::uint64_t seed, bool with_bracket) {
    if (samples < 1 || radius < 0.0) throw Error(ErrorCode::InvalidInput, "need samples >= 1 and radius >= 0");
    AlmostPeriodicityReport rep;
    const AnnulusPoint x0 = orbit_phase_point(a, orbit.qs);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    rep.cloud.push_back(x0);
    while (static_cast<int>(rep.cloud.size()) < samples) {
        const double r = radius * std::sqrt(u(rng)), th = kTwoPi * u(rng);
        rep.cloud.push_back({wrap_unit(x0.q + r * std::cos(th)), x0.p + r * std::sin(th)});
    }
    rep.image_a.resize(samples);
    rep.image_b.resize(samples);
    parallel_for(samples, [&](std::size_t i) {
        rep.image_a[i] = iterate(a, rep.cloud[i], n).back();
        rep.image_b[i] = iterate(b, rep.cloud[i], n).back();
    });
    std::vector<double> nearest(samples);
    parallel_for(samples, [&](std::size_t i) {
        double m = std::numeric_limits<double>::infinity();
        for (const AnnulusPoint& y : rep.image_a) m = std::min(m, phase_distance(rep.image_b[i], y));
        nearest[i] = m;
    });
    rep.min_distance = *std::min_element(nearest.begin(), nearest.end());
    rep.center_displacement = phase_distance(rep.image_b[0], rep.image_a[0]);

    const auto sa = a.support_spec(), sb = b.support_spec();
    if (with_bracket && sa && sb) rep.d_b_upper = bracket_dB(support_interp_path(*sa, *sb)).upper;
    return rep;
}

ChordData chord_data(const TableCurve& table, int samples) {
    if (samples < 4 || samples % 2) throw Error(ErrorCode::InvalidInput, "chord samples must be even and >= 4");
    ChordData d;
    d.diameter = chord_length(table, 0.0, 0.5);
    for (int j = 1; j < samples; ++j) {
        if (2 * j == samples) continue;
        const double t = static_cast<double>(j) / samples;
        d.t.push_back(t);
        d.from_start.push_back(chord_length(table, 0.0, t));
        d.to_half.push_back(chord_length(table, t, 0.5));
    }
    return d;
}

Reconstruction reconstruct_table(const ChordData& data) {
    const double d = data.diameter;
    if (!(d > 0.0)) throw Error(ErrorCode::InconsistentChords, "F(0, 1/2) must be positive");
    if (data.from_start.size() != data.t.size() || data.to_half.size() != data.t.size())
        throw Error(ErrorCode::InvalidInput, "chord arrays differ in length");
    Reconstruction r;
    r.t = data.t;
    r.half = {d, 0.0};
    constexpr double slack = 1e-9;
    for (std::size_t j = 0; j < data.t.size(); ++j) {
        const double r1 = data.from_start[j], r2 = data.to_half[j];
        if (r1 + r2 < d - slack || std::abs(r1 - r2) > d + slack || !(r1 > 0.0) || !(r2 > 0.0))
            throw Error(ErrorCode::InconsistentChords, "chord circles do not intersect", static_cast<long>(j));
        const double x = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
        const double y = std::sqrt(std::max(0.0, r1 * r1 - x * x));
        r.points.push_back({x, data.t[j] < 0.5 ? -y : y});
    }
    return r;
}

Reconstruction align_to(const Reconstruction& r, const TableCurve& table) {
    const Vec2 s = table.position(0.0), h = table.position(0.5);
    const Vec2 from = r.half - r.start, to = h - s;
    const double angle = std::atan2(to.y(), to.x()) - std::atan2(from.y(), from.x());
    const Eigen::Rotation2Dd rot(angle);
    Reconstruction out = r;
    auto move = [&](const Vec2& p) -> Vec2 { return s + rot * (p - r.start); };
    for (Vec2& p : out.points) p = move(p);
    out.start = move(r.start);
    out.half = move(r.half);
    return out;
}

double reconstruction_error(const Reconstruction& r, const TableCurve& table) {
    const Reconstruction a = align_to(r, table);
    double err = (a.half - table.position(0.5)).norm();
    for (std::size_t j = 0; j < a.t.size(); ++j) err = std::max(err, (a.points[j] - table.position(a.t[j])).norm());
    return err;
}

}  // namespace hb
