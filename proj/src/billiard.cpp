#include "hb/billiard.hpp"

#include <cmath>
#include <string>

#include "hb/error.hpp"
#include "hb/numerics.hpp"

namespace hb {

namespace {

void check_off_diagonal(double q, double Q) {
    const double d = wrap_unit(q - Q);
    if (std::min(d, 1.0 - d) < 1e-12) {
        throw Error(ErrorCode::DiagonalPoint, "chord endpoints coincide at q = " + std::to_string(q));
    }
}

void check_momentum(const TableCurve& t, double p) {
    if (!t.strictly_convex()) {
        throw Error(ErrorCode::NotStrictlyConvex, "table has flat pieces; lift it first");
    }
    if (!(std::abs(p) <= kGrazingLimit)) {
        throw Error(ErrorCode::NearGrazing, "|p| = " + std::to_string(std::abs(p)) + " beyond 1 - 1e-9");
    }
}

// Q in (q, q+1) with <u(Q), gamma'(q)> = p. The residual is strictly decreasing
// from 1 - p to -1 - p across the interval.
double solve_forward(const TableCurve& t, double q, const Vec2& origin, const Vec2& tangent, double p) {
    auto residual = [&](double Q) -> std::pair<double, double> {
        const CurveFrame f = t.frame(Q);
        const Vec2 chord = f.position - origin;
        const double len = chord.norm();
        const Vec2 u = chord / len;
        const Vec2 du = (f.tangent - f.tangent.dot(u) * u) / len;
        return {u.dot(tangent) - p, du.dot(tangent)};
    };
    constexpr double delta = 1e-13;
    const double guess = q + std::acos(std::clamp(p, -1.0, 1.0)) / kPi;
    const RootResult r = newton_in_bracket(residual, q + 1.0 - delta, q + delta, guess, 1e-12);
    if (!r.converged) {
        throw Error(ErrorCode::NearGrazing, "forward solve stalled at residual " + std::to_string(r.residual));
    }
    return r.x;
}

}  // namespace

double chord_length(const TableCurve& t, double q, double Q) {
    check_off_diagonal(q, Q);
    return (t.position(q) - t.position(Q)).norm();
}

GeneratingPartials generating_partials(const TableCurve& t, double q, double Q) {
    check_off_diagonal(q, Q);
    const CurveFrame a = t.frame(q), b = t.frame(Q);
    const Vec2 u = (b.position - a.position).normalized();
    return {-u.dot(a.tangent), u.dot(b.tangent)};
}

AnnulusPoint forward_map_lifted(const TableCurve& t, double q, double p) {
    check_momentum(t, p);
    const CurveFrame a = t.frame(q);
    const double Q = solve_forward(t, q, a.position, a.tangent, p);
    const CurveFrame b = t.frame(Q);
    const Vec2 u = (b.position - a.position).normalized();
    return {Q, u.dot(b.tangent)};
}

AnnulusPoint inverse_map_lifted(const TableCurve& t, double Q, double P) {
    // time reversal R(q, p) = (q, -p) conjugates the map to its inverse
    const AnnulusPoint back = forward_map_lifted(t, Q, -P);
    return {back.q - 1.0, -back.p};
}

AnnulusPoint forward_map(const TableCurve& t, const AnnulusPoint& x) {
    const AnnulusPoint y = forward_map_lifted(t, x.q, x.p);
    return {wrap_unit(y.q), y.p};
}

AnnulusPoint inverse_map(const TableCurve& t, const AnnulusPoint& x) {
    const AnnulusPoint y = inverse_map_lifted(t, x.q, x.p);
    return {wrap_unit(y.q), y.p};
}

std::vector<AnnulusPoint> iterate(const TableCurve& t, const AnnulusPoint& x, int n) {
    std::vector<AnnulusPoint> out;
    out.reserve(static_cast<std::size_t>(std::abs(n)) + 1);
    out.push_back({wrap_unit(x.q), x.p});
    for (int i = 0; i < std::abs(n); ++i) {
        try {
            out.push_back(n > 0 ? forward_map(t, out.back()) : inverse_map(t, out.back()));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NearGrazing) {
                throw Error(ErrorCode::NearGrazing, "iterate step " + std::to_string(i + 1), i + 1);
            }
            throw;
        }
    }
    return out;
}

double jacobian_determinant(const TableCurve& t, const AnnulusPoint& x, double step) {
    const AnnulusPoint qp = forward_map_lifted(t, x.q + step, x.p);
    const AnnulusPoint qm = forward_map_lifted(t, x.q - step, x.p);
    const AnnulusPoint pp = forward_map_lifted(t, x.q, x.p + step);
    const AnnulusPoint pm = forward_map_lifted(t, x.q, x.p - step);
    const double dQdq = (qp.q - qm.q) / (2 * step), dPdq = (qp.p - qm.p) / (2 * step);
    const double dQdp = (pp.q - pm.q) / (2 * step), dPdp = (pp.p - pm.p) / (2 * step);
    return dQdq * dPdp - dQdp * dPdq;
}

}  // namespace hb
