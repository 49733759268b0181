#pragma once

#include <vector>

#include "hb/curves.hpp"

namespace hb {

/// Phase point of the billiard map: boundary parameter q (cyclic) and tangential
/// momentum p in (-1, 1).
struct AnnulusPoint {
    double q = 0.0;
    double p = 0.0;
};

/// Largest |p| accepted by the map solvers.
inline constexpr double kGrazingLimit = 1.0 - 1e-9;

/// Euclidean chord between the boundary points at q and Q. Throws DiagonalPoint
/// when q == Q mod 1.
double chord_length(const TableCurve& t, double q, double Q);

struct GeneratingPartials {
    double dq = 0.0;  // dF/dq = -<u, gamma'(q)>
    double dQ = 0.0;  // dF/dQ = <u, gamma'(Q)>
};
GeneratingPartials generating_partials(const TableCurve& t, double q, double Q);

/// Billiard map on the universal cover: returns Q in (q, q + 1) (not reduced)
/// together with the outgoing momentum P.
AnnulusPoint forward_map_lifted(const TableCurve& t, double q, double p);
/// Inverse on the universal cover: returns q in (Q - 1, Q).
AnnulusPoint inverse_map_lifted(const TableCurve& t, double Q, double P);

AnnulusPoint forward_map(const TableCurve& t, const AnnulusPoint& x);
AnnulusPoint inverse_map(const TableCurve& t, const AnnulusPoint& x);

/// n + 1 phase points x, psi(x), ..., psi^n(x); negative n iterates the inverse.
/// NearGrazing errors carry the failing step in Error::index().
std::vector<AnnulusPoint> iterate(const TableCurve& t, const AnnulusPoint& x, int n);

/// Central-difference Jacobian determinant of the lifted map at x.
double jacobian_determinant(const TableCurve& t, const AnnulusPoint& x, double step = 1e-5);

}  // namespace hb
