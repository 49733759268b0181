#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "hb/curves.hpp"

namespace hb {

inline constexpr std::size_t kDefaultCellBudget = std::size_t{1} << 24;

/// Samples on the periodic grid (Z/m)^n, row-major (last axis fastest).
class GridFunction {
public:
    /// Throws InvalidInput (n not in {2, 3}, m < 3, wrong size, non-finite
    /// values) or ResolutionTooLarge (m^n above the budget).
    GridFunction(int n, int m, std::vector<double> values, std::size_t budget = kDefaultCellBudget);

    static GridFunction constant(int n, int m, double c);

    int dimension() const { return n_; }
    int resolution() const { return m_; }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::vector<int> coordinates(std::size_t i) const;
    std::size_t index(const std::vector<int>& coords) const;  // coordinates taken mod m

    GridFunction shifted(double c) const;

private:
    int n_, m_;
    std::vector<double> values_;
};

/// F(j_1 / m, ..., j_n / m) on every grid tuple; a chord between equal
/// coordinates contributes 0.
GridFunction sample_orbit_functional(const TableCurve& t, int n, int m, std::size_t budget = kDefaultCellBudget);

struct Bar {
    int degree = 0;
    double birth = 0.0;
    double death = std::numeric_limits<double>::infinity();
    bool infinite() const { return death == std::numeric_limits<double>::infinity(); }
    bool operator==(const Bar&) const = default;
};

/// Bars sorted by degree, then birth, then death. Zero-length bars are dropped.
struct Barcode {
    int dimension = 0;
    std::vector<Bar> bars;

    std::vector<Bar> degree(int d) const;
    int infinite_count(int d) const;
};

/// Persistence of the lower-star filtration of the periodic cubical complex.
/// Ties are ordered by cell index, or by a pseudo-random permutation drawn from
/// `tie_shuffle` when given.
Barcode sublevel_barcode(const GridFunction& g, std::optional<std::uint64_t> tie_shuffle = std::nullopt);

/// Bottleneck distance between the degree-d bars. Infinite bars are matched
/// among themselves (+inf if their counts differ); finite bars may be matched to
/// the diagonal at cost (death - birth) / 2.
double bottleneck_distance(const Barcode& a, const Barcode& b, int degree);

struct StabilityReport {
    int n = 0, m = 0;
    std::vector<double> bottleneck;  // per degree 0..n
    double functional_gap = 0.0;     // functional_gap(ta, tb, n, m)
    double grid_sup = 0.0;           // max |F_a - F_b| over all grid tuples
    double slack = 0.0;              // max within-cell oscillation of either function
    bool pass = false;
};

/// Throws StabilityViolated if some bottleneck exceeds functional_gap + slack.
StabilityReport stability_check(const TableCurve& ta, const TableCurve& tb, int n, int m);

}  // namespace hb
