#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace hb {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Reduce to [0, 1).
inline double wrap_unit(double q) {
    double r = q - std::floor(q);
    return r >= 1.0 ? 0.0 : r;
}

// Signed representative of a cyclic difference in (-1/2, 1/2].
inline double cyclic_delta(double a, double b) {
    double d = wrap_unit(a - b);
    return d > 0.5 ? d - 1.0 : d;
}

std::vector<double> linspace(double a, double b, std::size_t n);

// Composite Simpson on equally spaced samples; `values.size()` must be odd and >= 3.
double simpson(std::span<const double> values, double a, double b);

double trapezoid(std::span<const double> x, std::span<const double> y);

// Fixed 16-point Gauss-Legendre rule on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b);

template <class F>
double gauss_legendre16(F&& f, double a, double b);

// Shape-preserving (Fritsch-Carlson) cubic interpolant of monotone data.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    std::size_t interval(double x) const;
    const std::vector<double>& knots() const { return x_; }
    const std::vector<double>& values() const { return y_; }

private:
    std::vector<double> x_, y_, d_;
};

// Piecewise quintic Hermite interpolant from values and first two derivatives
// at the knots.
class QuinticHermite {
public:
    QuinticHermite() = default;
    QuinticHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy,
                   std::vector<double> d2y);

    struct Jet {
        double f = 0.0, df = 0.0, d2f = 0.0;
    };
    Jet operator()(double x) const;
    double front() const { return x_.front(); }
    double back() const { return x_.back(); }

private:
    std::vector<double> x_, y_, dy_, d2y_;
};

struct RootResult {
    double x = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Newton iteration safeguarded by a sign-change bracket [lo, hi]. Any step that
// leaves the bracket, or fails to halve the bracket fast enough, is replaced by
// bisection. `fdf(x)` returns {f(x), f'(x)}.
RootResult bracketed_newton(const std::function<std::pair<double, double>(double)>& fdf,
                            double lo, double hi, double guess, double ftol,
                            int max_iter = 200);

// Same iteration when the bracket signs are known a priori: f(neg) < 0 < f(pos).
// The endpoints themselves are never evaluated.
RootResult newton_in_bracket(const std::function<std::pair<double, double>(double)>& fdf,
                             double neg, double pos, double guess, double ftol,
                             int max_iter = 200);

// Local maximization on [a, b] (Brent); returns {argmax, max}.
std::pair<double, double> maximize_on(const std::function<double(double)>& f, double a,
                                      double b);

// Trigonometric interpolant of N uniform samples f(j / N) of a 1-periodic
// function, with the Nyquist term split symmetrically.
class PeriodicInterpolant {
public:
    PeriodicInterpolant() = default;
    explicit PeriodicInterpolant(std::span<const double> samples);

    struct Jet {
        double f = 0.0, df = 0.0, d2f = 0.0;
    };
    Jet operator()(double u) const;
    std::size_t size() const { return n_; }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    std::vector<double> a_, b_;  // a_[k-1] cos(2 pi k u) + b_[k-1] sin(2 pi k u)
};

// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------

namespace detail {
inline constexpr std::array<double, 8> kGl16Nodes = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
inline constexpr std::array<double, 8> kGl16Weights = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};
}  // namespace detail

template <class F>
double gauss_legendre16(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < detail::kGl16Nodes.size(); ++i) {
        const double dx = half * detail::kGl16Nodes[i];
        sum += detail::kGl16Weights[i] * (f(mid - dx) + f(mid + dx));
    }
    return sum * half;
}

}  // namespace hb
