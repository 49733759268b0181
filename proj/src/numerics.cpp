#include "hb/numerics.hpp"

#include <algorithm>
#include <complex>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <unsupported/Eigen/FFT>

#include "hb/error.hpp"

namespace hb {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::CurvatureNotPositive: return "CurvatureNotPositive";
        case ErrorCode::DiagonalPoint: return "DiagonalPoint";
        case ErrorCode::NearGrazing: return "NearGrazing";
        case ErrorCode::NotStrictlyConvex: return "NotStrictlyConvex";
        case ErrorCode::InvalidPolygon: return "InvalidPolygon";
        case ErrorCode::InvalidProfile: return "InvalidProfile";
        case ErrorCode::InvalidWidth: return "InvalidWidth";
        case ErrorCode::MarkInCorner: return "MarkInCorner";
        case ErrorCode::PerturbationTooLarge: return "PerturbationTooLarge";
        case ErrorCode::BracketInverted: return "BracketInverted";
        case ErrorCode::BoundViolated: return "BoundViolated";
        case ErrorCode::InconsistentChords: return "InconsistentChords";
        case ErrorCode::ResolutionTooLarge: return "ResolutionTooLarge";
        case ErrorCode::StabilityViolated: return "StabilityViolated";
        case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = a;
        return v;
    }
    const double step = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + step * static_cast<double>(i);
    v.back() = b;
    return v;
}

double simpson(std::span<const double> values, double a, double b) {
    const std::size_t n = values.size();
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("simpson: need an odd number >= 3 of samples");
    const double h = (b - a) / static_cast<double>(n - 1);
    double sum = values.front() + values.back();
    for (std::size_t i = 1; i + 1 < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
    return sum * h / 3.0;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) sum += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    return sum;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
    return gauss_legendre16(f, a, b);
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("MonotoneCubic: bad sizes");
    std::vector<double> slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) slope[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    d_.assign(n, 0.0);
    d_[0] = slope[0];
    d_[n - 1] = slope[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (slope[i - 1] * slope[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            // weighted harmonic mean (Fritsch-Butland)
            const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            const double w0 = 2.0 * h1 + h0, w1 = h1 + 2.0 * h0;
            d_[i] = (w0 + w1) / (w0 / slope[i - 1] + w1 / slope[i]);
        }
    }
}

std::size_t MonotoneCubic::interval(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * d_[i] +
           (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * d_[i + 1];
}

QuinticHermite::QuinticHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy,
                               std::vector<double> d2y)
    : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)), d2y_(std::move(d2y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n || dy_.size() != n || d2y_.size() != n) {
        throw std::invalid_argument("QuinticHermite: bad sizes");
    }
}

QuinticHermite::Jet QuinticHermite::operator()(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    i = std::min(i, x_.size() - 2);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double b0 = 1 - 10 * t3 + 15 * t4 - 6 * t5, b0t = -30 * t2 + 60 * t3 - 30 * t4,
                 b0tt = -60 * t + 180 * t2 - 120 * t3;
    const double b1 = t - 6 * t3 + 8 * t4 - 3 * t5, b1t = 1 - 18 * t2 + 32 * t3 - 15 * t4,
                 b1tt = -36 * t + 96 * t2 - 60 * t3;
    const double b2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5), b2t = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4),
                 b2tt = 0.5 * (2 - 18 * t + 36 * t2 - 20 * t3);
    const double b3 = 0.5 * (t3 - 2 * t4 + t5), b3t = 0.5 * (3 * t2 - 8 * t3 + 5 * t4),
                 b3tt = 0.5 * (6 * t - 24 * t2 + 20 * t3);
    const double b4 = -4 * t3 + 7 * t4 - 3 * t5, b4t = -12 * t2 + 28 * t3 - 15 * t4,
                 b4tt = -24 * t + 84 * t2 - 60 * t3;
    const double dp = y_[i + 1] - y_[i];
    const double v0 = dy_[i], v1 = dy_[i + 1], a0 = d2y_[i], a1 = d2y_[i + 1];
    const double hh = h * h;
    Jet out;
    out.f = y_[i] + (1 - b0) * dp + h * (b1 * v0 + b4 * v1) + hh * (b2 * a0 + b3 * a1);
    out.df = -b0t * dp / h + b1t * v0 + b4t * v1 + h * (b2t * a0 + b3t * a1);
    out.d2f = -b0tt * dp / hh + (b1tt * v0 + b4tt * v1) / h + b2tt * a0 + b3tt * a1;
    return out;
}

RootResult bracketed_newton(const std::function<std::pair<double, double>(double)>& fdf,
                            double lo, double hi, double guess, double ftol, int max_iter) {
    const double flo = fdf(lo).first;
    const double fhi = fdf(hi).first;
    if (flo == 0.0) return {lo, 0.0, 0, true};
    if (fhi == 0.0) return {hi, 0.0, 0, true};
    if ((flo > 0.0) == (fhi > 0.0)) {
        RootResult out;
        out.x = std::abs(flo) < std::abs(fhi) ? lo : hi;
        out.residual = std::min(std::abs(flo), std::abs(fhi));
        return out;
    }
    return flo < 0.0 ? newton_in_bracket(fdf, lo, hi, guess, ftol, max_iter)
                     : newton_in_bracket(fdf, hi, lo, guess, ftol, max_iter);
}

RootResult newton_in_bracket(const std::function<std::pair<double, double>(double)>& fdf,
                             double neg, double pos, double guess, double ftol, int max_iter) {
    RootResult out;
    const double lo = std::min(neg, pos), hi = std::max(neg, pos);
    double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
    double dx_old = hi - lo;
    double dx = dx_old;
    auto [f, df] = fdf(x);
    int polish = 0;
    for (int it = 1; it <= max_iter; ++it) {
        out.iterations = it;
        if (f == 0.0) break;
        const bool newton_leaves = ((x - pos) * df - f) * ((x - neg) * df - f) >= 0.0;
        const bool newton_slow = std::abs(2.0 * f) > std::abs(dx_old * df);
        if (newton_leaves || newton_slow || df == 0.0) {
            dx_old = dx;
            dx = 0.5 * (pos - neg);
            x = neg + dx;
        } else {
            dx_old = dx;
            dx = f / df;
            x -= dx;
        }
        std::tie(f, df) = fdf(x);
        if (f < 0.0) neg = x; else pos = x;
        // One extra Newton step after the residual test passes sharpens x to
        // roughly machine precision without changing the stopping rule.
        if (std::abs(f) < ftol && ++polish >= 2) break;
        if (std::abs(pos - neg) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    out.x = x;
    out.residual = std::abs(f);
    out.converged = out.residual < ftol;
    return out;
}

std::pair<double, double> maximize_on(const std::function<double(double)>& f, double a,
                                      double b) {
    auto neg = [&](double x) { return -f(x); };
    auto r = boost::math::tools::brent_find_minima(neg, a, b, 50);
    return {r.first, -r.second};
}

PeriodicInterpolant::PeriodicInterpolant(std::span<const double> samples) : n_(samples.size()) {
    if (n_ < 2) throw std::invalid_argument("PeriodicInterpolant: need at least 2 samples");
    Eigen::FFT<double> fft;
    std::vector<double> in(samples.begin(), samples.end());
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, in);
    const double n = static_cast<double>(n_);
    mean_ = spec[0].real() / n;
    const std::size_t top = n_ / 2;
    a_.resize(top);
    b_.resize(top);
    for (std::size_t k = 1; k <= top; ++k) {
        const std::complex<double> c = spec[k] / n;
        const bool nyquist = n_ % 2 == 0 && k == top;
        a_[k - 1] = nyquist ? c.real() : 2.0 * c.real();
        b_[k - 1] = nyquist ? 0.0 : -2.0 * c.imag();
    }
}

PeriodicInterpolant::Jet PeriodicInterpolant::operator()(double u) const {
    Jet out{mean_, 0.0, 0.0};
    const double theta = kTwoPi * u;
    const std::complex<double> step = std::polar(1.0, theta);
    std::complex<double> rot(1.0, 0.0);
    for (std::size_t k = 1; k <= a_.size(); ++k) {
        if (k % 128 == 0) rot = std::polar(1.0, static_cast<double>(k) * theta);
        else rot *= step;
        const double w = kTwoPi * static_cast<double>(k);
        const double c = rot.real(), s = rot.imag();
        const double a = a_[k - 1], b = b_[k - 1];
        out.f += a * c + b * s;
        out.df += w * (b * c - a * s);
        out.d2f -= w * w * (a * c + b * s);
    }
    return out;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace hb
