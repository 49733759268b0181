#include "hb/curves.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <unsupported/Eigen/FFT>

#include "hb/error.hpp"
#include "hb/numerics.hpp"

namespace hb {

const char* to_string(Representation r) {
    switch (r) {
        case Representation::disc: return "disc";
        case Representation::fourier_support: return "fourier_support";
        case Representation::smoothed_polygon: return "smoothed_polygon";
        case Representation::reconstructed_samples: return "reconstructed_samples";
        case Representation::normal_perturbation: return "normal_perturbation";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// TableCurve

TableCurve::TableCurve(std::shared_ptr<const CurveShape> shape) : shape_(std::move(shape)) {}

CurveFrame TableCurve::frame(double q) const {
    CurveFrame f = shape_->frame(wrap_unit(q + shift_));
    const Vec2 p = f.position, t = f.tangent;
    f.position = {cos_ * p.x() - sin_ * p.y() + offset_.x(), sin_ * p.x() + cos_ * p.y() + offset_.y()};
    f.tangent = {cos_ * t.x() - sin_ * t.y(), sin_ * t.x() + cos_ * t.y()};
    return f;
}

Vec2 TableCurve::position(double q) const {
    const Vec2 p = shape_->position(wrap_unit(q + shift_));
    return {cos_ * p.x() - sin_ * p.y() + offset_.x(), sin_ * p.x() + cos_ * p.y() + offset_.y()};
}

Vec2 TableCurve::outward_normal(double q) const {
    const Vec2 t = tangent(q);
    return {t.y(), -t.x()};
}

TableCurve TableCurve::translated(const Vec2& v) const {
    TableCurve out = *this;
    out.offset_ += v;
    return out;
}

TableCurve TableCurve::rotated(double angle, const Vec2& center) const {
    TableCurve out = *this;
    const double c = std::cos(angle), s = std::sin(angle);
    out.cos_ = c * cos_ - s * sin_;
    out.sin_ = s * cos_ + c * sin_;
    const Vec2 d = offset_ - center;
    out.offset_ = Vec2{c * d.x() - s * d.y(), s * d.x() + c * d.y()} + center;
    return out;
}

TableCurve TableCurve::with_mark_shift(double r) const {
    TableCurve out = *this;
    out.shift_ = wrap_unit(shift_ + r);
    return out;
}

Vec2 TableCurve::centroid(int samples) const {
    double area2 = 0.0;
    Vec2 acc = Vec2::Zero();
    Vec2 prev = position(0.0);
    for (int j = 1; j <= samples; ++j) {
        const Vec2 cur = position(static_cast<double>(j % samples) / samples);
        const double w = cross(prev, cur);
        area2 += w;
        acc += w * (prev + cur);
        prev = cur;
    }
    return acc / (3.0 * area2);
}

std::optional<FourierSupportSpec> TableCurve::support_spec() const {
    if (cos_ != 1.0 || sin_ != 0.0 || offset_ != Vec2::Zero() || shift_ != 0.0) return std::nullopt;
    return shape_->support();
}

// ---------------------------------------------------------------------------
// Disc

namespace {

class DiscShape final : public CurveShape {
public:
    CurveFrame frame(double q) const override {
        const double a = kTwoPi * q;
        const double c = std::cos(a), s = std::sin(a);
        return {Vec2{c, s} / kTwoPi, Vec2{-s, c}, kTwoPi};
    }
    Representation representation() const override { return Representation::disc; }
    bool strictly_convex() const override { return true; }
    std::optional<FourierSupportSpec> support() const override {
        return FourierSupportSpec{1.0 / kTwoPi, {}, {}};
    }
};

}  // namespace

TableCurve disc_table() { return TableCurve(std::make_shared<DiscShape>()); }

// ---------------------------------------------------------------------------
// Support-function tables

namespace {

struct SupportPass {
    double h = 0, dh = 0, d2h = 0, arc = 0;
};

SupportPass support_pass(const FourierSupportSpec& spec, double theta) {
    SupportPass out;
    out.h = spec.c0;
    out.arc = spec.c0 * theta;
    const std::size_t n = spec.harmonics();
    const std::complex<double> step(std::cos(theta), std::sin(theta));
    std::complex<double> rot(1.0, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        // reseed periodically to keep the recurrence accurate at high k
        if (k % 128 == 0) {
            rot = {std::cos(k * theta), std::sin(k * theta)};
        } else {
            rot *= step;
        }
        const double a = k <= spec.cos.size() ? spec.cos[k - 1] : 0.0;
        const double b = k <= spec.sin.size() ? spec.sin[k - 1] : 0.0;
        const double c = rot.real(), s = rot.imag();
        const double kk = static_cast<double>(k);
        out.h += a * c + b * s;
        out.dh += kk * (b * c - a * s);
        out.d2h -= kk * kk * (a * c + b * s);
        out.arc += (1.0 - kk * kk) * (a * s + b * (1.0 - c)) / kk;
    }
    return out;
}

class SupportShape final : public CurveShape {
public:
    explicit SupportShape(FourierSupportSpec spec) : spec_(std::move(spec)) {
        const int grid = 4096;
        std::vector<double> theta = linspace(0.0, kTwoPi, grid + 1);
        std::vector<double> arc(grid + 1);
        for (int j = 0; j <= grid; ++j) arc[j] = support_pass(spec_, theta[j]).arc;
        arc.front() = 0.0;
        arc.back() = 1.0;
        inverse_ = MonotoneCubic(std::move(arc), std::move(theta));
    }

    CurveFrame frame(double q) const override {
        double theta = inverse_(q);
        SupportPass s = support_pass(spec_, theta);
        for (int it = 0; it < 4; ++it) {
            const double step = (s.arc - q) / (s.h + s.d2h);
            theta -= step;
            s = support_pass(spec_, theta);
            if (std::abs(step) < 1e-15) break;
        }
        const double c = std::cos(theta), sn = std::sin(theta);
        const Vec2 normal{c, sn}, tangent{-sn, c};
        return {s.h * normal + s.dh * tangent, tangent, 1.0 / (s.h + s.d2h)};
    }

    Representation representation() const override { return Representation::fourier_support; }
    bool strictly_convex() const override { return true; }
    std::optional<FourierSupportSpec> support() const override { return spec_; }

private:
    FourierSupportSpec spec_;
    MonotoneCubic inverse_;
};

}  // namespace

SupportJet evaluate_support(const FourierSupportSpec& spec, double theta) {
    const SupportPass s = support_pass(spec, theta);
    return {s.h, s.dh, s.d2h};
}

double support_arc_length(const FourierSupportSpec& spec, double theta) {
    return support_pass(spec, theta).arc;
}

Vec2 support_point(const FourierSupportSpec& spec, double theta) {
    const SupportPass s = support_pass(spec, theta);
    const double c = std::cos(theta), sn = std::sin(theta);
    return s.h * Vec2{c, sn} + s.dh * Vec2{-sn, c};
}

double min_radius_of_curvature(const FourierSupportSpec& spec, int grid) {
    double lo = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid; ++j) {
        const SupportPass s = support_pass(spec, kTwoPi * j / grid);
        lo = std::min(lo, s.h + s.d2h);
    }
    return lo;
}

FourierSupportSpec normalize_length(const FourierSupportSpec& spec) {
    if (!(spec.c0 > 0.0)) {
        throw Error(ErrorCode::CurvatureNotPositive, "support constant term must be positive");
    }
    const double scale = 1.0 / (kTwoPi * spec.c0);
    FourierSupportSpec out = spec;
    out.c0 *= scale;
    for (double& a : out.cos) a *= scale;
    for (double& b : out.sin) b *= scale;
    return out;
}

TableCurve build_fourier_table(const FourierSupportSpec& spec, int validation_grid) {
    FourierSupportSpec normalized = normalize_length(spec);
    const double rho = min_radius_of_curvature(normalized, validation_grid);
    if (!(rho > kCurvatureFloor)) {
        throw Error(ErrorCode::CurvatureNotPositive,
                    "min radius of curvature " + std::to_string(rho) + " on the validation grid");
    }
    return TableCurve(std::make_shared<SupportShape>(std::move(normalized)));
}

// ---------------------------------------------------------------------------
// Parametric tables

namespace {

class ParametricShape final : public CurveShape {
public:
    // Knot data in arc length: position, unit tangent and curvature vector of the
    // rescaled curve; interpolated by quintic Hermite pieces.
    ParametricShape(std::vector<double> q, std::vector<Vec2> pos, std::vector<Vec2> d1,
                    std::vector<Vec2> d2, Representation tag, bool strict)
        : q_(std::move(q)), pos_(std::move(pos)), d1_(std::move(d1)), d2_(std::move(d2)),
          tag_(tag), strict_(strict) {}

    CurveFrame frame(double q) const override {
        const Hermite h = eval(q);
        const double speed = h.d1.norm();
        return {h.d0, h.d1 / speed, cross(h.d1, h.d2) / (speed * speed * speed)};
    }

    Vec2 position(double q) const override { return eval(q).d0; }

    Representation representation() const override { return tag_; }
    bool strictly_convex() const override { return strict_; }

private:
    struct Hermite {
        Vec2 d0, d1, d2;
    };

    Hermite eval(double q) const {
        auto it = std::upper_bound(q_.begin(), q_.end(), q);
        std::size_t i = it == q_.begin() ? 0 : static_cast<std::size_t>(it - q_.begin()) - 1;
        i = std::min(i, q_.size() - 2);
        const std::size_t k = (i + 1) % pos_.size();
        const double h = q_[i + 1] - q_[i];
        const double t = (q - q_[i]) / h;
        const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
        // quintic Hermite basis and its first two t-derivatives
        const double b0 = 1 - 10 * t3 + 15 * t4 - 6 * t5, b0t = -30 * t2 + 60 * t3 - 30 * t4,
                     b0tt = -60 * t + 180 * t2 - 120 * t3;
        const double b1 = t - 6 * t3 + 8 * t4 - 3 * t5, b1t = 1 - 18 * t2 + 32 * t3 - 15 * t4,
                     b1tt = -36 * t + 96 * t2 - 60 * t3;
        const double b2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5),
                     b2t = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4),
                     b2tt = 0.5 * (2 - 18 * t + 36 * t2 - 20 * t3);
        const double b3 = 0.5 * (t3 - 2 * t4 + t5), b3t = 0.5 * (3 * t2 - 8 * t3 + 5 * t4),
                     b3tt = 0.5 * (6 * t - 24 * t2 + 20 * t3);
        const double b4 = -4 * t3 + 7 * t4 - 3 * t5, b4t = -12 * t2 + 28 * t3 - 15 * t4,
                     b4tt = -24 * t + 84 * t2 - 60 * t3;
        const double b5 = 1 - b0, b5t = -b0t, b5tt = -b0tt;
        const Vec2 &p0 = pos_[i], &p1 = pos_[k], &v0 = d1_[i], &v1 = d1_[k], &a0 = d2_[i], &a1 = d2_[k];
        const double hh = h * h;
        Hermite out;
        out.d0 = b0 * p0 + h * b1 * v0 + hh * b2 * a0 + hh * b3 * a1 + h * b4 * v1 + b5 * p1;
        out.d1 = (b0t * p0 + b5t * p1) / h + b1t * v0 + b4t * v1 + h * (b2t * a0 + b3t * a1);
        out.d2 = (b0tt * p0 + b5tt * p1) / hh + (b1tt * v0 + b4tt * v1) / h + b2tt * a0 + b3tt * a1;
        return out;
    }

    std::vector<double> q_;  // cells + 1 knots, q_.back() == 1
    std::vector<Vec2> pos_, d1_, d2_;  // one entry per cell (periodic)
    Representation tag_;
    bool strict_;
};

}  // namespace

ParametricLayout parametric_layout(int cells) {
    if (cells < 8) throw Error(ErrorCode::InvalidInput, "parametric layout needs at least 8 cells");
    ParametricLayout out;
    out.cells = cells;
    out.knots.resize(cells);
    out.nodes.reserve(16 * static_cast<std::size_t>(cells));
    out.weights.reserve(16 * static_cast<std::size_t>(cells));
    const double width = 1.0 / cells;
    for (int j = 0; j < cells; ++j) {
        out.knots[j] = j * width;
        const double mid = (j + 0.5) * width;
        for (std::size_t i = 0; i < detail::kGl16Nodes.size(); ++i) {
            const double dx = 0.5 * width * detail::kGl16Nodes[i];
            const double w = 0.5 * width * detail::kGl16Weights[i];
            out.nodes.push_back(mid - dx);
            out.weights.push_back(w);
            out.nodes.push_back(mid + dx);
            out.weights.push_back(w);
        }
    }
    return out;
}

TableCurve make_parametric_table(const ParametricLayout& layout, std::span<const CurveJet> knot_jets,
                                 std::span<const double> node_speeds, const Vec2& center,
                                 Representation tag, bool strictly_convex) {
    const int cells = layout.cells;
    if (static_cast<int>(knot_jets.size()) != cells || node_speeds.size() != layout.nodes.size()) {
        throw Error(ErrorCode::InvalidInput, "jet samples do not match the parametric layout");
    }
    std::vector<double> arc(cells + 1, 0.0);
    for (int j = 0; j < cells; ++j) {
        double sum = 0.0;
        for (int i = 0; i < 16; ++i) sum += layout.weights[16 * j + i] * node_speeds[16 * j + i];
        arc[j + 1] = arc[j] + sum;
    }
    const double length = arc.back();
    for (double& a : arc) a /= length;
    arc.back() = 1.0;
    std::vector<Vec2> pos(cells), d1(cells), d2(cells);
    for (int j = 0; j < cells; ++j) {
        const CurveJet& c = knot_jets[j];
        const double speed = c.d1.norm();
        const Vec2 t = c.d1 / speed;
        const double kappa = cross(c.d1, c.d2) / (speed * speed * speed) * length;
        pos[j] = center + (c.d0 - center) / length;
        d1[j] = t;
        d2[j] = kappa * perp(t);
    }
    return TableCurve(std::make_shared<ParametricShape>(std::move(arc), std::move(pos), std::move(d1),
                                                        std::move(d2), tag, strictly_convex));
}

TableCurve make_parametric_table(const std::function<CurveJet(double)>& jet, const Vec2& center,
                                 Representation tag, bool strictly_convex, int cells) {
    const ParametricLayout layout = parametric_layout(cells);
    std::vector<CurveJet> knots(cells);
    std::vector<double> speeds(layout.nodes.size());
    for (int j = 0; j < cells; ++j) knots[j] = jet(layout.knots[j]);
    for (std::size_t i = 0; i < speeds.size(); ++i) speeds[i] = jet(layout.nodes[i]).d1.norm();
    return make_parametric_table(layout, knots, speeds, center, tag, strictly_convex);
}

TableCurve table_from_samples(std::span<const Vec2> points) {
    const int n = static_cast<int>(points.size());
    if (n < 8) throw Error(ErrorCode::InvalidInput, "need at least 8 samples");
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> z(n), spectrum;
    for (int j = 0; j < n; ++j) z[j] = {points[j].x(), points[j].y()};
    fft.fwd(spectrum, z);
    // Coefficients of exp(2 pi i k u) for k in (-n/2, n/2]; the Nyquist term is
    // split evenly so the interpolant is real-symmetric in behaviour.
    struct Mode {
        double k;
        std::complex<double> c;
    };
    auto modes = std::make_shared<std::vector<Mode>>();
    for (int j = 0; j < n; ++j) {
        int k = j <= n / 2 ? j : j - n;
        std::complex<double> c = spectrum[j] / static_cast<double>(n);
        if (n % 2 == 0 && j == n / 2) {
            modes->push_back({static_cast<double>(k), 0.5 * c});
            modes->push_back({static_cast<double>(-k), 0.5 * c});
            continue;
        }
        modes->push_back({static_cast<double>(k), c});
    }
    auto jet = [modes](double u) {
        std::complex<double> d0(0), d1(0), d2(0);
        for (const Mode& m : *modes) {
            const double w = kTwoPi * m.k;
            const std::complex<double> e = m.c * std::polar(1.0, w * u);
            d0 += e;
            d1 += std::complex<double>(0, w) * e;
            d2 += -w * w * e;
        }
        return CurveJet{{d0.real(), d0.imag()}, {d1.real(), d1.imag()}, {d2.real(), d2.imag()}};
    };
    Vec2 center = Vec2::Zero();
    for (const Vec2& p : points) center += p;
    center /= n;
    bool strict = true;
    for (int j = 0; j < 4 * n && strict; ++j) {
        const CurveJet cj = jet(static_cast<double>(j) / (4 * n));
        strict = cross(cj.d1, cj.d2) > kCurvatureFloor * std::pow(cj.d1.norm(), 3);
    }
    return make_parametric_table(jet, center, Representation::reconstructed_samples, strict);
}

// ---------------------------------------------------------------------------

double c0_distance(const TableCurve& a, const TableCurve& b, int grid) {
    double best = -1.0;
    int arg = 0;
    for (int j = 0; j < grid; ++j) {
        const double q = static_cast<double>(j) / grid;
        const double d = (a.position(q) - b.position(q)).norm();
        if (d > best) {
            best = d;
            arg = j;
        }
    }
    const double h = 1.0 / grid;
    const double q0 = static_cast<double>(arg) / grid;
    auto dist = [&](double q) { return (a.position(q) - b.position(q)).norm(); };
    const auto refined = maximize_on(dist, q0 - h, q0 + h);
    return std::max(best, refined.second);
}

double min_curvature(const TableCurve& t, int grid) {
    double lo = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid; ++j) lo = std::min(lo, t.curvature(static_cast<double>(j) / grid));
    return lo;
}

}  // namespace hb
