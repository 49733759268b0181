#pragma once

#include <functional>
#include <random>

#include "doctest.h"
#include "hb/curves.hpp"
#include "hb/error.hpp"

namespace hb::test {

inline bool throws_code(const std::function<void()>& fn, ErrorCode code) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

// h = 1 + c cos(2 theta): the ellipse-like table used across the suite.
inline FourierSupportSpec mild_ellipse_spec(double c = 0.05) { return {1.0, {0.0, c}, {}}; }

inline FourierSupportSpec disc_spec() { return {1.0, {}, {}}; }

// Random support function with harmonics 2..4; harmonic k is drawn from
// +-3 amplitude / (k^2 - 1) so the radius of curvature stays positive.
inline FourierSupportSpec random_spec(std::mt19937_64& rng, double amplitude = 0.04) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FourierSupportSpec s{1.0, {0.0}, {0.0}};
    for (int k = 2; k <= 4; ++k) {
        const double scale = 3.0 * amplitude / (k * k - 1);
        s.cos.push_back(scale * u(rng));
        s.sin.push_back(scale * u(rng));
    }
    return s;
}

}  // namespace hb::test
