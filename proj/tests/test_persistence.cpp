#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hb/dynamics.hpp"
#include "hb/numerics.hpp"
#include "hb/persistence.hpp"
#include "support.hpp"

using namespace hb;
using hb::test::mild_ellipse_spec;
using hb::test::throws_code;

namespace {

int binomial(int n, int k) {
    int r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void check_betti(const Barcode& b) {
    for (int d = 0; d <= b.dimension; ++d) CHECK(b.infinite_count(d) == binomial(b.dimension, d));
}

// Exhaustive bottleneck over all bijections between A + diagonal copies and
// B + diagonal copies.
double brute_bottleneck(const std::vector<Bar>& A, const std::vector<Bar>& B) {
    const std::size_t na = A.size(), nb = B.size(), N = na + nb;
    std::vector<int> perm(N);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
        // left i < na is A_i, otherwise a diagonal slot; right j < nb is B_j, otherwise a diagonal slot
        for (std::size_t i = 0; i < N; ++i) {
            const std::size_t j = perm[i];
            double c = 0.0;
            if (i < na && j < nb)
                c = std::max(std::abs(A[i].birth - B[j].birth), std::abs(A[i].death - B[j].death));
            else if (i < na)
                c = (A[i].death - A[i].birth) / 2.0;
            else if (j < nb)
                c = (B[j].death - B[j].birth) / 2.0;
            worst = std::max(worst, c);
        }
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

Barcode random_code(std::mt19937_64& rng, int bars) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Barcode c;
    c.dimension = 2;
    for (int i = 0; i < bars; ++i) {
        const double b = std::round(u(rng) * 64) / 64, len = std::round(u(rng) * 32) / 64 + 1.0 / 64;
        c.bars.push_back({1, b, b + len});
    }
    return c;
}

GridFunction random_grid(std::mt19937_64& rng, int n, int m, int levels) {
    std::uniform_int_distribution<int> u(0, levels - 1);
    std::size_t cells = 1;
    for (int i = 0; i < n; ++i) cells *= m;
    std::vector<double> v(cells);
    for (double& x : v) x = u(rng);
    return GridFunction(n, m, v);
}

}  // namespace

TEST_CASE("grid functions") {
    const GridFunction g = sample_orbit_functional(disc_table(), 2, 64);
    double top = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto c = g.coordinates(i);
        CHECK(g.index(c) == i);
        const double closed = 2.0 / kPi * std::abs(std::sin(kPi * (c[1] - c[0]) / 64.0));
        CHECK(std::abs(g[i] - closed) < 1e-12);
        top = std::max(top, g[i]);
    }
    CHECK(std::abs(top - 2.0 / kPi) < 1e-15);
    CHECK(std::abs(g[g.index({5, 37})] - top) < 1e-15);

    const GridFunction c = GridFunction::constant(3, 5, 1.5);
    for (double x : c.values()) CHECK(x == 1.5);

    CHECK(throws_code([] { sample_orbit_functional(disc_table(), 3, 257); }, ErrorCode::ResolutionTooLarge));
    CHECK(throws_code([] { GridFunction(4, 8, std::vector<double>(4096)); }, ErrorCode::InvalidInput));
    CHECK(throws_code([] { GridFunction(2, 2, std::vector<double>(4)); }, ErrorCode::InvalidInput));
    CHECK(throws_code([] { GridFunction(2, 4, std::vector<double>(15)); }, ErrorCode::InvalidInput));
}

TEST_CASE("barcodes of constant functions") {
    for (int n : {2, 3}) {
        const Barcode b = sublevel_barcode(GridFunction::constant(n, 4, 0.7));
        check_betti(b);
        for (const Bar& bar : b.bars) {
            CHECK(bar.infinite());
            CHECK(bar.birth == 0.7);
        }
        CHECK(b.bars.size() == (n == 2 ? 4u : 8u));
    }
}

TEST_CASE("barcode of a height function on the torus") {
    // f(i, j) = cos(2 pi i / m) + 2 cos(2 pi j / m): min, two saddles and max on
    // their own levels, so every bar is infinite and born at a critical value.
    const int m = 16;
    std::vector<double> v(m * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) v[i * m + j] = std::cos(kTwoPi * i / m) + 2.0 * std::cos(kTwoPi * j / m);
    const Barcode b = sublevel_barcode(GridFunction(2, m, v));
    check_betti(b);
    CHECK(b.bars.size() == 4);
    CHECK(b.degree(0)[0].birth == -3.0);
    CHECK(b.degree(2)[0].birth == 3.0);
    const auto h1 = b.degree(1);
    CHECK(std::abs(h1[0].birth + 1.0) < 1e-15);
    CHECK(std::abs(h1[1].birth - 1.0) < 1e-15);
}

TEST_CASE("barcode of the disc orbit functional") {
    const Barcode b64 = sublevel_barcode(sample_orbit_functional(disc_table(), 2, 64));
    const Barcode b128 = sublevel_barcode(sample_orbit_functional(disc_table(), 2, 128));
    check_betti(b64);
    check_betti(b128);
    for (const Bar& bar : b64.degree(0))
        if (bar.infinite()) CHECK(bar.birth == 0.0);
    // one grid step moves values by at most the chord of 1/64 twice
    const double cell = 2.0 * 2.0 / kPi * std::sin(kPi / 64.0);
    for (int d = 0; d <= 2; ++d) CHECK(bottleneck_distance(b64, b128, d) <= cell);
}

TEST_CASE("filtration shift and tie breaking") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = trial < 4 ? 2 : 3;
        const GridFunction g = random_grid(rng, n, n == 2 ? 7 : 4, 5);
        const Barcode b = sublevel_barcode(g);
        check_betti(b);
        const Barcode s = sublevel_barcode(g.shifted(0.25));
        REQUIRE(s.bars.size() == b.bars.size());
        for (std::size_t i = 0; i < b.bars.size(); ++i) {
            CHECK(s.bars[i].birth == b.bars[i].birth + 0.25);
            CHECK(s.bars[i].death == b.bars[i].death + 0.25);
        }
        for (std::uint64_t seed : {1u, 2u, 3u}) CHECK(sublevel_barcode(g, seed).bars == b.bars);
    }
}

TEST_CASE("bottleneck distance") {
    std::mt19937_64 rng(4);
    const Barcode b = random_code(rng, 4);
    CHECK(bottleneck_distance(b, b, 1) == 0.0);
    Barcode shifted = b;
    for (Bar& x : shifted.bars) x.birth += 0.125, x.death += 0.125;
    CHECK(bottleneck_distance(b, shifted, 1) == std::min(0.125, [&] {
              double longest = 0.0;
              for (const Bar& x : b.bars) longest = std::max(longest, (x.death - x.birth) / 2.0);
              return longest;
          }()));

    for (int trial = 0; trial < 60; ++trial) {
        const int na = trial % 4, nb = (trial / 4) % 4;
        if (na + nb > 6 || na + nb == 0) continue;
        const Barcode a = random_code(rng, na), c = random_code(rng, nb);
        CHECK(bottleneck_distance(a, c, 1) == brute_bottleneck(a.degree(1), c.degree(1)));
    }

    Barcode inf1, inf2;
    inf1.bars = {{0, 0.0}, {0, 0.5, 0.75}};
    inf2.bars = {{0, 0.1}};
    CHECK(bottleneck_distance(inf1, inf2, 0) == std::max(0.1, 0.125));
    inf2.bars.push_back({0, 0.2});
    CHECK(std::isinf(bottleneck_distance(inf1, inf2, 0)));

    // discrete stability on random grids
    for (int trial = 0; trial < 5; ++trial) {
        const GridFunction f = random_grid(rng, 2, 6, 6);
        std::vector<double> v(f.values());
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        double sup = 0.0;
        for (double& x : v) {
            x += u(rng);
        }
        for (std::size_t i = 0; i < v.size(); ++i) sup = std::max(sup, std::abs(v[i] - f[i]));
        const Barcode bf = sublevel_barcode(f), bg = sublevel_barcode(GridFunction(2, 6, v));
        for (int d = 0; d <= 2; ++d) CHECK(bottleneck_distance(bf, bg, d) <= sup);
    }
}

TEST_CASE("stability check") {
    const TableCurve disc = disc_table();
    const StabilityReport same = stability_check(disc, disc, 2, 32);
    for (double b : same.bottleneck) CHECK(b == 0.0);
    const StabilityReport moved = stability_check(disc, disc.translated({0.03, 0.01}), 2, 32);
    for (double b : moved.bottleneck) CHECK(b < 1e-12);

    const StabilityReport r = stability_check(disc, build_fourier_table(mild_ellipse_spec()), 2, 64);
    CHECK(r.pass);
    CHECK(r.bottleneck.size() == 3);
    for (double b : r.bottleneck) {
        CHECK(b <= r.functional_gap + r.slack);
        CHECK(b <= r.grid_sup);
    }
    CHECK(r.functional_gap > 0.0);
}
