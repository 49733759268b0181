#include "hb/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "hb/billiard.hpp"
#include "hb/dynamics.hpp"
#include "hb/error.hpp"
#include "hb/homotopy.hpp"
#include "hb/numerics.hpp"
#include "hb/persistence.hpp"
#include "hb/smoothing.hpp"

namespace hb {

namespace {

// Harmonics 2..4 with amplitude 3 a / (k^2 - 1), which keeps h + h'' > 0.
FourierSupportSpec random_support(std::mt19937_64& rng, double amplitude = 0.04) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FourierSupportSpec s{1.0, {0.0}, {0.0}};
    for (int k = 2; k <= 4; ++k) {
        const double scale = 3.0 * amplitude / (k * k - 1);
        s.cos.push_back(scale * u(rng));
        s.sin.push_back(scale * u(rng));
    }
    return s;
}

FourierSupportSpec mild_ellipse(double c = 0.05) { return {1.0, {0.0, c}, {}}; }

PolygonSpec unit_square() { return {{{0.0, 0.0}, {0.25, 0.0}, {0.25, 0.25}, {0.0, 0.25}}, 0.125}; }

CriterionResult start(int id, const char* name) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    return r;
}

struct SeededPath {
    TablePath path;
    bool translation;
};

std::vector<SeededPath> seeded_paths(const VerifyOptions& o) {
    std::mt19937_64 rng(o.seed);
    std::vector<SeededPath> out;
    const int support = o.quick ? 4 : 20, translations = o.quick ? 2 : 5;
    for (int i = 0; i < support; ++i) {
        const FourierSupportSpec a = random_support(rng), b = random_support(rng);
        out.push_back({support_interp_path(a, b), false});
    }
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    for (int i = 0; i < translations; ++i) {
        const TableCurve t = build_fourier_table(random_support(rng));
        out.push_back({translation_path(t, {u(rng), u(rng)}), true});
    }
    return out;
}

double brute_bottleneck(const std::vector<Bar>& A, const std::vector<Bar>& B) {
    const std::size_t na = A.size(), nb = B.size(), N = na + nb;
    std::vector<std::size_t> perm(N);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
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

bool betti_ok(const Barcode& b) {
    int binom = 1;
    for (int d = 0; d <= b.dimension; ++d) {
        if (b.infinite_count(d) != binom) return false;
        binom = binom * (b.dimension - d) / (d + 1);
    }
    return true;
}

}  // namespace

CriterionResult check_disc_closed_form(const VerifyOptions& o) {
    CriterionResult r = start(1, "disc closed form");
    const TableCurve disc = disc_table();
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> uq(0.0, 1.0), up(-0.999, 0.999);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const AnnulusPoint x{uq(rng), up(rng)};
        const AnnulusPoint y = forward_map(disc, x);
        const double Q = x.q + std::acos(x.p) / kPi;
        worst = std::max({worst, std::abs(cyclic_delta(y.q, Q)), std::abs(y.p - x.p)});
    }
    r.metrics = {{"max_error", worst}};
    r.pass = worst < 1e-10;
    return r;
}

CriterionResult check_symplecticity(const VerifyOptions& o) {
    CriterionResult r = start(2, "symplecticity");
    std::mt19937_64 rng(o.seed);
    const TableCurve tables[] = {disc_table(), build_fourier_table(random_support(rng))};
    double worst[2] = {0.0, 0.0};
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j) {
                const AnnulusPoint x{i / 20.0, -0.95 + 1.9 * j / 19.0};
                worst[k] = std::max(worst[k], std::abs(jacobian_determinant(tables[k], x) - 1.0));
            }
    r.metrics = {{"disc_max_det_error", worst[0]}, {"fourier_max_det_error", worst[1]}};
    r.pass = worst[0] < 1e-6 && worst[1] < 1e-6;
    return r;
}

CriterionResult check_comparison_certificates(const VerifyOptions& o) {
    CriterionResult r = start(3, "Hofer length bounded by four times the geometric length");
    const HoferGrid grid = o.quick ? HoferGrid{9, 48, 23, 1.0 - 1.0 / 128.0} : HoferGrid{17, 128, 63, 1.0 - 1.0 / 128.0};
    const int q_nodes = o.quick ? 512 : 1024;
    double worst = 0.0;
    int failures = 0, count = 0;
    for (const SeededPath& sp : seeded_paths(o)) {
        const ComparisonCertificate c = verify_comparison(sp.path, grid, q_nodes);
        ++count;
        const bool ok = c.l_H <= 4.0 * c.l_B * 1.01;
        failures += !ok;
        worst = std::max(worst, c.ratio);
    }
    r.metrics = {{"paths", count}, {"max_ratio", worst}, {"failures", failures}};
    r.pass = failures == 0;
    return r;
}

CriterionResult check_hamiltonian(const VerifyOptions& o) {
    CriterionResult r = start(4, "Hamiltonian boundary decay and Hamilton-Jacobi residual");
    const TablePath p = support_interp_path({1.0, {}, {}}, mild_ellipse());
    bool decay = true;
    double tail = 0.0;
    for (double s : {0.0, 0.5, 1.0}) {
        const PathSlice slice = p.slice(s);
        for (double Q : {0.05, 0.5, 0.81})
            for (double sign : {-1.0, 1.0}) {
                double prev = std::numeric_limits<double>::infinity();
                for (int k = 2; k <= 6; ++k) {
                    const double v = std::abs(hamiltonian_value(slice, Q, sign * (1.0 - std::pow(10.0, -k))));
                    decay = decay && v <= prev;
                    prev = v;
                }
                tail = std::max(tail, prev);
            }
    }
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> uq(0.0, 1.0), up(-0.9, 0.9);
    std::vector<AnnulusPoint> pts;
    for (int i = 0; i < 100; ++i) pts.push_back({uq(rng), up(rng)});
    const double residual = hamilton_jacobi_residual(p, 0.5, pts);
    const std::vector<AnnulusPoint> few(pts.begin(), pts.begin() + 10);
    const double r1 = hamilton_jacobi_residual(p, 0.5, few, 0.02);
    const double r2 = hamilton_jacobi_residual(p, 0.5, few, 0.01);
    const double r3 = hamilton_jacobi_residual(p, 0.5, few, 0.005);
    const double order1 = std::log2(r1 / r2), order2 = std::log2(r2 / r3);
    r.metrics = {{"decay_monotone", decay}, {"max_h_at_k6", tail},     {"hj_residual", residual},
                 {"r_h0.02", r1},           {"r_h0.01", r2},           {"r_h0.005", r3},
                 {"order_first_halving", order1}, {"order_second_halving", order2}};
    r.pass = decay && residual < 1e-3 && order1 > 1.8 && order2 > 1.8;
    return r;
}

CriterionResult check_distance_brackets(const VerifyOptions& o) {
    CriterionResult r = start(5, "distance brackets");
    int count = 0, failures = 0;
    double translation_gap = 0.0;
    auto run = [&](const TablePath& p, bool translation) {
        ++count;
        try {
            const DistanceBracket b = bracket_dB(p);
            if (!(b.lower <= b.upper * (1.0 + 1e-6))) ++failures;
            if (translation) translation_gap = std::max(translation_gap, std::abs(b.upper - b.lower));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BracketInverted) throw;
            ++failures;
        }
    };
    for (const SeededPath& sp : seeded_paths(o)) run(sp.path, sp.translation);

    std::vector<double> f(256);
    for (int j = 0; j < 256; ++j) f[j] = 0.01 * std::cos(kTwoPi * j / 256.0) + 0.004 * std::sin(kTwoPi * 3 * j / 256.0);
    run(normal_perturbation_path(build_fourier_table(mild_ellipse()), f).path, false);
    run(restriction_path(family_from_polygon(unit_square(), 0.01), 0.5, 0.25), false);

    r.metrics = {{"paths", count}, {"failures", failures}, {"max_translation_gap", translation_gap}};
    r.pass = failures == 0 && translation_gap < 1e-9;
    return r;
}

CriterionResult check_smoothing(const VerifyOptions&) {
    CriterionResult r = start(6, "corner smoothing of the unit square");
    const SmoothingFamily fam = family_from_polygon(unit_square(), 0.01);
    double affine = 0.0;
    for (double s : {1.0, 0.5, 0.25, 0.125, 0.0625})
        affine = std::max(affine, std::abs(fam.measured_length(s) - fam.length(s)));

    const TailReport tail = cauchy_tail(fam, 1.0, 12);
    bool decreasing = true;
    for (std::size_t k = 1; k < tail.increments.size(); ++k)
        decreasing = decreasing && tail.increments[k] < tail.increments[k - 1];
    const double last = tail.increments.back() / tail.value;

    const GapSlope slope = gap_slope(family_from_polygon(unit_square(), 0.005), fam);
    r.metrics = {{"affine_law_residual", affine}, {"tail_value", tail.value}, {"tail_last_increment_ratio", last},
                 {"gap_slope", slope.slope}};
    r.pass = affine < 1e-9 && decreasing && last < 1e-3 && slope.slope >= 0.9 && slope.slope <= 1.1;
    return r;
}

CriterionResult check_functional_bound(const VerifyOptions& o) {
    CriterionResult r = start(7, "functional gap bounded by 2n times the C0 distance");
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    int violations = 0;
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const TableCurve a = build_fourier_table(random_support(rng));
        const TableCurve b = build_fourier_table(random_support(rng)).translated({u(rng), u(rng)});
        for (int n : {2, 3}) {
            try {
                const FunctionalGap g = functional_gap(a, b, n, o.quick && n == 3 ? 32 : 64);
                worst = std::max(worst, g.gap / g.bound);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::BoundViolated) throw;
                ++violations;
            }
        }
    }
    r.metrics = {{"pairs", 10}, {"violations", violations}, {"max_gap_over_bound", worst}};
    r.pass = violations == 0;
    return r;
}

CriterionResult check_orbit_oracles(const VerifyOptions& o) {
    CriterionResult r = start(8, "periodic orbit oracles");
    const TableCurve e = build_fourier_table(mild_ellipse());
    double disagreement = 0.0, phase_residual = 0.0;
    int classes = 0;
    for (int n : {2, 3}) {
        const auto torus = find_periodic_orbits(e, n, 32, o.seed);
        const auto phase = fixed_point_orbits(e, n);
        classes += static_cast<int>(torus.size());
        if (torus.empty() || phase.empty()) disagreement = std::numeric_limits<double>::infinity();
        for (const auto& p : phase) {
            phase_residual = std::max(phase_residual, p.residual);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& t : torus) best = std::min(best, orbit_class_distance(p, t));
            disagreement = std::max(disagreement, best);
        }
        for (const auto& t : torus) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& p : phase) best = std::min(best, orbit_class_distance(p, t));
            disagreement = std::max(disagreement, best);
        }
    }
    const TableCurve disc = disc_table();
    const auto two = find_periodic_orbits(disc, 2, 32, o.seed);
    const auto three = find_periodic_orbits(disc, 3, 32, o.seed);
    const double e2 = two.size() == 1 ? std::abs(two[0].action - 2.0 / kPi) : 1.0;
    const double e3 = three.size() == 1 ? std::abs(three[0].action - 3.0 * std::sqrt(3.0) / (2.0 * kPi)) : 1.0;
    r.metrics = {{"ellipse_classes", classes},   {"oracle_disagreement", disagreement},
                 {"phase_residual", phase_residual}, {"disc_two_action_error", e2},
                 {"disc_three_action_error", e3}};
    r.pass = disagreement < 1e-8 && phase_residual < 1e-8 && e2 < 1e-9 && e3 < 1e-9;
    return r;
}

CriterionResult check_persistence(const VerifyOptions& o) {
    CriterionResult r = start(9, "persistence barcodes");
    const TableCurve disc = disc_table(), e = build_fourier_table(mild_ellipse());
    bool betti = betti_ok(sublevel_barcode(GridFunction::constant(2, 8, 0.5))) &&
                 betti_ok(sublevel_barcode(GridFunction::constant(3, 4, 0.5))) &&
                 betti_ok(sublevel_barcode(sample_orbit_functional(disc, 2, 64))) &&
                 betti_ok(sublevel_barcode(sample_orbit_functional(e, 2, 64))) &&
                 betti_ok(sublevel_barcode(sample_orbit_functional(e, 3, o.quick ? 12 : 24)));

    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto random_code = [&](int bars) {
        Barcode c;
        c.dimension = 2;
        for (int i = 0; i < bars; ++i) {
            const double b = std::round(u(rng) * 64) / 64, len = std::round(u(rng) * 32) / 64 + 1.0 / 64;
            c.bars.push_back({1, b, b + len});
        }
        return c;
    };
    int mismatches = 0, trials = 0;
    for (int na = 0; na <= 3; ++na)
        for (int nb = 0; nb <= 3; ++nb)
            for (int rep = 0; rep < 4; ++rep) {
                if (na + nb == 0) continue;
                const Barcode a = random_code(na), b = random_code(nb);
                ++trials;
                mismatches += bottleneck_distance(a, b, 1) != brute_bottleneck(a.degree(1), b.degree(1));
            }

    bool stable = true;
    double worst_bn = 0.0, gap = 0.0, slack = 0.0;
    try {
        const StabilityReport s = stability_check(disc, e, 2, 64);
        worst_bn = *std::max_element(s.bottleneck.begin(), s.bottleneck.end());
        gap = s.functional_gap;
        slack = s.slack;
    } catch (const Error& err) {
        if (err.code() != ErrorCode::StabilityViolated) throw;
        stable = false;
    }
    r.metrics = {{"betti_ok", betti},      {"matching_trials", trials}, {"matching_mismatches", mismatches},
                 {"stability_ok", stable}, {"max_bottleneck", worst_bn}, {"functional_gap", gap},
                 {"grid_slack", slack}};
    r.pass = betti && mismatches == 0 && stable;
    return r;
}

CriterionResult check_reconstruction(const VerifyOptions& o) {
    CriterionResult r = start(10, "table reconstruction from chord data");
    std::mt19937_64 rng(o.seed);
    const TableCurve t = build_fourier_table(random_support(rng));
    const double err = reconstruction_error(reconstruct_table(chord_data(t)), t);
    r.metrics = {{"max_aligned_error", err}};
    r.pass = err < 1e-6;
    return r;
}

std::vector<CriterionResult> verify_all(const VerifyOptions& o) {
    return {check_disc_closed_form(o),   check_symplecticity(o),   check_comparison_certificates(o),
            check_hamiltonian(o),        check_distance_brackets(o), check_smoothing(o),
            check_functional_bound(o),   check_orbit_oracles(o),   check_persistence(o),
            check_reconstruction(o)};
}

}  // namespace hb
