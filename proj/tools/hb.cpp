// Command-line front end: billiard tables, maps, Hofer certificates, polygon
// smoothing, periodic orbits, barcodes, chord reconstruction and self checks.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "hb/billiard.hpp"
#include "hb/dynamics.hpp"
#include "hb/error.hpp"
#include "hb/homotopy.hpp"
#include "hb/parallel.hpp"
#include "hb/persistence.hpp"
#include "hb/smoothing.hpp"
#include "hb/verify.hpp"
#include "inputs.hpp"

namespace fs = std::filesystem;
using hbcli::json;

namespace {

// Raised when a command finished but its certificate failed (exit 2).
struct Output;
struct CertificateFailure {
    std::shared_ptr<Output> out;
};

struct Options {
    std::string table, table_b, path, polygon, chords, out;
    int grid_q = 0, grid_p = 0, grid_s = 0;
    double tol = 1e-2;
    std::uint64_t seed = 1;
    unsigned threads = 0;

    double q = 0.0, p = 0.0, s = 0.5, radius = 0.05, width = 0.0, width_b = 0.0, s0 = 1.0;
    int n = 2, iterations = 1, samples = 0, seeds = 32, depth = 8;
    bool full = false;
    std::vector<double> qs;
};

// Outputs of one command: a JSON result, CSV tables and binary blobs keyed by file name.
struct Output {
    json result;
    std::string summary;
    std::map<std::string, std::string> files;
};

std::string out_dir(const Options& o) {
    if (!o.out.empty()) return o.out;
    if (const char* env = std::getenv("HB_OUT")) return env;
    return {};
}

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

hb::TableCurve table_a(const Options& o) {
    if (o.table.empty()) throw hbcli::InputError("--table", "required");
    return hbcli::parse_table(hbcli::load_json(o.table, "--table"), "table");
}

hb::TableCurve table_b(const Options& o) {
    if (o.table_b.empty()) throw hbcli::InputError("--table-b", "required");
    return hbcli::parse_table(hbcli::load_json(o.table_b, "--table-b"), "table_b");
}

hb::TablePath path_of(const Options& o) {
    if (o.path.empty()) throw hbcli::InputError("--path", "required");
    return hbcli::parse_path(hbcli::load_json(o.path, "--path"), "path");
}

hb::PolygonSpec polygon_of(const Options& o) {
    if (o.polygon.empty()) throw hbcli::InputError("--polygon", "required");
    return hbcli::parse_polygon(hbcli::load_json(o.polygon, "--polygon"), "polygon");
}

int or_default(int v, int fallback) { return v > 0 ? v : fallback; }

json orbit_json(const hb::PeriodicOrbitCandidate& c) {
    return {{"n", c.qs.size()},        {"qs", c.qs},
            {"action", c.action},      {"residual", c.residual},
            {"accepted", c.accepted},  {"winding", c.winding},
            {"degenerate_family", c.degenerate_family}, {"fixed_point_error", c.fixed_point_error}};
}

json barcode_json(const hb::Barcode& b) {
    json arr = json::array();
    for (const hb::Bar& bar : b.bars)
        arr.push_back({{"degree", bar.degree}, {"birth", bar.birth}, {"death", bar.infinite() ? json("inf") : json(bar.death)}});
    return arr;
}

json quadrature_json(const hb::QuadratureReport& q) {
    return {{"value", q.value}, {"error_estimate", q.error_estimate}, {"s_nodes", q.s_nodes}};
}

// ---------------------------------------------------------------------------

Output table_inspect(const Options& o) {
    const hb::TableCurve t = table_a(o);
    const int N = or_default(o.grid_q, 4096);
    double kmin = 1e300, kmax = -1e300, length = 0.0;
    for (int j = 0; j < N; ++j) {
        const double k = t.curvature(static_cast<double>(j) / N);
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
        length += (t.position((j + 1.0) / N) - t.position(static_cast<double>(j) / N)).norm();
    }
    const hb::Vec2 c = t.centroid();
    Output out;
    out.result = {{"representation", hb::to_string(t.representation())},
                  {"strictly_convex", t.strictly_convex()},
                  {"min_curvature", kmin},
                  {"max_curvature", kmax},
                  {"polyline_length", length},
                  {"centroid", {c.x(), c.y()}},
                  {"mark", {t.position(0.0).x(), t.position(0.0).y()}}};
    out.summary = std::string("table ") + hb::to_string(t.representation()) + ", curvature in [" + fmt(kmin) + ", " +
                  fmt(kmax) + "]";
    return out;
}

Output table_sample(const Options& o) {
    const hb::TableCurve t = table_a(o);
    const int N = or_default(o.grid_q, 256);
    std::ostringstream csv;
    csv.precision(17);
    csv << "q,x,y,tx,ty,curvature\n";
    for (int j = 0; j < N; ++j) {
        const double q = static_cast<double>(j) / N;
        const hb::CurveFrame f = t.frame(q);
        csv << q << ',' << f.position.x() << ',' << f.position.y() << ',' << f.tangent.x() << ',' << f.tangent.y()
            << ',' << f.curvature << '\n';
    }
    Output out;
    out.result = {{"samples", N}, {"file", "table.csv"}};
    out.files["table.csv"] = csv.str();
    out.summary = "sampled " + std::to_string(N) + " boundary points";
    return out;
}

Output map_eval(const Options& o) {
    const hb::TableCurve t = table_a(o);
    const hb::AnnulusPoint y = hb::forward_map(t, {o.q, o.p});
    Output out;
    out.result = {{"Q", y.q}, {"P", y.p}};
    out.summary = "psi(" + fmt(o.q) + ", " + fmt(o.p) + ") = (" + fmt(y.q) + ", " + fmt(y.p) + ")";
    return out;
}

Output map_iterate(const Options& o) {
    const hb::TableCurve t = table_a(o);
    const auto pts = hb::iterate(t, {o.q, o.p}, o.iterations);
    std::ostringstream csv;
    csv.precision(17);
    csv << "k,q,p\n";
    for (std::size_t k = 0; k < pts.size(); ++k) csv << k << ',' << pts[k].q << ',' << pts[k].p << '\n';
    Output out;
    out.result = {{"iterations", o.iterations}, {"last", {{"q", pts.back().q}, {"p", pts.back().p}}}, {"file", "orbit.csv"}};
    out.files["orbit.csv"] = csv.str();
    out.summary = std::to_string(o.iterations) + " iterations";
    return out;
}

Output map_portrait(const Options& o) {
    const hb::TableCurve t = table_a(o);
    const int nq = or_default(o.grid_q, 8), np = or_default(o.grid_p, 8), steps = std::max(o.iterations, 1);
    std::vector<std::vector<hb::AnnulusPoint>> orbits(static_cast<std::size_t>(nq) * np);
    hb::parallel_for(orbits.size(), [&](std::size_t i) {
        const double q = static_cast<double>(i / np) / nq;
        const double p = -0.95 + 1.9 * (static_cast<double>(i % np) + 0.5) / np;
        try {
            orbits[i] = hb::iterate(t, {q, p}, steps);
        } catch (const hb::Error& e) {
            if (e.code() != hb::ErrorCode::NearGrazing) throw;
        }
    });
    std::ostringstream csv;
    csv.precision(17);
    csv << "seed,k,q,p\n";
    for (std::size_t i = 0; i < orbits.size(); ++i)
        for (std::size_t k = 0; k < orbits[i].size(); ++k) csv << i << ',' << k << ',' << orbits[i][k].q << ',' << orbits[i][k].p << '\n';
    Output out;
    out.result = {{"seeds", orbits.size()}, {"iterations", steps}, {"file", "portrait.csv"}};
    out.files["portrait.csv"] = csv.str();
    out.summary = "phase portrait with " + std::to_string(orbits.size()) + " seeds";
    return out;
}

hb::HoferGrid hofer_grid(const Options& o) {
    hb::HoferGrid g;
    g.s_nodes = or_default(o.grid_s, g.s_nodes);
    g.q_nodes = or_default(o.grid_q, g.q_nodes);
    g.p_nodes = or_default(o.grid_p, g.p_nodes);
    return g;
}

Output hofer_length_cmd(const Options& o) {
    const hb::TablePath p = path_of(o);
    const hb::HoferReport h = hb::hofer_length(p, hofer_grid(o));
    const hb::QuadratureReport b = hb::path_geometric_length(p, or_default(o.grid_s, 65), 1024);
    Output out;
    out.result = {{"kind", hb::to_string(p.kind())}, {"l_H", quadrature_json(h.length)}, {"l_B", quadrature_json(b)}};
    std::ostringstream csv;
    csv.precision(17);
    csv << "s,max_h,min_h\n";
    for (std::size_t i = 0; i < h.max_h.size(); ++i)
        csv << static_cast<double>(i) / (h.max_h.size() - 1) << ',' << h.max_h[i] << ',' << h.min_h[i] << '\n';
    out.files["hofer.csv"] = csv.str();
    out.summary = "l_H = " + fmt(h.length.value) + ", l_B = " + fmt(b.value);
    return out;
}

Output hofer_compare(const Options& o) {
    const hb::TablePath p = path_of(o);
    const hb::ComparisonCertificate c = hb::verify_comparison(p, hofer_grid(o), 1024);
    const bool pass = c.l_H <= 4.0 * c.l_B * (1.0 + o.tol);
    Output out;
    out.result = {{"kind", hb::to_string(p.kind())},
                  {"l_H", c.l_H},
                  {"l_B", c.l_B},
                  {"ratio", c.ratio},
                  {"generating_integral", c.generating_integral},
                  {"slack", o.tol},
                  {"pass", pass}};
    out.summary = "l_H / l_B = " + fmt(c.ratio) + (pass ? " <= 4" : " exceeds 4");
    if (!pass) throw CertificateFailure{std::make_shared<Output>(out)};
    return out;
}

Output hofer_hjresidual(const Options& o) {
    const hb::TablePath p = path_of(o);
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> uq(0.0, 1.0), up(-0.9, 0.9);
    std::vector<hb::AnnulusPoint> pts;
    for (int i = 0; i < or_default(o.samples, 100); ++i) pts.push_back({uq(rng), up(rng)});
    const double r = hb::hamilton_jacobi_residual(p, o.s, pts);
    Output out;
    out.result = {{"s", o.s}, {"samples", pts.size()}, {"residual", r}};
    out.summary = "Hamilton-Jacobi residual " + fmt(r);
    return out;
}

Output polygon_family(const Options& o) {
    const hb::SmoothingFamily fam = hb::family_from_polygon(polygon_of(o), o.width);
    const hb::TableCurve t = fam.table(o.s);
    const int N = or_default(o.grid_q, 512);
    std::ostringstream csv;
    csv.precision(17);
    csv << "q,x,y\n";
    for (int j = 0; j < N; ++j) {
        const hb::Vec2 x = t.position(static_cast<double>(j) / N);
        csv << static_cast<double>(j) / N << ',' << x.x() << ',' << x.y() << '\n';
    }
    Output out;
    out.result = {{"s", o.s},
                  {"length", fam.length(o.s)},
                  {"measured_length", fam.measured_length(o.s)},
                  {"defects", fam.defects()},
                  {"speed", o.s > 0.0 ? hb::family_speed(fam, o.s) : 0.0},
                  {"speed_bound", hb::family_speed_bound(fam)}};
    out.files["family.csv"] = csv.str();
    out.summary = "L(" + fmt(o.s) + ") = " + fmt(fam.length(o.s));
    return out;
}

Output polygon_cauchy(const Options& o) {
    const hb::SmoothingFamily fam = hb::family_from_polygon(polygon_of(o), o.width);
    const hb::TailReport t = hb::cauchy_tail(fam, o.s0, o.depth);
    std::ostringstream csv;
    csv.precision(17);
    csv << "k,s,speed,increment,partial_sum\n";
    for (std::size_t k = 0; k < t.s.size(); ++k) {
        csv << k << ',' << t.s[k] << ',' << t.speed[k];
        if (k < t.increments.size()) csv << ',' << t.increments[k] << ',' << t.partial_sums[k];
        else csv << ",,";
        csv << '\n';
    }
    Output out;
    out.result = {{"s0", o.s0}, {"K", o.depth}, {"value", t.value}, {"remainder", t.remainder},
                  {"last_increment_ratio", t.increments.empty() ? 0.0 : t.increments.back() / t.value}};
    out.files["cauchy.csv"] = csv.str();
    out.summary = "tail integral " + fmt(t.value);
    return out;
}

Output polygon_independence(const Options& o) {
    const hb::PolygonSpec poly = polygon_of(o);
    const double wa = o.width > 0.0 ? o.width : hb::default_profile_width(poly) / 2.0;
    const double wb = o.width_b > 0.0 ? o.width_b : hb::default_profile_width(poly);
    const hb::GapSlope g = hb::gap_slope(hb::family_from_polygon(poly, wa), hb::family_from_polygon(poly, wb));
    std::ostringstream csv;
    csv.precision(17);
    csv << "s,gap\n";
    for (std::size_t i = 0; i < g.s.size(); ++i) csv << g.s[i] << ',' << g.gap[i] << '\n';
    Output out;
    out.result = {{"width_a", wa}, {"width_b", wb}, {"slope", g.slope}, {"pass", g.pass}};
    out.files["independence.csv"] = csv.str();
    out.summary = "log-log slope " + fmt(g.slope);
    if (!g.pass) throw CertificateFailure{std::make_shared<Output>(out)};
    return out;
}

Output orbits_find(const Options& o) {
    const hb::TableCurve t = table_a(o);
    const auto found = hb::find_periodic_orbits(t, o.n, o.seeds, o.seed);
    Output out;
    out.result = json::array();
    for (const auto& c : found) out.result.push_back(orbit_json(c));
    out.summary = std::to_string(found.size()) + " orbit classes of period " + std::to_string(o.n);
    return out;
}

Output orbits_experiment(const Options& o) {
    const hb::TableCurve a = table_a(o), b = table_b(o);
    std::vector<hb::PeriodicOrbitCandidate> found;
    if (!o.qs.empty()) {
        found.push_back(hb::classify_orbit(a, o.qs));
        if (!found.front().accepted) throw hbcli::InputError("--qs", "not a periodic orbit of the table");
    } else {
        found = hb::find_periodic_orbits(a, o.n, o.seeds, o.seed);
        if (found.empty()) throw hbcli::InputError("--table", "no periodic orbit of the requested period found");
    }
    const int n = static_cast<int>(found.front().qs.size());
    const auto rep = hb::almost_periodicity_experiment(a, b, found.front(), n, o.radius,
                                                       or_default(o.samples, 400), o.seed);
    std::ostringstream csv;
    csv.precision(17);
    csv << "q,p,qa,pa,qb,pb\n";
    for (std::size_t i = 0; i < rep.cloud.size(); ++i)
        csv << rep.cloud[i].q << ',' << rep.cloud[i].p << ',' << rep.image_a[i].q << ',' << rep.image_a[i].p << ','
            << rep.image_b[i].q << ',' << rep.image_b[i].p << '\n';
    Output out;
    out.result = {{"orbit", orbit_json(found.front())},
                  {"radius", o.radius},
                  {"min_distance", rep.min_distance},
                  {"center_displacement", rep.center_displacement},
                  {"d_B_upper", rep.d_b_upper ? json(*rep.d_b_upper) : json(nullptr)}};
    out.files["cloud.csv"] = csv.str();
    out.summary = "min distance " + fmt(rep.min_distance);
    return out;
}

Output orbits_gap(const Options& o) {
    const auto g = hb::functional_gap(table_a(o), table_b(o), o.n, or_default(o.grid_q, 64));
    Output out;
    out.result = {{"n", o.n}, {"gap", g.gap}, {"c0", g.c0}, {"bound", g.bound}, {"argmax", g.argmax}};
    out.summary = "sup |F_a - F_b| = " + fmt(g.gap) + " <= " + fmt(g.bound);
    return out;
}

Output barcode_compute(const Options& o) {
    const hb::GridFunction g = hb::sample_orbit_functional(table_a(o), o.n, or_default(o.grid_q, 64));
    const hb::Barcode b = hb::sublevel_barcode(g);
    Output out;
    out.result = barcode_json(b);
    std::string blob(g.size() * sizeof(double), '\0');
    std::memcpy(blob.data(), g.values().data(), blob.size());
    out.files["grid.bin"] = blob;
    out.files["grid.json"] = json{{"n", g.dimension()}, {"m", g.resolution()}, {"dtype", "float64"},
                                  {"order", "row-major"}, {"file", "grid.bin"}}.dump(2) + "\n";
    out.summary = std::to_string(b.bars.size()) + " bars";
    return out;
}

Output barcode_bottleneck(const Options& o) {
    const int m = or_default(o.grid_q, 64);
    const hb::Barcode a = hb::sublevel_barcode(hb::sample_orbit_functional(table_a(o), o.n, m));
    const hb::Barcode b = hb::sublevel_barcode(hb::sample_orbit_functional(table_b(o), o.n, m));
    json d = json::array();
    for (int k = 0; k <= o.n; ++k) d.push_back(hb::bottleneck_distance(a, b, k));
    Output out;
    out.result = {{"n", o.n}, {"m", m}, {"bottleneck", d}};
    out.summary = "bottleneck distances per degree computed";
    return out;
}

Output barcode_stability(const Options& o) {
    const hb::StabilityReport r = hb::stability_check(table_a(o), table_b(o), o.n, or_default(o.grid_q, 64));
    Output out;
    out.result = {{"n", r.n},           {"m", r.m},         {"bottleneck", r.bottleneck},
                  {"functional_gap", r.functional_gap}, {"grid_sup", r.grid_sup}, {"slack", r.slack},
                  {"pass", r.pass}};
    out.summary = "stability holds";
    return out;
}

Output reconstruct_cmd(const Options& o) {
    hb::ChordData data;
    std::optional<hb::TableCurve> truth;
    if (!o.chords.empty()) {
        const json j = hbcli::load_json(o.chords, "--chords");
        try {
            data.diameter = j.at("diameter").get<double>();
            data.t = j.at("t").get<std::vector<double>>();
            data.from_start = j.at("from_start").get<std::vector<double>>();
            data.to_half = j.at("to_half").get<std::vector<double>>();
        } catch (const json::exception& e) {
            throw hbcli::InputError("chords", e.what());
        }
        if (!o.table.empty()) truth = table_a(o);
    } else {
        truth = table_a(o);
        data = hb::chord_data(*truth, or_default(o.samples, 256));
    }
    hb::Reconstruction r = hb::reconstruct_table(data);
    if (truth) r = hb::align_to(r, *truth);
    std::ostringstream csv;
    csv.precision(17);
    csv << "t,x,y\n";
    for (std::size_t j = 0; j < r.t.size(); ++j) csv << r.t[j] << ',' << r.points[j].x() << ',' << r.points[j].y() << '\n';
    Output out;
    out.result = {{"points", r.t.size()}, {"aligned", truth.has_value()}};
    if (truth) out.result["max_error"] = hb::reconstruction_error(r, *truth);
    out.files["reconstruction.csv"] = csv.str();
    out.summary = "reconstructed " + std::to_string(r.t.size()) + " boundary points";
    return out;
}

Output verify_all_cmd(const Options& o) {
    const auto results = hb::verify_all({o.seed, !o.full});
    Output out;
    out.result = json::array();
    int failed = 0;
    for (const auto& r : results) {
        json m = json::object();
        for (const auto& [k, v] : r.metrics) m[k] = v;
        out.result.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"metrics", m}});
        failed += !r.pass;
    }
    std::ostringstream csv;
    csv.precision(17);
    csv << "id,metric,value\n";
    for (const auto& r : results)
        for (const auto& [k, v] : r.metrics) csv << r.id << ',' << k << ',' << v << '\n';
    out.files["checks.csv"] = csv.str();
    out.summary = std::to_string(results.size() - failed) + " of " + std::to_string(results.size()) + " checks passed";
    if (failed) throw CertificateFailure{std::make_shared<Output>(out)};
    return out;
}

// ---------------------------------------------------------------------------

void emit(const Output& out, const Options& o) {
    const std::string dir = out_dir(o);
    const std::string text = out.result.dump(2) + "\n";
    std::cout << text;
    if (!dir.empty()) {
        fs::create_directories(dir);
        std::ofstream(fs::path(dir) / "result.json", std::ios::binary) << text;
        for (const auto& [name, content] : out.files) std::ofstream(fs::path(dir) / name, std::ios::binary) << content;
    } else {
        for (const auto& [name, content] : out.files)
            if (name.ends_with(".csv")) std::cout << "# " << name << "\n" << content;
    }
    std::cerr << out.summary << "\n";
}

int exit_code(hb::ErrorCode c) {
    switch (c) {
        case hb::ErrorCode::BoundViolated:
        case hb::ErrorCode::StabilityViolated:
        case hb::ErrorCode::BracketInverted: return 2;
        default: return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Billiard tables, Hofer certificates, orbits and barcodes"};
    app.require_subcommand(1);
    Options o;
    std::function<Output(const Options&)> command;

    auto common = [&](CLI::App* c) {
        c->add_option("--out", o.out, "Output directory (default: $HB_OUT)");
        c->add_option("--threads", o.threads, "Worker threads (default: machine parallelism)");
        c->add_option("--seed", o.seed, "Random seed");
        c->add_option("--grid-q", o.grid_q, "Resolution in q");
        c->add_option("--grid-p", o.grid_p, "Resolution in p");
        c->add_option("--grid-s", o.grid_s, "Resolution in s");
        c->add_option("--tol", o.tol, "Relative slack of certificates");
    };
    auto leaf = [&](CLI::App* parent, const char* name, const char* help, Output (*fn)(const Options&)) {
        CLI::App* c = parent->add_subcommand(name, help);
        common(c);
        c->callback([&command, fn] { command = fn; });
        return c;
    };

    CLI::App* table = app.add_subcommand("table", "Inspect or sample a table")->require_subcommand(1);
    for (CLI::App* c : {leaf(table, "inspect", "Curvature, length and centroid", table_inspect),
                        leaf(table, "sample", "Boundary samples as CSV", table_sample)})
        c->add_option("--table", o.table, "Table JSON file or inline JSON");

    CLI::App* map = app.add_subcommand("map", "Billiard map")->require_subcommand(1);
    for (CLI::App* c : {leaf(map, "eval", "One step of the map", map_eval),
                        leaf(map, "iterate", "Orbit of one point", map_iterate),
                        leaf(map, "portrait", "Orbits of a grid of seeds", map_portrait)}) {
        c->add_option("--table", o.table, "Table JSON file or inline JSON");
        c->add_option("--q", o.q, "Boundary parameter");
        c->add_option("--p", o.p, "Tangential momentum");
        c->add_option("--n", o.iterations, "Iterations");
    }

    CLI::App* hofer = app.add_subcommand("hofer", "Hofer and geometric lengths of table paths")->require_subcommand(1);
    for (CLI::App* c : {leaf(hofer, "length", "Hofer length l_H", hofer_length_cmd),
                        leaf(hofer, "compare", "Certificate l_H <= 4 l_B", hofer_compare),
                        leaf(hofer, "hjresidual", "Hamilton-Jacobi residual", hofer_hjresidual)}) {
        c->add_option("--path", o.path, "Path JSON file or inline JSON");
        c->add_option("--s", o.s, "Path parameter");
        c->add_option("--samples", o.samples, "Phase-space samples");
    }

    CLI::App* polygon = app.add_subcommand("polygon", "Smoothing families of convex polygons")->require_subcommand(1);
    for (CLI::App* c : {leaf(polygon, "family", "One member of the family", polygon_family),
                        leaf(polygon, "cauchy", "Tail integral of the family speed", polygon_cauchy),
                        leaf(polygon, "independence", "Profile independence gap", polygon_independence)}) {
        c->add_option("--polygon", o.polygon, "Polygon JSON file or inline JSON");
        c->add_option("--s", o.s, "Family parameter");
        c->add_option("--s0", o.s0, "Upper end of the tail");
        c->add_option("--K", o.depth, "Number of dyadic tail pieces");
        c->add_option("--width", o.width, "Profile width");
        c->add_option("--width-b", o.width_b, "Second profile width");
    }

    CLI::App* orbits = app.add_subcommand("orbits", "Periodic orbits and the orbit functional")->require_subcommand(1);
    for (CLI::App* c : {leaf(orbits, "find", "Critical points of the orbit functional", orbits_find),
                        leaf(orbits, "experiment", "Return of a phase-space ball near an orbit", orbits_experiment),
                        leaf(orbits, "gap", "sup |F_a - F_b| on a torus grid", orbits_gap)}) {
        c->add_option("--table", o.table, "Table JSON file or inline JSON");
        c->add_option("--table-b", o.table_b, "Second table");
        c->add_option("--n", o.n, "Period");
        c->add_option("--seeds", o.seeds, "Random Newton seeds");
        c->add_option("--radius", o.radius, "Ball radius");
        c->add_option("--samples", o.samples, "Ball samples");
        c->add_option("--qs", o.qs, "Orbit tuple for the experiment (default: first orbit found)")->delimiter(',');
    }

    CLI::App* barcode = app.add_subcommand("barcode", "Sublevel barcodes of orbit functionals")->require_subcommand(1);
    for (CLI::App* c : {leaf(barcode, "compute", "Barcode of one table", barcode_compute),
                        leaf(barcode, "bottleneck", "Bottleneck distances per degree", barcode_bottleneck),
                        leaf(barcode, "stability", "Bottleneck distance against the functional gap", barcode_stability)}) {
        c->add_option("--table", o.table, "Table JSON file or inline JSON");
        c->add_option("--table-b", o.table_b, "Second table");
        c->add_option("--n", o.n, "Number of bounces");
    }

    CLI::App* rec = leaf(&app, "reconstruct", "Rebuild a table from chord data", reconstruct_cmd);
    rec->add_option("--table", o.table, "Table to sample chords from (and align to)");
    rec->add_option("--chords", o.chords, "Chord data JSON {diameter, t, from_start, to_half}");
    rec->add_option("--samples", o.samples, "Chord samples per table");

    CLI::App* verify = app.add_subcommand("verify", "Self checks")->require_subcommand(1);
    leaf(verify, "all", "Run every check", verify_all_cmd)->add_flag("--full", o.full, "Full-size grids and path counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    hb::set_thread_count(o.threads);
    try {
        emit(command(o), o);
        return 0;
    } catch (const CertificateFailure& f) {
        emit(*f.out, o);
        std::cerr << "certificate failed\n";
        return 2;
    } catch (const hbcli::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const hb::Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
