#include "hb/persistence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include "hb/dynamics.hpp"
#include "hb/error.hpp"
#include "hb/parallel.hpp"

namespace hb {

GridFunction::GridFunction(int n, int m, std::vector<double> values, std::size_t budget)
    : n_(n), m_(m), values_(std::move(values)) {
    if (n != 2 && n != 3) throw Error(ErrorCode::InvalidInput, "grid dimension must be 2 or 3");
    if (m < 3) throw Error(ErrorCode::InvalidInput, "grid resolution must be at least 3");
    if (std::pow(static_cast<double>(m), n) > static_cast<double>(budget))
        throw Error(ErrorCode::ResolutionTooLarge, "grid exceeds the cell budget");
    std::size_t cells = 1;
    for (int i = 0; i < n; ++i) cells *= static_cast<std::size_t>(m);
    if (values_.size() != cells) throw Error(ErrorCode::InvalidInput, "grid value count is not m^n");
    for (std::size_t i = 0; i < cells; ++i)
        if (!std::isfinite(values_[i])) throw Error(ErrorCode::InvalidInput, "grid values must be finite", static_cast<long>(i));
}

GridFunction GridFunction::constant(int n, int m, double c) {
    std::size_t cells = 1;
    for (int i = 0; i < n; ++i) cells *= static_cast<std::size_t>(std::max(m, 0));
    return GridFunction(n, m, std::vector<double>(cells, c));
}

std::vector<int> GridFunction::coordinates(std::size_t i) const {
    std::vector<int> c(n_);
    for (int a = n_ - 1; a >= 0; --a) {
        c[a] = static_cast<int>(i % m_);
        i /= m_;
    }
    return c;
}

std::size_t GridFunction::index(const std::vector<int>& coords) const {
    std::size_t i = 0;
    for (int a = 0; a < n_; ++a) i = i * m_ + static_cast<std::size_t>(((coords[a] % m_) + m_) % m_);
    return i;
}

GridFunction GridFunction::shifted(double c) const {
    std::vector<double> v(values_);
    for (double& x : v) x += c;
    return GridFunction(n_, m_, std::move(v), std::size_t(-1));
}

GridFunction sample_orbit_functional(const TableCurve& t, int n, int m, std::size_t budget) {
    if (m < 3) throw Error(ErrorCode::InvalidInput, "grid resolution must be at least 3");
    if (std::pow(static_cast<double>(m), n) > static_cast<double>(budget))
        throw Error(ErrorCode::ResolutionTooLarge, "grid exceeds the cell budget");
    std::vector<Vec2> pos(m);
    for (int j = 0; j < m; ++j) pos[j] = t.position(static_cast<double>(j) / m);
    std::size_t cells = 1;
    for (int i = 0; i < n; ++i) cells *= static_cast<std::size_t>(m);
    std::vector<double> v(cells);
    parallel_for(cells / m, [&](std::size_t row) {
        std::vector<int> c(n);
        for (std::size_t k = 0; k < static_cast<std::size_t>(m); ++k) {
            std::size_t i = row * m + k, r = i;
            for (int a = n - 1; a >= 0; --a) {
                c[a] = static_cast<int>(r % m);
                r /= m;
            }
            double sum = 0.0;
            for (int a = 0; a < n; ++a) sum += (pos[c[(a + 1) % n]] - pos[c[a]]).norm();
            v[i] = sum;
        }
    });
    return GridFunction(n, m, std::move(v), budget);
}

std::vector<Bar> Barcode::degree(int d) const {
    std::vector<Bar> out;
    for (const Bar& b : bars)
        if (b.degree == d) out.push_back(b);
    return out;
}

int Barcode::infinite_count(int d) const {
    int k = 0;
    for (const Bar& b : bars) k += b.degree == d && b.infinite();
    return k;
}

namespace {

// Cells of the periodic cubical complex are (vertex, axis mask) pairs encoded
// as vertex * 2^n + mask; the cell spans one grid step along each axis in mask.
struct CubicalComplex {
    const GridFunction& g;
    int n;
    std::size_t masks;

    std::size_t count() const { return g.size() * masks; }
    std::size_t vertex(std::size_t cell) const { return cell / masks; }
    unsigned mask(std::size_t cell) const { return static_cast<unsigned>(cell % masks); }
    int dim(std::size_t cell) const { return std::popcount(mask(cell)); }

    std::size_t step(std::size_t v, int axis) const {
        std::vector<int> c = g.coordinates(v);
        ++c[axis];
        return g.index(c);
    }

    double value(std::size_t cell) const {
        const std::size_t v0 = vertex(cell);
        const unsigned m = mask(cell);
        double best = g[v0];
        for (unsigned sub = m; sub != 0; sub = (sub - 1) & m) {
            std::size_t v = v0;
            for (int a = 0; a < n; ++a)
                if (sub & (1u << a)) v = step(v, a);
            best = std::max(best, g[v]);
        }
        return best;
    }

    std::vector<std::size_t> boundary(std::size_t cell) const {
        const std::size_t v = vertex(cell);
        const unsigned m = mask(cell);
        std::vector<std::size_t> out;
        for (int a = 0; a < n; ++a) {
            if (!(m & (1u << a))) continue;
            const unsigned face = m & ~(1u << a);
            out.push_back(v * masks + face);
            out.push_back(step(v, a) * masks + face);
        }
        return out;
    }
};

// Z/2 column addition on sorted index vectors.
void add_column(std::vector<int>& col, const std::vector<int>& other) {
    std::vector<int> out;
    out.reserve(col.size() + other.size());
    std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(), std::back_inserter(out));
    col.swap(out);
}

}  // namespace

Barcode sublevel_barcode(const GridFunction& g, std::optional<std::uint64_t> tie_shuffle) {
    const int n = g.dimension();
    const CubicalComplex cx{g, n, std::size_t{1} << n};
    const std::size_t N = cx.count();

    std::vector<double> value(N);
    parallel_for(g.size(), [&](std::size_t v) {
        for (std::size_t m = 0; m < cx.masks; ++m) value[v * cx.masks + m] = cx.value(v * cx.masks + m);
    });
    std::vector<std::size_t> tie(N);
    std::iota(tie.begin(), tie.end(), std::size_t{0});
    if (tie_shuffle) std::shuffle(tie.begin(), tie.end(), std::mt19937_64(*tie_shuffle));

    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (value[a] != value[b]) return value[a] < value[b];
        const int da = cx.dim(a), db = cx.dim(b);
        if (da != db) return da < db;
        return tie[a] < tie[b];
    });
    std::vector<int> rank(N);
    for (std::size_t r = 0; r < N; ++r) rank[order[r]] = static_cast<int>(r);

    std::vector<char> is_low(N, 0), killed(N, 0);
    std::vector<int> owner(N, -1);
    std::vector<std::vector<int>> reduced(N);
    Barcode code;
    code.dimension = n;

    for (int d = n; d >= 1; --d) {
        for (std::size_t r = 0; r < N; ++r) {
            const std::size_t cell = order[r];
            if (cx.dim(cell) != d || is_low[r]) continue;
            std::vector<int> col;
            for (std::size_t f : cx.boundary(cell)) col.push_back(rank[f]);
            std::sort(col.begin(), col.end());
            while (!col.empty() && owner[col.back()] >= 0) add_column(col, reduced[owner[col.back()]]);
            if (col.empty()) continue;
            const int low = col.back();
            owner[low] = static_cast<int>(r);
            is_low[low] = 1;
            killed[r] = 1;
            const double birth = value[order[low]], death = value[cell];
            if (birth < death) code.bars.push_back({d - 1, birth, death});
            reduced[r] = std::move(col);
        }
    }
    for (std::size_t r = 0; r < N; ++r)
        if (!is_low[r] && !killed[r]) code.bars.push_back({cx.dim(order[r]), value[order[r]]});

    std::sort(code.bars.begin(), code.bars.end(), [](const Bar& a, const Bar& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.death < b.death;
    });
    return code;
}

namespace {

double linf(const Bar& a, const Bar& b) { return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death)); }
double to_diagonal(const Bar& a) { return (a.death - a.birth) / 2.0; }

bool perfect_matching_within(const std::vector<Bar>& A, const std::vector<Bar>& B, double r) {
    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
    const std::size_t na = A.size(), nb = B.size(), N = na + nb;
    // left: A_i (i < na), diagonal copies of B_j; right: B_j, diagonal copies of A_i
    Graph G(2 * N);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j)
            if (linf(A[i], B[j]) <= r) boost::add_edge(i, N + j, G);
        if (to_diagonal(A[i]) <= r) boost::add_edge(i, N + nb + i, G);
    }
    for (std::size_t j = 0; j < nb; ++j) {
        if (to_diagonal(B[j]) <= r) boost::add_edge(na + j, N + j, G);
        for (std::size_t i = 0; i < na; ++i) boost::add_edge(na + j, N + nb + i, G);
    }
    std::vector<boost::graph_traits<Graph>::vertex_descriptor> mate(2 * N);
    boost::edmonds_maximum_cardinality_matching(G, &mate[0]);
    return boost::matching_size(G, &mate[0]) == N;
}

}  // namespace

double bottleneck_distance(const Barcode& a, const Barcode& b, int degree) {
    std::vector<Bar> fa, fb;
    std::vector<double> ia, ib;
    for (const Bar& x : a.degree(degree)) (x.infinite() ? ia.push_back(x.birth) : fa.push_back(x));
    for (const Bar& x : b.degree(degree)) (x.infinite() ? ib.push_back(x.birth) : fb.push_back(x));
    if (ia.size() != ib.size()) return std::numeric_limits<double>::infinity();
    double inf_part = 0.0;
    for (std::size_t i = 0; i < ia.size(); ++i) inf_part = std::max(inf_part, std::abs(ia[i] - ib[i]));
    if (fa.empty() && fb.empty()) return inf_part;

    std::vector<double> cand{0.0};
    for (const Bar& x : fa) cand.push_back(to_diagonal(x));
    for (const Bar& y : fb) cand.push_back(to_diagonal(y));
    for (const Bar& x : fa)
        for (const Bar& y : fb) cand.push_back(linf(x, y));
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    std::size_t lo = 0, hi = cand.size() - 1;  // the largest candidate is always feasible
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (perfect_matching_within(fa, fb, cand[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return std::max(inf_part, cand[lo]);
}

StabilityReport stability_check(const TableCurve& ta, const TableCurve& tb, int n, int m) {
    StabilityReport rep;
    rep.n = n;
    rep.m = m;
    const GridFunction ga = sample_orbit_functional(ta, n, m), gb = sample_orbit_functional(tb, n, m);
    const Barcode ba = sublevel_barcode(ga), bb = sublevel_barcode(gb);
    rep.functional_gap = functional_gap(ta, tb, n, m).gap;

    std::vector<double> diff(ga.size());
    for (std::size_t i = 0; i < ga.size(); ++i) {
        diff[i] = ga[i] - gb[i];
        rep.grid_sup = std::max(rep.grid_sup, std::abs(diff[i]));
    }
    // oscillation of F_a - F_b over the vertices of each top cell
    const std::size_t corners = std::size_t{1} << n;
    for (std::size_t v = 0; v < ga.size(); ++v) {
        const std::vector<int> c = ga.coordinates(v);
        double lo = diff[v], hi = diff[v];
        for (std::size_t s = 1; s < corners; ++s) {
            std::vector<int> w(c);
            for (int a = 0; a < n; ++a)
                if (s & (std::size_t{1} << a)) ++w[a];
            const double x = diff[ga.index(w)];
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        rep.slack = std::max(rep.slack, hi - lo);
    }

    std::vector<double> bn(n + 1);
    std::vector<int> degrees(n + 1);
    std::iota(degrees.begin(), degrees.end(), 0);
    parallel_for(degrees.size(), [&](std::size_t d) { bn[d] = bottleneck_distance(ba, bb, static_cast<int>(d)); });
    rep.bottleneck = bn;
    rep.pass = true;
    for (int d = 0; d <= n; ++d) {
        if (!(bn[d] <= rep.functional_gap + rep.slack) || !(bn[d] <= rep.grid_sup * (1.0 + 1e-12)))
            throw Error(ErrorCode::StabilityViolated, "bottleneck distance exceeds the functional gap", d);
    }
    return rep;
}

}  // namespace hb
