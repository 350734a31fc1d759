#include "geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace fpp {

EdgeConfig sample_config(DistPtr dist, const LatticeWindow& window, std::uint64_t master_seed,
                         std::uint64_t replica, unsigned bit_depth, bool keep_encodings) {
    EdgeConfig cfg{window, std::move(dist)};
    cfg.master_seed = master_seed;
    cfg.replica = replica;
    cfg.bit_depth = bit_depth;
    const std::int64_t E = window.edge_count();
    cfg.weights.resize(E);
    if (keep_encodings) cfg.encodings.resize(E);
    for (std::int64_t e = 0; e < E; ++e) {
        Edge ed = window.edge(e);
        RngStream stream(edge_stream_seed(master_seed, replica, ed.min_endpoint.v.data(),
                                          window.dim(), ed.axis));
        auto [w, enc] = cfg.dist->sample_weight(stream, bit_depth);
        cfg.weights[e] = w;
        if (keep_encodings) cfg.encodings[e] = enc;
    }
    if (auto scale = cfg.dist->rational_scale()) {
        cfg.int_scale = scale;
        cfg.int_weights.resize(E);
        for (std::int64_t e = 0; e < E; ++e)
            cfg.int_weights[e] = std::llround(cfg.weights[e] * double(*scale));
    }
    return cfg;
}

EdgeConfig manual_config(DistPtr dist, const LatticeWindow& window, std::vector<double> weights) {
    if (std::int64_t(weights.size()) != window.edge_count())
        throw std::invalid_argument("manual_config: weight count != edge count");
    EdgeConfig cfg{window, std::move(dist)};
    cfg.weights = std::move(weights);
    std::int64_t scale = 1;
    bool exact = true;
    for (double w : cfg.weights) {
        if (!(w >= 0) || !std::isfinite(w)) throw std::invalid_argument("manual_config: bad weight");
        while (exact && std::abs(w * double(scale) - std::llround(w * double(scale))) > 1e-9) {
            scale *= 2;
            if (scale > (1 << 20)) {
                exact = false;
                break;
            }
        }
    }
    if (exact) {
        cfg.int_scale = scale;
        cfg.int_weights.resize(cfg.weights.size());
        for (size_t i = 0; i < cfg.weights.size(); ++i)
            cfg.int_weights[i] = std::llround(cfg.weights[i] * double(scale));
    }
    return cfg;
}

namespace {

template <class W>
struct Wt;

template <>
struct Wt<double> {
    static constexpr double inf = std::numeric_limits<double>::infinity();
    // Tightness / membership comparisons; strictness uses kGeoRelTol instead.
    static bool eq(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }
    static bool strictly_above(double a, double b) {
        return a > b + kGeoRelTol * std::max(1.0, std::abs(b));
    }
    static double to_double(double x, double) { return x; }
};

template <>
struct Wt<std::int64_t> {
    static constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max();
    static bool eq(std::int64_t a, std::int64_t b) { return a == b; }
    static bool strictly_above(std::int64_t a, std::int64_t b) { return a > b; }
    static double to_double(std::int64_t x, double scale) {
        return x == inf ? std::numeric_limits<double>::infinity() : double(x) / scale;
    }
};

template <class W>
struct FieldT {
    std::vector<W> dist;
    std::vector<std::int64_t> parent;
};

template <class W>
FieldT<W> run_dijkstra(const LatticeWindow& win, const std::vector<W>& weights,
                       std::int64_t source, std::int64_t ov_edge, W ov_weight) {
    const std::int64_t V = win.vertex_count();
    const int d = win.dim();
    FieldT<W> f;
    f.dist.assign(V, Wt<W>::inf);
    f.parent.assign(V, -1);
    f.dist[source] = W(0);

    using Item = std::pair<W, std::int64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({W(0), source});
    std::vector<bool> done(V, false);

    while (!heap.empty()) {
        auto [du, u] = heap.top();
        heap.pop();
        if (done[u]) continue;  // lazy deletion
        done[u] = true;
        for (int axis = 0; axis < d; ++axis) {
            for (bool pos : {true, false}) {
                std::int64_t v = win.neighbor(u, axis, pos);
                if (v < 0 || done[v]) continue;
                std::int64_t e = win.incident_edge(u, axis, pos);
                W w = (e == ov_edge) ? ov_weight : weights[e];
                if (w == Wt<W>::inf) continue;  // removed edge
                W nd = du + w;
                if (nd < f.dist[v]) {
                    f.dist[v] = nd;
                    f.parent[v] = e;
                    heap.push({nd, v});
                }
            }
        }
    }
    return f;
}

template <class W>
std::pair<std::int64_t, std::int64_t> edge_endpoints(const LatticeWindow& win, std::int64_t e) {
    Edge ed = win.edge(e);
    std::int64_t a = win.vertex_index(ed.min_endpoint);
    return {a, win.neighbor(a, ed.axis, true)};
}

template <class W>
std::vector<std::int64_t> extract_path(const LatticeWindow& win, const FieldT<W>& fu,
                                       std::int64_t u, std::int64_t v) {
    std::vector<std::int64_t> path;
    std::int64_t cur = v;
    while (cur != u) {
        std::int64_t e = fu.parent[cur];
        if (e < 0) throw std::runtime_error("geodesics: target unreachable");
        path.push_back(e);
        auto [a, b] = edge_endpoints<W>(win, e);
        cur = (cur == b) ? a : b;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

template <class W>
bool touches_boundary(const LatticeWindow& win, const FieldT<W>& fu, const FieldT<W>& fv, W T) {
    for (std::int64_t w = 0; w < win.vertex_count(); ++w) {
        if (!win.on_boundary(w)) continue;
        if (fu.dist[w] == Wt<W>::inf || fv.dist[w] == Wt<W>::inf) continue;
        W s = fu.dist[w] + fv.dist[w];
        if (s < T || Wt<W>::eq(s, T)) return true;
    }
    return false;
}

// Directed tight edge a->b: on some geodesic, traversed in that direction.
template <class W>
bool tight_edge(const FieldT<W>& fu, const FieldT<W>& fv, std::int64_t a, std::int64_t b, W w,
                W T) {
    if (fu.dist[a] == Wt<W>::inf || fv.dist[b] == Wt<W>::inf) return false;
    return Wt<W>::eq(fu.dist[a] + w + fv.dist[b], T);
}

struct TieAnalysis {
    long max_length = 0;
    bool exact = true;
    bool unique = false;
};

// Enumerate self-avoiding paths in the tight subgraph (zero-weight ties make
// it cyclic). Budgeted; on overrun the result is a flagged lower bound.
template <class W>
class TightDfs {
  public:
    TightDfs(const LatticeWindow& win, const std::vector<W>& weights, std::int64_t ov_edge,
             W ov_weight, const FieldT<W>& fu, const FieldT<W>& fv, W T, std::int64_t target)
        : win_(win), weights_(weights), ov_edge_(ov_edge), ov_weight_(ov_weight), fu_(fu),
          fv_(fv), T_(T), target_(target), visited_(win.vertex_count(), false) {}

    TieAnalysis run(std::int64_t source, long budget) {
        budget_ = budget;
        visited_[source] = true;
        walk(source, 0);
        TieAnalysis out;
        out.max_length = best_;
        out.exact = budget_ > 0;
        out.unique = out.exact && complete_ == 1;
        return out;
    }

  private:
    void walk(std::int64_t u, long depth) {
        if (budget_ <= 0) return;
        --budget_;
        if (u == target_) {
            best_ = std::max(best_, depth);
            if (complete_ < 2) ++complete_;
            return;
        }
        for (int axis = 0; axis < win_.dim(); ++axis) {
            for (bool pos : {true, false}) {
                std::int64_t v = win_.neighbor(u, axis, pos);
                if (v < 0 || visited_[v]) continue;
                std::int64_t e = win_.incident_edge(u, axis, pos);
                W w = (e == ov_edge_) ? ov_weight_ : weights_[e];
                if (w == Wt<W>::inf || !tight_edge(fu_, fv_, u, v, w, T_)) continue;
                visited_[v] = true;
                walk(v, depth + 1);
                visited_[v] = false;
            }
        }
    }

    const LatticeWindow& win_;
    const std::vector<W>& weights_;
    std::int64_t ov_edge_;
    W ov_weight_;
    const FieldT<W>& fu_;
    const FieldT<W>& fv_;
    W T_;
    std::int64_t target_;
    std::vector<bool> visited_;
    long budget_ = 0;
    long best_ = 0;
    int complete_ = 0;
};

template <class W>
struct EngineResult {
    W T;
    bool reachable = true;
    bool boundary_touched = false;
    std::vector<std::int64_t> path;
    std::vector<std::int64_t> geo_set;
    long max_length = 0;
    bool max_length_exact = true;
    bool unique = false;
};

template <class W>
EngineResult<W> analyze_pair(const LatticeWindow& win, const std::vector<W>& weights,
                             std::int64_t u, std::int64_t v, std::int64_t ov_edge, W ov_weight,
                             bool want_structure) {
    EngineResult<W> r{};
    auto fu = run_dijkstra(win, weights, u, ov_edge, ov_weight);
    r.T = fu.dist[v];
    if (r.T == Wt<W>::inf) {
        r.reachable = false;
        return r;
    }
    auto fv = run_dijkstra(win, weights, v, ov_edge, ov_weight);
    r.boundary_touched = touches_boundary(win, fu, fv, r.T);
    r.path = extract_path(win, fu, u, v);
    if (!want_structure) return r;

    // Classify the tight subgraph: positive tight weights give a DAG graded
    // by fu; zero-weight ties force budgeted enumeration.
    const std::int64_t V = win.vertex_count();
    std::vector<std::int64_t> order;
    order.reserve(V / 2);
    bool zero_tie = false;
    for (std::int64_t a = 0; a < V; ++a) {
        if (fu.dist[a] == Wt<W>::inf || fv.dist[a] == Wt<W>::inf) continue;
        if (!Wt<W>::eq(fu.dist[a] + fv.dist[a], r.T)) continue;
        order.push_back(a);
        for (int axis = 0; axis < win.dim(); ++axis) {
            for (bool pos : {true, false}) {
                std::int64_t b = win.neighbor(a, axis, pos);
                if (b < 0) continue;
                std::int64_t e = win.incident_edge(a, axis, pos);
                W w = (e == ov_edge) ? ov_weight : weights[e];
                if (w == Wt<W>::inf) continue;
                if (w == W(0) && tight_edge(fu, fv, a, b, w, r.T)) zero_tie = true;
            }
        }
    }

    if (!zero_tie) {
        std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
            return fu.dist[a] != fu.dist[b] ? fu.dist[a] < fu.dist[b] : a < b;
        });
        std::vector<long> longest(V, -1);
        std::vector<int> count(V, 0);
        longest[u] = 0;
        count[u] = 1;
        for (std::int64_t a : order) {
            if (longest[a] < 0) continue;
            for (int axis = 0; axis < win.dim(); ++axis) {
                for (bool pos : {true, false}) {
                    std::int64_t b = win.neighbor(a, axis, pos);
                    if (b < 0) continue;
                    std::int64_t e = win.incident_edge(a, axis, pos);
                    W w = (e == ov_edge) ? ov_weight : weights[e];
                    if (w == Wt<W>::inf || !tight_edge(fu, fv, a, b, w, r.T)) continue;
                    longest[b] = std::max(longest[b], longest[a] + 1);
                    count[b] = std::min(count[b] + count[a], 2);
                }
            }
        }
        r.max_length = longest[v];
        r.max_length_exact = true;
        r.unique = count[v] == 1;
    } else {
        constexpr long kSmallTieEdges = 10000;
        const long budget = win.edge_count() <= kSmallTieEdges ? 4'000'000 : 200'000;
        TightDfs<W> dfs(win, weights, ov_edge, ov_weight, fu, fv, r.T, v);
        TieAnalysis tie = dfs.run(u, budget);
        r.max_length = std::max<long>(tie.max_length, long(r.path.size()));
        r.max_length_exact = tie.exact;
        r.unique = tie.unique;
    }

    if (r.unique) {
        r.geo_set = r.path;
        std::sort(r.geo_set.begin(), r.geo_set.end());
    } else {
        // Avoid-edge re-query on the candidates: Geo(u,v) is contained in
        // any single geodesic's edge set.
        std::vector<W> scratch;
        const std::vector<W>* base = &weights;
        if (ov_edge >= 0) {
            scratch = weights;
            scratch[ov_edge] = ov_weight;
            base = &scratch;
        }
        for (std::int64_t e : r.path) {
            auto fr = run_dijkstra(win, *base, u, e, Wt<W>::inf);
            W Tr = fr.dist[v];
            if (Tr == Wt<W>::inf || Wt<W>::strictly_above(Tr, r.T)) r.geo_set.push_back(e);
        }
        std::sort(r.geo_set.begin(), r.geo_set.end());
    }
    return r;
}

bool int_mode_usable(const EdgeConfig& cfg, const Overlay& ov, std::int64_t* ov_scaled) {
    if (!cfg.int_scale) return false;
    *ov_scaled = -1;
    if (!ov.active()) return true;
    if (std::isinf(ov.weight)) {
        *ov_scaled = Wt<std::int64_t>::inf;
        return true;
    }
    double scaled = ov.weight * double(*cfg.int_scale);
    double rounded = std::llround(scaled);
    if (std::abs(scaled - rounded) < 1e-9 && rounded >= 0) {
        *ov_scaled = std::int64_t(rounded);
        return true;
    }
    return false;
}

void check_in_window(const EdgeConfig& cfg, const Coord& c, const char* what) {
    if (c.d != cfg.window.dim() || !cfg.window.contains(c))
        throw std::invalid_argument(std::string("geodesics: ") + what + " " + c.str() +
                                    " outside window");
}

template <class W>
GeodesicReport to_report(const EngineResult<W>& er, double scale) {
    GeodesicReport rep;
    rep.T = Wt<W>::to_double(er.T, scale);
    rep.path = er.path;
    rep.geo_set = er.geo_set;
    rep.max_length = er.max_length;
    rep.max_length_exact = er.max_length_exact;
    rep.unique_geodesic = er.unique;
    rep.boundary_touched = er.boundary_touched;
    return rep;
}

}  // namespace

PassageResult passage_time(const EdgeConfig& cfg, const Coord& u, const Coord& v,
                           const Overlay& ov) {
    check_in_window(cfg, u, "source");
    check_in_window(cfg, v, "target");
    std::int64_t ui = cfg.window.vertex_index(u), vi = cfg.window.vertex_index(v);
    double ovw = ov.active() ? ov.weight : 0.0;
    auto fu = run_dijkstra(cfg.window, cfg.weights, ui, ov.active() ? ov.edge : -1, ovw);
    auto fv = run_dijkstra(cfg.window, cfg.weights, vi, ov.active() ? ov.edge : -1, ovw);
    PassageResult pr;
    pr.T = fu.dist[vi];
    if (std::isinf(pr.T)) throw std::runtime_error("passage_time: target unreachable");
    pr.boundary_touched = touches_boundary(cfg.window, fu, fv, pr.T);
    pr.from_u = DistanceField{ui, std::move(fu.dist), std::move(fu.parent)};
    pr.from_v = DistanceField{vi, std::move(fv.dist), std::move(fv.parent)};
    return pr;
}

GeodesicReport geodesic_report(const EdgeConfig& cfg, const Coord& u, const Coord& v,
                               const Overlay& ov) {
    check_in_window(cfg, u, "source");
    check_in_window(cfg, v, "target");
    std::int64_t ui = cfg.window.vertex_index(u), vi = cfg.window.vertex_index(v);
    std::int64_t ov_scaled = -1;
    if (int_mode_usable(cfg, ov, &ov_scaled)) {
        auto er = analyze_pair<std::int64_t>(cfg.window, cfg.int_weights, ui, vi,
                                             ov.active() ? ov.edge : -1, ov_scaled, true);
        if (!er.reachable) throw std::runtime_error("geodesic_report: target unreachable");
        return to_report(er, double(*cfg.int_scale));
    }
    auto er = analyze_pair<double>(cfg.window, cfg.weights, ui, vi, ov.active() ? ov.edge : -1,
                                   ov.active() ? ov.weight : 0.0, true);
    if (!er.reachable) throw std::runtime_error("geodesic_report: target unreachable");
    return to_report(er, 1.0);
}

std::vector<std::int64_t> geodesic_intersection(const EdgeConfig& cfg, const Coord& u,
                                                const Coord& v, const Overlay& ov) {
    if (u == v) throw std::invalid_argument("geodesic_intersection: u == v");
    return geodesic_report(cfg, u, v, ov).geo_set;
}

long max_geodesic_length(const EdgeConfig& cfg, const Coord& u, const Coord& v) {
    if (u == v) throw std::invalid_argument("max_geodesic_length: u == v");
    return geodesic_report(cfg, u, v).max_length;
}

CriticalValue critical_value(const EdgeConfig& cfg, std::int64_t edge, const Coord& z,
                             const Coord& x) {
    check_in_window(cfg, z, "z");
    Coord zx = z + x;
    check_in_window(cfg, zx, "z+x");
    std::int64_t zi = cfg.window.vertex_index(z), xi = cfg.window.vertex_index(zx);
    Edge ed = cfg.window.edge(edge);
    std::int64_t p = cfg.window.vertex_index(ed.min_endpoint);
    std::int64_t q = cfg.window.neighbor(p, ed.axis, true);

    CriticalValue cv;
    if (cfg.int_scale) {
        const double S = double(*cfg.int_scale);
        auto fz = run_dijkstra(cfg.window, cfg.int_weights, zi, edge, Wt<std::int64_t>::inf);
        auto fx = run_dijkstra(cfg.window, cfg.int_weights, xi, edge, Wt<std::int64_t>::inf);
        auto add = [](std::int64_t a, std::int64_t b) {
            return (a == Wt<std::int64_t>::inf || b == Wt<std::int64_t>::inf)
                       ? Wt<std::int64_t>::inf
                       : a + b;
        };
        std::int64_t A = std::min(add(fz.dist[p], fx.dist[q]), add(fz.dist[q], fx.dist[p]));
        std::int64_t B = fz.dist[xi];
        cv.through = Wt<std::int64_t>::to_double(A, S);
        cv.avoid = Wt<std::int64_t>::to_double(B, S);
    } else {
        auto fz = run_dijkstra(cfg.window, cfg.weights, zi, edge, Wt<double>::inf);
        auto fx = run_dijkstra(cfg.window, cfg.weights, xi, edge, Wt<double>::inf);
        cv.through = std::min(fz.dist[p] + fx.dist[q], fz.dist[q] + fx.dist[p]);
        cv.avoid = fz.dist[xi];
    }
    cv.D = cv.avoid >= cv.through ? cv.avoid - cv.through : 0.0;
    return cv;
}

long kesten_indicator(const GeodesicReport& report, double a) {
    if (!(a > 0)) throw std::domain_error("kesten_indicator: rate must be positive");
    return report.T < a * double(report.max_length) ? report.max_length : 0;
}

double geodesic_log_weight(const EdgeConfig& cfg, const Coord& z, const Coord& x) {
    Coord zx = z + x;
    auto geo = geodesic_intersection(cfg, z, zx);
    double sum = 0.0;
    for (std::int64_t e : geo) sum += cfg.dist->animal_weight(cfg.weights[e]);
    return sum;
}

}  // namespace fpp
