#include "lattice.hpp"

#include <algorithm>

namespace fpp {

std::string Coord::str() const {
    std::string s = "(";
    for (int i = 0; i < d; ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

LatticeWindow::LatticeWindow(Coord lo, Coord hi) : lo_(lo), hi_(hi) {
    if (lo.d != hi.d || lo.d < 1 || lo.d > kMaxDim)
        throw std::invalid_argument("window: bad dimension");
    for (int i = 0; i < dim(); ++i)
        if (lo_[i] > hi_[i]) throw std::invalid_argument("window: lo > hi");

    vcount_ = 1;
    for (int i = 0; i < dim(); ++i) {
        size_[i] = hi_[i] - lo_[i] + 1;
        vcount_ *= size_[i];
    }
    stride_[dim() - 1] = 1;
    for (int i = dim() - 2; i >= 0; --i) stride_[i] = stride_[i + 1] * size_[i + 1];

    edge_of_.assign(vcount_ * dim(), -1);
    for (std::int64_t v = 0; v < vcount_; ++v) {
        Coord c = vertex_at(v);
        for (int a = 0; a < dim(); ++a) {
            if (c[a] + 1 > hi_[a]) continue;
            edge_of_[v * dim() + a] = ecount_++;
            edge_vertex_.push_back(v);
            edge_axis_.push_back(a);
        }
    }
}

bool LatticeWindow::on_boundary(std::int64_t vidx) const {
    Coord c = vertex_at(vidx);
    for (int i = 0; i < dim(); ++i)
        if (c[i] == lo_[i] || c[i] == hi_[i]) return true;
    return false;
}

std::int64_t LatticeWindow::vertex_index(const Coord& c) const {
    std::int64_t idx = 0;
    for (int i = 0; i < dim(); ++i) idx += std::int64_t(c[i] - lo_[i]) * stride_[i];
    return idx;
}

Coord LatticeWindow::vertex_at(std::int64_t idx) const {
    Coord c;
    c.d = dim();
    for (int i = 0; i < dim(); ++i) {
        c[i] = lo_[i] + int(idx / stride_[i]);
        idx %= stride_[i];
    }
    return c;
}

Edge LatticeWindow::edge(std::int64_t eidx) const {
    return Edge{vertex_at(edge_vertex_[eidx]), edge_axis_[eidx]};
}

std::int64_t LatticeWindow::neighbor(std::int64_t vidx, int axis, bool positive) const {
    Coord c = vertex_at(vidx);
    if (positive) {
        if (c[axis] + 1 > hi_[axis]) return -1;
        return vidx + stride_[axis];
    }
    if (c[axis] - 1 < lo_[axis]) return -1;
    return vidx - stride_[axis];
}

std::int64_t LatticeWindow::incident_edge(std::int64_t vidx, int axis, bool positive) const {
    if (positive) return edge_of_[vidx * dim() + axis];
    std::int64_t nb = neighbor(vidx, axis, false);
    return nb < 0 ? -1 : edge_of_[nb * dim() + axis];
}

std::vector<Edge> LatticeWindow::enumerate_edges() const {
    std::vector<Edge> out;
    out.reserve(ecount_);
    for (std::int64_t e = 0; e < ecount_; ++e) out.push_back(edge(e));
    return out;
}

namespace {

void ball_rec(int d, int m, int axis, Coord& cur, long used, std::vector<Coord>& out) {
    if (axis == d) {
        out.push_back(cur);
        return;
    }
    int budget = int(m - used);
    for (int v = -budget; v <= budget; ++v) {
        cur[axis] = v;
        ball_rec(d, m, axis + 1, cur, used + (v < 0 ? -v : v), out);
    }
}

}  // namespace

Ball ball(int d, int m) {
    if (m < 0) throw std::invalid_argument("ball: m < 0");
    Ball b;
    b.m = m;
    Coord cur = Coord::zero(d);
    ball_rec(d, m, 0, cur, 0, b.vertices);
    return b;
}

std::int64_t ball_cardinality(int d, int m) {
    if (d == 0) return 1;
    std::int64_t n = 0;
    for (int k = -m; k <= m; ++k) n += ball_cardinality(d - 1, m - (k < 0 ? -k : k));
    return n;
}

LatticeWindow window_for(const Coord& x, int m, int margin) {
    Coord lo = Coord::zero(x.d), hi = Coord::zero(x.d);
    for (int i = 0; i < x.d; ++i) {
        lo[i] = std::min(0, x[i]) - m - margin;
        hi[i] = std::max(0, x[i]) + m + margin;
    }
    return LatticeWindow(lo, hi);
}

}  // namespace fpp
