#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpp {

constexpr int kMaxDim = 6;

// Small fixed-capacity integer vector for lattice coordinates.
struct Coord {
    std::array<int, kMaxDim> v{};
    int d = 0;

    Coord() = default;
    Coord(std::initializer_list<int> xs) {
        d = static_cast<int>(xs.size());
        int i = 0;
        for (int x : xs) v[i++] = x;
    }
    static Coord zero(int dim) {
        Coord c;
        c.d = dim;
        return c;
    }
    int& operator[](int i) { return v[i]; }
    int operator[](int i) const { return v[i]; }
    bool operator==(const Coord& o) const {
        if (d != o.d) return false;
        for (int i = 0; i < d; ++i)
            if (v[i] != o.v[i]) return false;
        return true;
    }
    Coord operator+(const Coord& o) const {
        Coord r = *this;
        for (int i = 0; i < d; ++i) r.v[i] += o.v[i];
        return r;
    }
    long l1() const {
        long s = 0;
        for (int i = 0; i < d; ++i) s += v[i] < 0 ? -v[i] : v[i];
        return s;
    }
    std::string str() const;
};

struct Edge {
    Coord min_endpoint;  // lexicographically smaller endpoint
    int axis = 0;
};

// Finite axis-aligned window of Z^d with a canonical dense edge index.
//
// Vertices are indexed row-major with axis 0 most significant, which makes
// index order coincide with lexicographic coordinate order. Edges are
// enumerated by (lex min endpoint, then axis); this order is frozen: the
// martingale filtration and every persisted weight array depend on it.
class LatticeWindow {
  public:
    LatticeWindow(Coord lo, Coord hi);

    int dim() const { return lo_.d; }
    const Coord& lo() const { return lo_; }
    const Coord& hi() const { return hi_; }
    std::int64_t vertex_count() const { return vcount_; }
    std::int64_t edge_count() const { return ecount_; }

    bool contains(const Coord& c) const {
        for (int i = 0; i < dim(); ++i)
            if (c[i] < lo_[i] || c[i] > hi_[i]) return false;
        return true;
    }
    bool on_boundary(std::int64_t vidx) const;

    std::int64_t vertex_index(const Coord& c) const;
    Coord vertex_at(std::int64_t idx) const;

    // -1 when the edge (vertex_at(v), +axis) leaves the window.
    std::int64_t edge_at(std::int64_t vidx, int axis) const { return edge_of_[vidx * dim() + axis]; }
    Edge edge(std::int64_t eidx) const;

    // Neighbor along +/- axis, or -1 when outside.
    std::int64_t neighbor(std::int64_t vidx, int axis, bool positive) const;
    // Edge index between vidx and its (existing) neighbor.
    std::int64_t incident_edge(std::int64_t vidx, int axis, bool positive) const;

    std::vector<Edge> enumerate_edges() const;

  private:
    Coord lo_, hi_;
    std::array<std::int64_t, kMaxDim> stride_{};
    std::array<int, kMaxDim> size_{};
    std::int64_t vcount_ = 0;
    std::int64_t ecount_ = 0;
    std::vector<std::int64_t> edge_of_;      // (vidx, axis) -> edge index or -1
    std::vector<std::int64_t> edge_vertex_;  // edge index -> min-endpoint vidx
    std::vector<int> edge_axis_;
};

// B_m, the closed l^1 ball of radius m around the origin.
struct Ball {
    int m = 0;
    std::vector<Coord> vertices;  // lex order, contains 0
};

Ball ball(int d, int m);

// Exact |B_m| by an independent recursion (used as an oracle in tests too).
std::int64_t ball_cardinality(int d, int m);

// Smallest box containing B_m and x+B_m, expanded by `margin` on every side.
LatticeWindow window_for(const Coord& x, int m, int margin);

}  // namespace fpp
