#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "distributions.hpp"
#include "lattice.hpp"

namespace fpp {

// One sampled weight per window edge, plus the bits that generated it.
// Weights are keyed by absolute edge location, so re-sampling the same
// (seed, replica) on a larger window extends the configuration unchanged.
struct EdgeConfig {
    LatticeWindow window;
    DistPtr dist;
    std::vector<double> weights;               // canonical edge order
    std::vector<BernoulliEncoding> encodings;  // empty when not retained
    std::uint64_t master_seed = 0;
    std::uint64_t replica = 0;
    unsigned bit_depth = 0;

    // Exact integer mode for purely atomic rational laws.
    std::optional<std::int64_t> int_scale;
    std::vector<std::int64_t> int_weights;  // weights * int_scale, exact
};

EdgeConfig sample_config(DistPtr dist, const LatticeWindow& window, std::uint64_t master_seed,
                         std::uint64_t replica, unsigned bit_depth, bool keep_encodings = true);

// Config with explicitly chosen weights (gadgets, exact-check systems).
// Integer mode is enabled when every weight is exact under a rational scale.
EdgeConfig manual_config(DistPtr dist, const LatticeWindow& window, std::vector<double> weights);

// Replacement weight for a single edge; queries never mutate the config.
// An infinite weight removes the edge.
struct Overlay {
    std::int64_t edge = -1;
    double weight = 0.0;
    static Overlay none() { return {}; }
    static Overlay remove(std::int64_t e) {
        return {e, std::numeric_limits<double>::infinity()};
    }
    bool active() const { return edge >= 0; }
};

struct DistanceField {
    std::int64_t source = -1;
    std::vector<double> dist;
    std::vector<std::int64_t> parent_edge;  // -1 at source / unreached
};

struct PassageResult {
    double T = 0.0;
    bool boundary_touched = false;
    DistanceField from_u;  // forward field
    DistanceField from_v;  // backward field (graph is undirected)
};

// Exact shortest-path value over paths confined to the window, plus both
// distance fields and a flag for optimal paths meeting the window boundary.
PassageResult passage_time(const EdgeConfig& cfg, const Coord& u, const Coord& v,
                           const Overlay& ov = Overlay::none());

struct GeodesicReport {
    double T = 0.0;
    std::vector<std::int64_t> path;     // edge ids of one geodesic, in order from u
    std::vector<std::int64_t> geo_set;  // edges on every geodesic, sorted
    long max_length = 0;                // G(u,v)
    bool max_length_exact = true;       // false: flagged lower bound (tie blow-up)
    bool unique_geodesic = false;
    bool boundary_touched = false;
};

GeodesicReport geodesic_report(const EdgeConfig& cfg, const Coord& u, const Coord& v,
                               const Overlay& ov = Overlay::none());

// {e : every geodesic from u to v uses e}. Membership is decided by the
// avoid-edge re-query against candidates on one extracted geodesic; atomic
// rational laws are compared in exact integer arithmetic.
std::vector<std::int64_t> geodesic_intersection(const EdgeConfig& cfg, const Coord& u,
                                                const Coord& v,
                                                const Overlay& ov = Overlay::none());

long max_geodesic_length(const EdgeConfig& cfg, const Coord& u, const Coord& v);

// D_{z,e}: largest weight for edge e at which e still lies on some geodesic
// from z to z+x, all other weights fixed; 0 if none. Computed from the two
// fields with e removed, so the value never depends on the current t_e.
struct CriticalValue {
    double D = 0.0;
    double through = 0.0;  // A: min cost using e, e's own weight excluded
    double avoid = 0.0;    // B: min cost with e removed (may be +inf)
};
CriticalValue critical_value(const EdgeConfig& cfg, std::int64_t edge, const Coord& z,
                             const Coord& x);

// Y_x = G(0,x) 1{T(0,x) < a G(0,x)}.
long kesten_indicator(const GeodesicReport& report, double a);

// Sum of animal weights 1 - ln F(t_e) over Geo(z, z+x).
double geodesic_log_weight(const EdgeConfig& cfg, const Coord& z, const Coord& x);

// Relative-tolerance comparison used for double-valued tie decisions.
constexpr double kGeoRelTol = 1e-9;

}  // namespace fpp
