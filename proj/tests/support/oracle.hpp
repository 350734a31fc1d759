#pragma once

// Test-only oracles. Everything here is definition-level brute force and
// stays independent of the implementation paths it is used to check.

#include <cstdint>
#include <vector>

#include "geodesics.hpp"

namespace fpp::oracle {

struct PathRecord {
    double cost = 0.0;
    std::int64_t cost_int = 0;  // valid in integer mode
    std::vector<std::int64_t> edges;
};

struct Report {
    double T = 0.0;
    std::vector<std::int64_t> geo_set;  // edges common to all enumerated geodesics
    long max_length = 0;
    long n_geodesics = 0;
    std::vector<PathRecord> paths;  // every self-avoiding path u -> v
};

// Enumerates every self-avoiding path from u to v, keeping whole-path costs.
// Geodesics are paths whose cost equals the minimum (exactly in integer
// mode, within 1e-12 relative otherwise); geo_set is their literal edge
// intersection.
Report enumerate_paths(const EdgeConfig& cfg, const Coord& u, const Coord& v);

// Minimum cost among enumerated paths avoiding a given edge (+inf if none).
double min_cost_avoiding(const Report& rep, std::int64_t edge);

// Unpruned edge-animal brute force: all connected edge sets of size n with
// an endpoint at the origin, deduplicated through canonical sorted keys.
double brute_force_Nn(const LatticeWindow& window, const std::vector<double>& w, int n);

}  // namespace fpp::oracle
