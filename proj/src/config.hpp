#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "estimators.hpp"

namespace fpp {

// Configuration / usage problems map to CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// I/O problems map to CLI exit code 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fully resolved flat configuration. One schema serves every subcommand;
// each reads the keys it needs. Defaults are filled at resolution and the
// echo lists every key, so parse(echo(c)) == c.
struct ResolvedConfig {
    int d = 2;
    Coord x{16, 0};
    std::string dist_kind = "uniform";
    double dist_rate = 1.0;     // exponential
    double dist_a = 1.0, dist_b = 2.0, dist_p = 0.5;  // two_point
    double dist_p0 = 0.25;      // bernoulli
    double dist_value = 1.0;    // point_mass
    std::string dist_table;     // piecewise CSV path
    double zeta = 0.0;          // 0 -> (4d)^{-1}
    long replicas = 1000;
    std::uint64_t seed = 1;
    unsigned bit_depth = 32;
    int margin = 0;             // 0 -> auto
    int max_doublings = 3;
    std::vector<double> lambda_grid{0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4};
    int workers = 1;
    double kesten_a = 0.1;
    double d12 = 2.0;
    bool allow_supercritical = false;
    std::vector<long> sizes{8, 16, 32, 64};
    int animals_n_lo = 1;
    int animals_n_hi = 8;
    long animals_replicas = 200;
    std::vector<double> animals_beta_grid{0.0, 0.05, 0.1, 0.2};
    bool animals_allow_greedy = false;
    long verify_systems = 100;
    long verify_tuples = 10000;
    long verify_quadrature = 500;
    std::string out_dir;        // resolved from key/env/cwd

    DistPtr make_dist() const;
    RunConfig run_config() const;
    // Flat key = value text reproducing this configuration exactly.
    std::string echo() const;
    std::map<std::string, std::string> echo_map() const;
};

// Parse a config file (optional) and apply "key=value" overrides on top.
// Unknown keys and out-of-range values throw ConfigError naming the key.
ResolvedConfig parse_config(const std::string& path_or_empty,
                            const std::vector<std::string>& overrides);

ResolvedConfig parse_config_text(const std::string& text,
                                 const std::vector<std::string>& overrides,
                                 const std::string& source_name = "<inline>");

}  // namespace fpp
