#pragma once

#include <cstdint>
#include <vector>

#include "distributions.hpp"
#include "lattice.hpp"

namespace fpp {

// A window with one animal weight per edge. Weights derived from a sampled
// configuration satisfy w >= 1 (since F <= 1); synthetic weights just need
// to be non-negative.
struct AnimalInstance {
    LatticeWindow window;
    std::vector<double> weights;
};

// Instance over [-span, span]^d with w_e = 1 - ln F(t_e) for sampled t_e.
// Edges whose truncated uniform hit 0 exactly (so F(t) = 0) get w = +inf;
// callers decide whether to keep or discard such instances.
AnimalInstance sample_animal_instance(const WeightDistribution& dist, int d, int span,
                                      std::uint64_t master_seed, std::uint64_t replica,
                                      unsigned bit_depth);

// Enumeration caps keeping exact_Nn under ~10^7 search nodes.
int animal_exact_cap(int d);

// N_n = max over connected edge sets of size n with an endpoint at the
// origin, by in/out branching with a max-weight bound. Throws
// std::domain_error when n exceeds `cap` (use greedy_Nn instead).
double exact_Nn(const AnimalInstance& instance, int n, int cap);

struct GreedyResult {
    double value = 0.0;
    int size = 0;       // edges actually placed
    bool complete = false;
};
// Grows from the origin by repeatedly taking the heaviest frontier edge;
// a lower bound for exact_Nn whenever both are defined.
GreedyResult greedy_Nn(const AnimalInstance& instance, int n);

struct GrowthRow {
    int n = 0;
    double beta = 0.0;
    double mean_ratio = 0.0;       // mean N_n / n
    double log_mgf_over_n = 0.0;   // log E-hat e^{beta N_n} / n
    double stderr_log_mgf = 0.0;
    bool exact = true;             // false when the greedy bound was used
};

struct GrowthStats {
    std::vector<GrowthRow> rows;
    int replicas_used = 0;
    int replicas_discarded = 0;  // infinite-weight instances
};

GrowthStats animal_growth_stats(const WeightDistribution& dist, int d, int n_lo, int n_hi,
                                int replicas, const std::vector<double>& beta_grid,
                                std::uint64_t master_seed, unsigned bit_depth, int exact_cap,
                                bool allow_greedy);

}  // namespace fpp
