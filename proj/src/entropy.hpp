#pragma once

#include <gmpxx.h>

#include <functional>
#include <string>
#include <vector>

#include "distributions.hpp"
#include "lattice.hpp"
#include "stepfn.hpp"

namespace fpp {

// One coordinate of a small product space: finite support with exact
// rational probabilities.
struct FiniteSupport {
    std::vector<double> values;
    std::vector<Rational> probs;
};

// Tiny product space (<= 12 coordinates, <= 2^24 states) supporting exact
// enumeration of expectations, conditional expectations and entropies.
// Coordinates follow the canonical edge order; the martingale filtration
// conditions on them left to right.
class DiscreteSystem {
  public:
    explicit DiscreteSystem(std::vector<FiniteSupport> coords, std::string descriptor = "");

    // Each coordinate carries 2^depth equally likely dyadic atoms
    // inverse_cdf(i / 2^depth), ordered by the bit pattern i.
    static DiscreteSystem from_bits(const WeightDistribution& dist, int n_coords, unsigned depth,
                                    std::string descriptor = "");

    int n_coords() const { return int(coords_.size()); }
    std::int64_t n_states() const { return n_states_; }
    const std::vector<FiniteSupport>& coords() const { return coords_; }
    const std::string& descriptor() const { return descriptor_; }
    bool bit_driven() const { return bit_depth_ > 0; }
    unsigned bit_depth() const { return bit_depth_; }

    // Mixed-radix state index, coordinate 0 most significant.
    std::int64_t suffix_size(int k) const { return suffix_[k]; }  // product of sizes after k
    int coord_index(std::int64_t state, int k) const {
        return int((state / suffix_[k]) % std::int64_t(coords_[k].values.size()));
    }
    Rational state_prob(std::int64_t state) const;
    void state_weights(std::int64_t state, std::vector<double>& w) const;

  private:
    std::vector<FiniteSupport> coords_;
    std::vector<std::int64_t> suffix_;
    std::int64_t n_states_ = 1;
    unsigned bit_depth_ = 0;
    std::string descriptor_;
};

using Objective = std::function<double(const std::vector<double>&)>;

// G tabulated over all states in index order.
std::vector<double> tabulate(const DiscreteSystem& sys, const Objective& g);
std::vector<Rational> tabulate_exact(const DiscreteSystem& sys,
                                     const std::function<Rational(const std::vector<double>&)>& g);

double expectation(const DiscreteSystem& sys, const std::vector<double>& table);
Rational expectation(const DiscreteSystem& sys, const std::vector<Rational>& table);

// Ent X = E X log X - E X log E X for a non-negative finite distribution;
// 0 log 0 = 0. Throws std::domain_error when X has zero mean or negatives.
double entropy(const std::vector<double>& values, const std::vector<Rational>& probs);
double entropy(const DiscreteSystem& sys, const std::vector<double>& table);

struct VariationalResult {
    double entropy = 0.0;   // reference value from the definition
    double exy = 0.0;       // E[X Y*] at the optimizer Y* = log(X/EX)
    double ee_y = 0.0;      // E e^{Y*}, feasibility (<= 1)
};
VariationalResult variational_entropy(const DiscreteSystem& sys, const std::vector<double>& table);

struct TensorizationResult {
    double lhs = 0.0;  // Ent X
    double rhs = 0.0;  // sum_e E Ent_e X
};
TensorizationResult tensorization_check(const DiscreteSystem& sys,
                                        const std::vector<double>& table);

// V_k = E[G | F_k] - E[G | F_{k-1}], exact by enumeration; one table per
// coordinate, telescoping to G - EG state by state.
template <class T>
std::vector<std::vector<T>> martingale_decomposition(const DiscreteSystem& sys,
                                                     const std::vector<T>& table);

template <class T>
T variance(const DiscreteSystem& sys, const std::vector<T>& table);

// sum_k (E|V_k|)^2.
template <class T>
T influence_sum(const DiscreteSystem& sys, const std::vector<T>& table);

// Resampling upper bounds E|G - G^{(k)}| per coordinate.
template <class T>
std::vector<T> resampling_bounds(const DiscreteSystem& sys, const std::vector<T>& table);

struct FalikSamorodnitskyResult {
    double lhs = 0.0;        // sum_k Ent(V_k^2)
    double rhs = 0.0;        // Var G log(Var G / sum_k (E|V_k|)^2)
    double var_g = 0.0;
    double influence = 0.0;  // sum_k (E|V_k|)^2
};
// Var G = 0 returns all zeros by convention.
FalikSamorodnitskyResult falik_samorodnitsky_check(const DiscreteSystem& sys,
                                                   const std::vector<double>& table);

// sum_{e,j} E_pi (Delta_{e,j} G)^2 on a bit-driven system.
double discrete_derivative_sum(const DiscreteSystem& sys, const std::vector<double>& table);

struct LsiResult {
    double lhs = 0.0;  // Ent e^{lambda X}
    double rhs = 0.0;  // E[ e^{lambda X} q(lambda (X'-X)_+) ], q(x) = x(e^x - 1)
};
// X' is an independent copy, enumerated over the product of two states.
LsiResult symmetrized_lsi_check(const DiscreteSystem& sys, const std::vector<double>& x_table,
                                double lambda);

struct Theorem4Result {
    double lhs = 0.0;    // sum_k Ent(V_k^2) for G = e^{lambda F_m}
    double rhs = 0.0;    // lambda^2 avg_z E[ e^{2 lambda F_m} sum_{Geo} (1 - ln F(t_e)) ]
    double ratio = 0.0;  // lhs / rhs, the empirical constant; 0 when both vanish
};
// System coordinates must be the edges of `window` in canonical order.
Theorem4Result theorem4_bound_check(const DiscreteSystem& sys, const LatticeWindow& window,
                                    const WeightDistribution& dist, const Coord& x, int m,
                                    double lambda);

// Random small system with dyadic support values in [0, 3] and rational
// probabilities (denominator <= 8). Drives the property sweeps.
DiscreteSystem random_discrete_system(RngStream& rng, int min_coords, int max_coords,
                                      int max_atoms);

}  // namespace fpp
