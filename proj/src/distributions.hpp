#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rng.hpp"

namespace fpp {

// Per-edge record of the fair bits that generated a weight. Bit j (1-based,
// j <= depth) is stored at position (depth - j), so `bits` is the integer
// sum b_j 2^{depth-j} and the encoded uniform is bits / 2^depth exactly.
struct BernoulliEncoding {
    std::uint32_t depth = 0;
    std::uint64_t bits = 0;

    int bit(unsigned j) const { return int((bits >> (depth - j)) & 1u); }
};

// Truncated dyadic expansion sum_{j<=depth} bits_j 2^{-j}; lies in [0, 1-2^-depth].
double encode_uniform(const BernoulliEncoding& enc);
double encode_uniform(const std::vector<int>& bits, unsigned depth);

// Maximum bit depth for which the encoded uniform is exact in a double.
constexpr unsigned kMaxBitDepth = 53;

// A marginal edge-weight law given by its CDF and right-continuous inverse.
//
// Bundled kinds cover the continuous, atomic and atom-at-zero regimes:
//   uniform        U[0,1]
//   exponential    rate r > 0
//   two_point      {a < b}, mass p at a
//   bernoulli      {0,1}, mass p0 at 0 (subcriticality failure experiments)
//   point_mass     constant c >= 0
//   piecewise      user CDF table, linearly interpolated
class WeightDistribution {
  public:
    enum class Kind { Uniform, Exponential, TwoPoint, Bernoulli, PointMass, Piecewise };

    static WeightDistribution uniform();
    static WeightDistribution exponential(double rate);
    static WeightDistribution two_point(double a, double b, double p_at_a);
    static WeightDistribution bernoulli(double mass_at_zero);
    static WeightDistribution point_mass(double c);
    // Table rows (t, F(t)), strictly increasing t, non-decreasing F, final F = 1.
    static WeightDistribution piecewise(std::vector<std::pair<double, double>> table,
                                        std::string table_source = "");
    static WeightDistribution piecewise_from_csv(const std::string& path);

    // kind[:p1,p2,...] compact form used by config files and the C API.
    static WeightDistribution parse(const std::string& kind, const std::vector<double>& params,
                                    const std::string& table_path = "");

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::vector<double>& params() const { return params_; }
    const std::string& table_source() const { return table_source_; }

    double cdf(double t) const;
    // inf{x : F(x) >= u} for u in (0,1); u = 0 maps to the support infimum.
    double inverse_cdf(double u) const;

    double support_infimum() const { return support_inf_; }
    double atom_at_zero() const { return cdf(0.0); }
    std::optional<double> exp_moment_alpha() const { return exp_moment_alpha_; }
    bool has_two_log_moment() const { return has_two_log_moment_; }

    // 1 - ln F(t); throws std::domain_error when F(t) = 0 (infinite weight).
    double animal_weight(double t) const;

    // Draws `depth` fair bits from the stream and pushes them through the
    // inverse CDF; the weight is exactly inverse_cdf(encode_uniform(enc)).
    std::pair<double, BernoulliEncoding> sample_weight(RngStream& stream, unsigned depth) const;

    // atom_at_zero < p_c(d), with p_c(2) = 1/2 exact and conservative lower
    // bounds for d = 3..6 (see docs). Throws for unsupported d.
    bool validate_subcritical(int d) const;

    // Common denominator S <= 2^20 such that every support atom times S is
    // integral, when the law is purely atomic with rational atoms. Enables
    // exact integer-scaled path comparisons downstream.
    std::optional<std::int64_t> rational_scale() const;
    bool is_atomic() const;

  private:
    WeightDistribution() = default;

    Kind kind_ = Kind::Uniform;
    std::string name_;
    std::vector<double> params_;
    std::vector<std::pair<double, double>> table_;
    std::string table_source_;
    double support_inf_ = 0.0;
    std::optional<double> exp_moment_alpha_;
    bool has_two_log_moment_ = true;
};

using DistPtr = std::shared_ptr<const WeightDistribution>;

// Lower bounds on the bond-percolation critical probability of Z^d.
double percolation_pc_lower_bound(int d);

}  // namespace fpp
