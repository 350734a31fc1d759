#include "distributions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fpp {

double encode_uniform(const BernoulliEncoding& enc) {
    return std::ldexp(double(enc.bits), -int(enc.depth));
}

double encode_uniform(const std::vector<int>& bits, unsigned depth) {
    if (bits.size() < depth) throw std::invalid_argument("encode_uniform: sequence shorter than depth");
    if (depth == 0 || depth > kMaxBitDepth) throw std::invalid_argument("encode_uniform: bad depth");
    std::uint64_t packed = 0;
    for (unsigned j = 0; j < depth; ++j) {
        if (bits[j] != 0 && bits[j] != 1) throw std::invalid_argument("encode_uniform: bit not in {0,1}");
        packed = (packed << 1) | std::uint64_t(bits[j]);
    }
    return std::ldexp(double(packed), -int(depth));
}

WeightDistribution WeightDistribution::uniform() {
    WeightDistribution d;
    d.kind_ = Kind::Uniform;
    d.name_ = "uniform";
    d.support_inf_ = 0.0;
    d.exp_moment_alpha_ = 1.0;  // bounded support
    return d;
}

WeightDistribution WeightDistribution::exponential(double rate) {
    if (!(rate > 0)) throw std::invalid_argument("exponential: rate must be positive");
    WeightDistribution d;
    d.kind_ = Kind::Exponential;
    d.params_ = {rate};
    std::ostringstream n;
    n << "exponential(" << rate << ")";
    d.name_ = n.str();
    d.support_inf_ = 0.0;
    d.exp_moment_alpha_ = rate / 4.0;  // E e^{2 alpha t} finite iff 2 alpha < rate
    return d;
}

WeightDistribution WeightDistribution::two_point(double a, double b, double p_at_a) {
    if (!(a >= 0) || !(a < b)) throw std::invalid_argument("two_point: need 0 <= a < b");
    if (!(p_at_a > 0) || !(p_at_a < 1)) throw std::invalid_argument("two_point: p must be in (0,1)");
    WeightDistribution d;
    d.kind_ = Kind::TwoPoint;
    d.params_ = {a, b, p_at_a};
    std::ostringstream n;
    n << "two_point(" << a << "," << b << ";" << p_at_a << ")";
    d.name_ = n.str();
    d.support_inf_ = a;
    d.exp_moment_alpha_ = 1.0;
    return d;
}

WeightDistribution WeightDistribution::bernoulli(double mass_at_zero) {
    WeightDistribution d = two_point(0.0, 1.0, mass_at_zero);
    d.kind_ = Kind::Bernoulli;
    std::ostringstream n;
    n << "bernoulli(" << mass_at_zero << ")";
    d.name_ = n.str();
    return d;
}

WeightDistribution WeightDistribution::point_mass(double c) {
    if (!(c >= 0)) throw std::invalid_argument("point_mass: value must be non-negative");
    WeightDistribution d;
    d.kind_ = Kind::PointMass;
    d.params_ = {c};
    std::ostringstream n;
    n << "point_mass(" << c << ")";
    d.name_ = n.str();
    d.support_inf_ = c;
    d.exp_moment_alpha_ = 1.0;
    return d;
}

WeightDistribution WeightDistribution::piecewise(std::vector<std::pair<double, double>> table,
                                                 std::string table_source) {
    if (table.size() < 2) throw std::invalid_argument("piecewise: need at least two table rows");
    for (size_t i = 0; i < table.size(); ++i) {
        if (!(table[i].first >= 0)) throw std::invalid_argument("piecewise: negative support point");
        if (!(table[i].second >= 0) || table[i].second > 1 + 1e-12)
            throw std::invalid_argument("piecewise: F outside [0,1]");
        if (i > 0 && !(table[i].first > table[i - 1].first))
            throw std::invalid_argument("piecewise: t column must be strictly increasing");
        if (i > 0 && table[i].second < table[i - 1].second)
            throw std::invalid_argument("piecewise: F column must be non-decreasing");
    }
    if (std::abs(table.back().second - 1.0) > 1e-9)
        throw std::invalid_argument("piecewise: final F must equal 1");
    table.back().second = 1.0;
    // Trim leading flat-zero rows so the first row is the support infimum.
    size_t first = 0;
    while (first + 1 < table.size() && table[first + 1].second == 0.0) ++first;
    table.erase(table.begin(), table.begin() + first);

    WeightDistribution d;
    d.kind_ = Kind::Piecewise;
    d.table_ = std::move(table);
    d.table_source_ = std::move(table_source);
    d.name_ = "piecewise[" + std::to_string(d.table_.size()) + "]";
    d.support_inf_ = d.table_.front().first;
    d.exp_moment_alpha_ = 1.0;  // bounded table support
    return d;
}

WeightDistribution WeightDistribution::piecewise_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("piecewise: cannot open table " + path);
    std::vector<std::pair<double, double>> table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double t, f;
        if (!(ls >> t >> f)) throw std::runtime_error("piecewise: bad table row '" + line + "'");
        table.emplace_back(t, f);
    }
    return piecewise(std::move(table), path);
}

WeightDistribution WeightDistribution::parse(const std::string& kind,
                                             const std::vector<double>& params,
                                             const std::string& table_path) {
    auto need = [&](size_t n) {
        if (params.size() != n)
            throw std::invalid_argument("distribution '" + kind + "' takes " + std::to_string(n) +
                                        " parameter(s), got " + std::to_string(params.size()));
    };
    if (kind == "uniform") {
        need(0);
        return uniform();
    }
    if (kind == "exponential") {
        if (params.empty()) return exponential(1.0);
        need(1);
        return exponential(params[0]);
    }
    if (kind == "two_point") {
        need(3);
        return two_point(params[0], params[1], params[2]);
    }
    if (kind == "bernoulli") {
        need(1);
        return bernoulli(params[0]);
    }
    if (kind == "point_mass") {
        need(1);
        return point_mass(params[0]);
    }
    if (kind == "piecewise") {
        need(0);
        if (table_path.empty()) throw std::invalid_argument("piecewise distribution needs a table path");
        return piecewise_from_csv(table_path);
    }
    throw std::invalid_argument("unknown distribution kind '" + kind + "'");
}

double WeightDistribution::cdf(double t) const {
    if (t < 0) return 0.0;
    switch (kind_) {
        case Kind::Uniform:
            return t >= 1.0 ? 1.0 : t;
        case Kind::Exponential:
            return 1.0 - std::exp(-params_[0] * t);
        case Kind::Bernoulli:
        case Kind::TwoPoint: {
            if (t < params_[0]) return 0.0;
            if (t < params_[1]) return params_[2];
            return 1.0;
        }
        case Kind::PointMass:
            return t >= params_[0] ? 1.0 : 0.0;
        case Kind::Piecewise: {
            if (t < table_.front().first) return 0.0;
            if (t >= table_.back().first) return 1.0;
            auto it = std::upper_bound(table_.begin(), table_.end(), t,
                                       [](double x, const auto& row) { return x < row.first; });
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            double w = (t - lo.first) / (hi.first - lo.first);
            return lo.second + w * (hi.second - lo.second);
        }
    }
    return 0.0;
}

double WeightDistribution::inverse_cdf(double u) const {
    if (!(u >= 0.0) || u >= 1.0) throw std::domain_error("inverse_cdf: u must lie in [0,1)");
    if (u == 0.0) return support_inf_;
    switch (kind_) {
        case Kind::Uniform:
            return u;
        case Kind::Exponential:
            return -std::log1p(-u) / params_[0];
        case Kind::Bernoulli:
        case Kind::TwoPoint:
            return u <= params_[2] ? params_[0] : params_[1];
        case Kind::PointMass:
            return params_[0];
        case Kind::Piecewise: {
            size_t i = 0;
            while (i < table_.size() && table_[i].second < u) ++i;
            if (i == 0) return table_.front().first;
            // minimality of i gives F_{i-1} < u <= F_i, so the segment rises
            const auto& lo = table_[i - 1];
            const auto& hi = table_[i];
            return lo.first + (u - lo.second) / (hi.second - lo.second) * (hi.first - lo.first);
        }
    }
    return 0.0;
}

double WeightDistribution::animal_weight(double t) const {
    double f = cdf(t);
    if (!(f > 0.0)) throw std::domain_error("animal_weight: F(t) = 0, weight is infinite");
    return 1.0 - std::log(f);
}

std::pair<double, BernoulliEncoding> WeightDistribution::sample_weight(RngStream& stream,
                                                                       unsigned depth) const {
    if (depth == 0 || depth > kMaxBitDepth) throw std::invalid_argument("sample_weight: bad bit depth");
    BernoulliEncoding enc;
    enc.depth = depth;
    enc.bits = stream.next_bits(depth);
    return {inverse_cdf(encode_uniform(enc)), enc};
}

double percolation_pc_lower_bound(int d) {
    // d = 2 is Kesten's exact value. For d >= 3 we use the classical
    // counting bound p_c(d) >= 1/(2d-1); being a lower bound it makes the
    // subcriticality test stricter than the truth.
    switch (d) {
        case 2: return 0.5;
        case 3: return 1.0 / 5.0;
        case 4: return 1.0 / 7.0;
        case 5: return 1.0 / 9.0;
        case 6: return 1.0 / 11.0;
        default:
            throw std::domain_error("percolation threshold table covers d = 2..6 only");
    }
}

bool WeightDistribution::validate_subcritical(int d) const {
    if (d < 2) throw std::domain_error("validate_subcritical: need d >= 2");
    return atom_at_zero() < percolation_pc_lower_bound(d);
}

bool WeightDistribution::is_atomic() const {
    return kind_ == Kind::TwoPoint || kind_ == Kind::Bernoulli || kind_ == Kind::PointMass;
}

namespace {

// Continued-fraction reconstruction of x as p/q with q <= max_den.
std::optional<std::int64_t> rational_denominator(double x, std::int64_t max_den) {
    if (x < 0) return std::nullopt;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = x;
    for (int iter = 0; iter < 64; ++iter) {
        double fl = std::floor(frac);
        auto a = static_cast<std::int64_t>(fl);
        std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den || q2 <= 0) return std::nullopt;
        if (std::abs(x - double(p2) / double(q2)) < 1e-12 * std::max(1.0, std::abs(x))) return q2;
        double rem = frac - fl;
        if (rem < 1e-15) return std::nullopt;
        frac = 1.0 / rem;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::int64_t> WeightDistribution::rational_scale() const {
    if (!is_atomic()) return std::nullopt;
    constexpr std::int64_t kMaxDen = 1 << 20;
    std::vector<double> atoms;
    if (kind_ == Kind::PointMass)
        atoms = {params_[0]};
    else
        atoms = {params_[0], params_[1]};
    std::int64_t scale = 1;
    for (double a : atoms) {
        auto q = rational_denominator(a, kMaxDen);
        if (!q) return std::nullopt;
        scale = std::lcm(scale, *q);
        if (scale > kMaxDen) return std::nullopt;
    }
    return scale;
}

}  // namespace fpp
