#include "config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fpp {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::string item;
    std::istringstream ss(v);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': bad number '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    auto xs = parse_double_list(key, v);
    if (xs.size() != 1) throw ConfigError("config key '" + key + "': expected one number");
    return xs[0];
}

long parse_long(const std::string& key, const std::string& v) {
    double d = parse_double(key, v);
    long l = long(d);
    if (double(l) != d) throw ConfigError("config key '" + key + "': expected an integer");
    return l;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "': expected true/false");
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

std::string fmt_list(const std::vector<double>& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += fmt(xs[i]);
    }
    return out;
}

std::string fmt_list(const std::vector<long>& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(xs[i]);
    }
    return out;
}

void apply_key(ResolvedConfig& c, const std::string& key, const std::string& value) {
    if (key == "d") {
        c.d = int(parse_long(key, value));
    } else if (key == "x") {
        auto xs = parse_double_list(key, value);
        if (xs.size() < 1 || xs.size() > size_t(kMaxDim))
            throw ConfigError("config key 'x': need 1..6 coordinates");
        c.x = Coord{};
        c.x.d = int(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) {
            c.x[int(i)] = int(xs[i]);
            if (double(c.x[int(i)]) != xs[i])
                throw ConfigError("config key 'x': coordinates must be integers");
        }
    } else if (key == "dist") {
        c.dist_kind = value;
    } else if (key == "dist.rate") {
        c.dist_rate = parse_double(key, value);
    } else if (key == "dist.a") {
        c.dist_a = parse_double(key, value);
    } else if (key == "dist.b") {
        c.dist_b = parse_double(key, value);
    } else if (key == "dist.p") {
        c.dist_p = parse_double(key, value);
    } else if (key == "dist.p0") {
        c.dist_p0 = parse_double(key, value);
    } else if (key == "dist.value") {
        c.dist_value = parse_double(key, value);
    } else if (key == "dist.table") {
        c.dist_table = value;
    } else if (key == "zeta") {
        c.zeta = parse_double(key, value);
    } else if (key == "replicas") {
        c.replicas = parse_long(key, value);
    } else if (key == "seed") {
        c.seed = std::uint64_t(parse_long(key, value));
    } else if (key == "J") {
        c.bit_depth = unsigned(parse_long(key, value));
    } else if (key == "margin") {
        c.margin = int(parse_long(key, value));
    } else if (key == "max_doublings") {
        c.max_doublings = int(parse_long(key, value));
    } else if (key == "lambda_grid") {
        c.lambda_grid = parse_double_list(key, value);
    } else if (key == "workers") {
        c.workers = int(parse_long(key, value));
    } else if (key == "kesten_a") {
        c.kesten_a = parse_double(key, value);
    } else if (key == "d12") {
        c.d12 = parse_double(key, value);
    } else if (key == "allow_supercritical") {
        c.allow_supercritical = parse_bool(key, value);
    } else if (key == "sizes") {
        auto xs = parse_double_list(key, value);
        c.sizes.clear();
        for (double v : xs) c.sizes.push_back(long(v));
    } else if (key == "animals.n_lo") {
        c.animals_n_lo = int(parse_long(key, value));
    } else if (key == "animals.n_hi") {
        c.animals_n_hi = int(parse_long(key, value));
    } else if (key == "animals.replicas") {
        c.animals_replicas = parse_long(key, value);
    } else if (key == "animals.beta_grid") {
        c.animals_beta_grid = parse_double_list(key, value);
    } else if (key == "animals.allow_greedy") {
        c.animals_allow_greedy = parse_bool(key, value);
    } else if (key == "verify.systems") {
        c.verify_systems = parse_long(key, value);
    } else if (key == "verify.tuples") {
        c.verify_tuples = parse_long(key, value);
    } else if (key == "verify.quadrature") {
        c.verify_quadrature = parse_long(key, value);
    } else if (key == "out") {
        c.out_dir = value;
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void validate(const ResolvedConfig& c) {
    if (c.d < 2 || c.d > kMaxDim) throw ConfigError("config key 'd': need 2 <= d <= 6");
    if (c.x.d != c.d) throw ConfigError("config key 'x': dimension mismatch with d");
    if (c.x.l1() < 1) throw ConfigError("config key 'x': need |x|_1 >= 1");
    if (c.zeta < 0 || c.zeta > 0.25)
        throw ConfigError("config key 'zeta': need 0 < zeta <= 1/4 (0 selects the default)");
    if (c.replicas < 1) throw ConfigError("config key 'replicas': need at least 1");
    if (c.bit_depth < 1 || c.bit_depth > kMaxBitDepth)
        throw ConfigError("config key 'J': need 1 <= J <= 53");
    if (c.margin < 0) throw ConfigError("config key 'margin': must be non-negative");
    if (c.max_doublings < 0 || c.max_doublings > 6)
        throw ConfigError("config key 'max_doublings': need 0..6");
    if (c.workers < 1 || c.workers > 256) throw ConfigError("config key 'workers': need 1..256");
    if (!(c.kesten_a > 0)) throw ConfigError("config key 'kesten_a': must be positive");
    if (!(c.d12 > 0)) throw ConfigError("config key 'd12': must be positive");
    for (double l : c.lambda_grid)
        if (l < 0) throw ConfigError("config key 'lambda_grid': entries must be >= 0");
    for (long n : c.sizes)
        if (n < 2) throw ConfigError("config key 'sizes': entries must exceed 1");
    if (c.animals_n_lo < 1 || c.animals_n_hi < c.animals_n_lo)
        throw ConfigError("config key 'animals.n_lo/n_hi': bad range");
    if (c.animals_replicas < 1) throw ConfigError("config key 'animals.replicas': need >= 1");
    if (c.verify_systems < 1 || c.verify_tuples < 1 || c.verify_quadrature < 1)
        throw ConfigError("config key 'verify.*': counts must be >= 1");
}

}  // namespace

DistPtr ResolvedConfig::make_dist() const {
    std::vector<double> params;
    if (dist_kind == "exponential") params = {dist_rate};
    else if (dist_kind == "two_point") params = {dist_a, dist_b, dist_p};
    else if (dist_kind == "bernoulli") params = {dist_p0};
    else if (dist_kind == "point_mass") params = {dist_value};
    try {
        return std::make_shared<WeightDistribution>(
            WeightDistribution::parse(dist_kind, params, dist_table));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config key 'dist': ") + e.what());
    }
}

RunConfig ResolvedConfig::run_config() const {
    RunConfig rc;
    rc.dist = make_dist();
    rc.d = d;
    rc.x = x;
    rc.zeta = zeta;
    rc.replicas = int(replicas);
    rc.master_seed = seed;
    rc.bit_depth = bit_depth;
    rc.margin = margin;
    rc.max_doublings = max_doublings;
    rc.lambda_grid = lambda_grid;
    rc.kesten_a = kesten_a;
    rc.d12 = d12;
    rc.allow_supercritical = allow_supercritical;
    rc.workers = workers;
    return rc;
}

std::map<std::string, std::string> ResolvedConfig::echo_map() const {
    std::map<std::string, std::string> m;
    m["d"] = std::to_string(d);
    {
        std::string xs;
        for (int i = 0; i < x.d; ++i) {
            if (i) xs += ",";
            xs += std::to_string(x[i]);
        }
        m["x"] = xs;
    }
    m["dist"] = dist_kind;
    m["dist.rate"] = fmt(dist_rate);
    m["dist.a"] = fmt(dist_a);
    m["dist.b"] = fmt(dist_b);
    m["dist.p"] = fmt(dist_p);
    m["dist.p0"] = fmt(dist_p0);
    m["dist.value"] = fmt(dist_value);
    if (!dist_table.empty()) m["dist.table"] = dist_table;
    m["zeta"] = fmt(zeta);
    m["replicas"] = std::to_string(replicas);
    m["seed"] = std::to_string(seed);
    m["J"] = std::to_string(bit_depth);
    m["margin"] = std::to_string(margin);
    m["max_doublings"] = std::to_string(max_doublings);
    m["lambda_grid"] = fmt_list(lambda_grid);
    m["workers"] = std::to_string(workers);
    m["kesten_a"] = fmt(kesten_a);
    m["d12"] = fmt(d12);
    m["allow_supercritical"] = allow_supercritical ? "true" : "false";
    m["sizes"] = fmt_list(sizes);
    m["animals.n_lo"] = std::to_string(animals_n_lo);
    m["animals.n_hi"] = std::to_string(animals_n_hi);
    m["animals.replicas"] = std::to_string(animals_replicas);
    m["animals.beta_grid"] = fmt_list(animals_beta_grid);
    m["animals.allow_greedy"] = animals_allow_greedy ? "true" : "false";
    m["verify.systems"] = std::to_string(verify_systems);
    m["verify.tuples"] = std::to_string(verify_tuples);
    m["verify.quadrature"] = std::to_string(verify_quadrature);
    if (!out_dir.empty()) m["out"] = out_dir;
    return m;
}

std::string ResolvedConfig::echo() const {
    std::string out = "# fpplab configuration echo (format 1)\n";
    for (const auto& [k, v] : echo_map()) out += k + " = " + v + "\n";
    return out;
}

ResolvedConfig parse_config_text(const std::string& text,
                                 const std::vector<std::string>& overrides,
                                 const std::string& source_name) {
    ResolvedConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source_name + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        apply_key(c, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    for (const auto& ov : overrides) {
        size_t eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + ov + "': expected key=value");
        apply_key(c, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }
    if (c.out_dir.empty()) {
        const char* env = std::getenv("FPPLAB_OUT");
        c.out_dir = env && *env ? env : ".";
    }
    validate(c);
    return c;
}

ResolvedConfig parse_config(const std::string& path_or_empty,
                            const std::vector<std::string>& overrides) {
    std::string text;
    if (!path_or_empty.empty()) {
        std::ifstream in(path_or_empty);
        if (!in) throw ConfigError("cannot open config file '" + path_or_empty + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return parse_config_text(text, overrides,
                             path_or_empty.empty() ? "<defaults>" : path_or_empty);
}

}  // namespace fpp
