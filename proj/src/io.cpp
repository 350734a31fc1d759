#include "io.hpp"

#include <bit>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace fpp {

static_assert(std::endian::native == std::endian::little,
              "snapshot writer assumes a little-endian host");

namespace fs = std::filesystem;

namespace {

std::string f17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string now_iso8601() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    return out;
}

// Echo embedded into data files: experiment parameters only, execution
// details (workers, out) excluded so reruns compare byte-identical.
std::string data_echo_line(const ResolvedConfig& cfg) {
    std::string line;
    for (const auto& [k, v] : cfg.echo_map()) {
        if (k == "workers" || k == "out") continue;
        if (!line.empty()) line += " ";
        line += k + "=" + v;
    }
    return line;
}

std::string dist_tag(const ResolvedConfig& cfg) {
    std::string tag = cfg.dist_kind;
    for (auto& ch : tag)
        if (ch == '.') ch = '_';
    return tag;
}

nlohmann::json moments_json(const std::vector<double>& xs) {
    auto m = moments(xs);
    return {{"n", m.n}, {"mean", m.mean}, {"var", m.var}, {"se_mean", m.se_mean}};
}

nlohmann::json tails_json(const std::vector<TailPoint>& tails) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& pt : tails) {
        arr.push_back({{"lambda", pt.lambda},
                       {"n", pt.n},
                       {"abs", {{"p", pt.abs.p_hat}, {"lo", pt.abs.lo}, {"hi", pt.abs.hi}}},
                       {"upper",
                        {{"p", pt.upper.p_hat}, {"lo", pt.upper.lo}, {"hi", pt.upper.hi}}},
                       {"lower",
                        {{"p", pt.lower.p_hat}, {"lo", pt.lower.lo}, {"hi", pt.lower.hi}}}});
    }
    return arr;
}

nlohmann::json fit_json(const RateFit& f) {
    return {{"c1", f.c1}, {"c2", f.c2}, {"r2", f.r2}, {"points_used", f.points_used}};
}

void write_tails_csv(std::ofstream& out, const ResolvedConfig& cfg,
                     const std::vector<TailPoint>& tails) {
    out << "# fpplab tails format_version=" << kFormatVersion << "\n";
    out << "# config: " << data_echo_line(cfg) << "\n";
    out << "side,lambda,p_hat,ci_lo,ci_hi,n\n";
    auto row = [&](const char* side, double lambda, const WilsonCI& ci, long n) {
        out << side << "," << f17(lambda) << "," << f17(ci.p_hat) << "," << f17(ci.lo) << ","
            << f17(ci.hi) << "," << n << "\n";
    };
    for (const auto& pt : tails) {
        row("abs", pt.lambda, pt.abs, pt.n);
        row("upper", pt.lambda, pt.upper, pt.n);
        row("lower", pt.lambda, pt.lower, pt.n);
    }
}

}  // namespace

std::string artifact_base(const std::string& subcommand, const ResolvedConfig& cfg) {
    return subcommand + "_n" + std::to_string(cfg.x.l1()) + "_" + dist_tag(cfg) + "_s" +
           std::to_string(cfg.seed);
}

std::string versioned_base(const std::string& out_dir, const std::string& base,
                           const std::vector<std::string>& extensions) {
    auto clash = [&](const std::string& b) {
        for (const auto& ext : extensions)
            if (fs::exists(fs::path(out_dir) / (b + ext))) return true;
        return false;
    };
    if (!clash(base)) return base;
    for (int v = 2;; ++v) {
        std::string b = base + "_v" + std::to_string(v);
        if (!clash(b)) return b;
    }
}

TailFits fit_tails(const std::vector<TailPoint>& tails, long n_samples) {
    TailFits fits;
    std::vector<std::pair<double, double>> lo, up;
    for (const auto& pt : tails) {
        lo.push_back({pt.lambda, pt.lower.p_hat});
        up.push_back({pt.lambda, pt.upper.p_hat});
    }
    try {
        fits.lower = fit_exponential_rate(lo, n_samples);
        fits.valid_lower = true;
    } catch (const std::exception& e) {
        fits.note = e.what();
    }
    try {
        fits.upper = fit_exponential_rate(up, n_samples);
        fits.valid_upper = true;
    } catch (const std::exception& e) {
        fits.note = e.what();
    }
    return fits;
}

nlohmann::json campaign_summary(const ResolvedConfig& cfg, const RunRecord& rec,
                                const std::vector<TailPoint>& tails, const TailFits& fits) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["config_echo"] = cfg.echo_map();
    j["m"] = rec.m;
    j["censored"] = rec.censored;
    j["accepted"] = long(rec.replicas.size()) - rec.censored;
    j["summary"]["T"] = moments_json(accepted_T(rec));
    j["summary"]["F_m"] = moments_json(accepted_Fm(rec));
    auto grab = [&](double ReplicaStats::*f) { return moments_json(accepted_values(rec, f)); };
    j["summary"]["Ylog"] = grab(&ReplicaStats::Ylog);
    j["summary"]["Z"] = grab(&ReplicaStats::Z);
    {
        std::vector<double> g, y;
        for (const auto& r : rec.replicas)
            if (!r.censored) {
                g.push_back(double(r.G));
                y.push_back(double(r.Y));
            }
        j["summary"]["G"] = moments_json(g);
        j["summary"]["Y"] = moments_json(y);
    }
    if (!tails.empty()) j["tails"] = tails_json(tails);
    if (fits.valid_lower) j["fit_lower"] = fit_json(fits.lower);
    if (fits.valid_upper) j["fit_upper"] = fit_json(fits.upper);
    if (!fits.note.empty()) j["fit_note"] = fits.note;
    return j;
}

EmittedFiles emit_campaign(const ResolvedConfig& cfg, const RunRecord& rec,
                           const std::vector<TailPoint>& tails, const TailFits& fits,
                           const std::string& out_dir, const std::string& subcommand) {
    fs::create_directories(out_dir);
    const std::vector<std::string> exts = {".run.json", ".replicas.csv", ".tails.csv",
                                           ".config"};
    EmittedFiles files;
    files.base = versioned_base(out_dir, artifact_base(subcommand, cfg), exts);
    auto path = [&](const std::string& ext) {
        return (fs::path(out_dir) / (files.base + ext)).string();
    };

    {
        auto out = open_out(path(".config"));
        out << cfg.echo();
        files.paths.push_back(path(".config"));
    }
    {
        auto out = open_out(path(".replicas.csv"));
        out << "# fpplab replicas format_version=" << kFormatVersion << "\n";
        out << "# config: " << data_echo_line(cfg) << "\n";
        out << "replica,T,F_m,G,Y_x,Ylog,censored\n";
        for (size_t i = 0; i < rec.replicas.size(); ++i) {
            const auto& r = rec.replicas[i];
            out << i << "," << f17(r.T) << "," << f17(r.F_m) << "," << r.G << "," << r.Y << ","
                << f17(r.Ylog) << "," << (r.censored ? 1 : 0) << "\n";
        }
        files.paths.push_back(path(".replicas.csv"));
    }
    {
        auto out = open_out(path(".tails.csv"));
        write_tails_csv(out, cfg, tails);
        files.paths.push_back(path(".tails.csv"));
    }
    {
        auto j = campaign_summary(cfg, rec, tails, fits);
        j["subcommand"] = subcommand;
        j["written_at"] = now_iso8601();
        j["files"] = files.paths;
        auto out = open_out(path(".run.json"));
        out << j.dump(2) << "\n";
        files.paths.push_back(path(".run.json"));
    }
    return files;
}

RunRecord load_record(const std::string& run_json_path, ResolvedConfig* cfg_out) {
    std::ifstream in(run_json_path);
    if (!in) throw IoError("cannot open record '" + run_json_path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("bad run.json: " + std::string(e.what()));
    }
    if (!j.contains("config_echo")) throw IoError("run.json lacks a config echo");
    std::string text;
    for (const auto& [k, v] : j["config_echo"].items())
        text += k + " = " + v.get<std::string>() + "\n";
    ResolvedConfig cfg = parse_config_text(text, {}, run_json_path);
    if (cfg_out) *cfg_out = cfg;

    RunRecord rec;
    rec.config = cfg.run_config();
    rec.m = j.value("m", 0);

    std::string base = run_json_path;
    const std::string suffix = ".run.json";
    if (base.size() < suffix.size() || base.substr(base.size() - suffix.size()) != suffix)
        throw IoError("record path must end in .run.json");
    base = base.substr(0, base.size() - suffix.size());
    std::ifstream csv(base + ".replicas.csv");
    if (!csv) throw IoError("cannot open '" + base + ".replicas.csv'");
    std::string line;
    while (std::getline(csv, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("replica,", 0) == 0) continue;
        ReplicaStats r;
        long idx, g, y;
        int censored;
        if (std::sscanf(line.c_str(), "%ld,%lf,%lf,%ld,%ld,%lf,%d", &idx, &r.T, &r.F_m, &g, &y,
                        &r.Ylog, &censored) != 7)
            throw IoError("bad replicas.csv row: " + line);
        r.G = g;
        r.Y = y;
        r.censored = censored != 0;
        rec.replicas.push_back(r);
    }
    for (const auto& r : rec.replicas) rec.censored += r.censored;
    return rec;
}

EmittedFiles emit_tails(const ResolvedConfig& cfg, const std::vector<TailPoint>& tails,
                        const TailFits& fits, const std::string& out_dir) {
    fs::create_directories(out_dir);
    EmittedFiles files;
    files.base = versioned_base(out_dir, artifact_base("tails", cfg), {".tails.csv", ".json"});
    auto csv_path = (fs::path(out_dir) / (files.base + ".tails.csv")).string();
    {
        auto out = open_out(csv_path);
        write_tails_csv(out, cfg, tails);
    }
    files.paths.push_back(csv_path);
    auto json_path = (fs::path(out_dir) / (files.base + ".json")).string();
    {
        nlohmann::json j;
        j["format_version"] = kFormatVersion;
        j["config_echo"] = cfg.echo_map();
        j["tails"] = tails_json(tails);
        if (fits.valid_lower) j["fit_lower"] = fit_json(fits.lower);
        if (fits.valid_upper) j["fit_upper"] = fit_json(fits.upper);
        if (!fits.note.empty()) j["fit_note"] = fits.note;
        j["written_at"] = now_iso8601();
        auto out = open_out(json_path);
        out << j.dump(2) << "\n";
    }
    files.paths.push_back(json_path);
    return files;
}

EmittedFiles emit_variance(const ResolvedConfig& cfg,
                           const std::vector<VarianceScalePoint>& points,
                           const std::string& out_dir) {
    fs::create_directories(out_dir);
    EmittedFiles files;
    files.base = versioned_base(out_dir, artifact_base("variance-scaling", cfg), {".csv"});
    auto path = (fs::path(out_dir) / (files.base + ".csv")).string();
    auto out = open_out(path);
    out << "# fpplab variance scaling format_version=" << kFormatVersion << "\n";
    out << "# config: " << data_echo_line(cfg) << "\n";
    out << "n,var_T,ratio,se_ratio,se_reliable,censored,replicas\n";
    for (const auto& p : points)
        out << p.n << "," << f17(p.var_T) << "," << f17(p.ratio) << "," << f17(p.se_ratio) << ","
            << (p.se_reliable ? 1 : 0) << "," << p.censored << "," << cfg.replicas << "\n";
    files.paths.push_back(path);
    return files;
}

EmittedFiles emit_growth(const ResolvedConfig& cfg, const std::vector<GrowthRow>& rows, int used,
                         int discarded, const std::string& out_dir) {
    fs::create_directories(out_dir);
    EmittedFiles files;
    files.base = versioned_base(out_dir, artifact_base("animals", cfg), {".csv"});
    auto path = (fs::path(out_dir) / (files.base + ".csv")).string();
    auto out = open_out(path);
    out << "# fpplab animal growth format_version=" << kFormatVersion << "\n";
    out << "# config: " << data_echo_line(cfg) << "\n";
    out << "# replicas_used=" << used << " replicas_discarded=" << discarded << "\n";
    out << "n,beta,mean_ratio,log_mgf_over_n,stderr,exact_or_greedy\n";
    for (const auto& r : rows)
        out << r.n << "," << f17(r.beta) << "," << f17(r.mean_ratio) << ","
            << f17(r.log_mgf_over_n) << "," << f17(r.stderr_log_mgf) << ","
            << (r.exact ? "exact" : "greedy") << "\n";
    files.paths.push_back(path);
    return files;
}

nlohmann::json checks_json(const ResolvedConfig& cfg, const std::string& suite,
                           const VerifyReport& report) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["suite"] = suite;
    j["seed"] = cfg.seed;
    j["failed"] = report.failed;
    j["empty_selection"] = report.empty_selection;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : report.checks) {
        arr.push_back({{"check_name", c.name},
                       {"system_descriptor", c.system},
                       {"lhs", c.lhs},
                       {"rhs", c.rhs},
                       {"margin", c.margin},
                       {"exact", c.exact},
                       {"instances", c.instances},
                       {"violations", c.violations},
                       {"pass", c.pass},
                       {"note", c.note}});
    }
    j["checks"] = arr;
    return j;
}

EmittedFiles emit_checks(const ResolvedConfig& cfg, const std::string& suite,
                         const VerifyReport& report, const std::string& out_dir) {
    fs::create_directories(out_dir);
    EmittedFiles files;
    std::string base = suite == "lemmas" ? "verify-lemmas" : "entropy-checks";
    files.base = versioned_base(out_dir, base + "_s" + std::to_string(cfg.seed), {".json"});
    auto path = (fs::path(out_dir) / (files.base + ".json")).string();
    auto j = checks_json(cfg, suite, report);
    j["written_at"] = now_iso8601();
    auto out = open_out(path);
    out << j.dump(2) << "\n";
    files.paths.push_back(path);
    return files;
}

void write_config_snapshot(const EdgeConfig& cfg, const std::string& path) {
    nlohmann::json header;
    header["format_version"] = kFormatVersion;
    header["d"] = cfg.window.dim();
    std::vector<int> lo, hi;
    for (int i = 0; i < cfg.window.dim(); ++i) {
        lo.push_back(cfg.window.lo()[i]);
        hi.push_back(cfg.window.hi()[i]);
    }
    header["lo"] = lo;
    header["hi"] = hi;
    header["dist"] = {{"kind", cfg.dist->name()},
                      {"params", cfg.dist->params()},
                      {"table", cfg.dist->table_source()}};
    // the parse-ready kind, not the display name
    std::string kind = cfg.dist->name().substr(0, cfg.dist->name().find('('));
    header["dist"]["kind"] = kind;
    header["seed"] = cfg.master_seed;
    header["replica"] = cfg.replica;
    header["J"] = cfg.bit_depth;
    header["edges"] = cfg.window.edge_count();

    auto out = open_out(path);
    out << header.dump() << "\n";
    out.write(reinterpret_cast<const char*>(cfg.weights.data()),
              std::streamsize(cfg.weights.size() * sizeof(double)));
    if (!out) throw IoError("short write on '" + path + "'");
}

EdgeConfig read_config_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open snapshot '" + path + "'");
    std::string header_line;
    if (!std::getline(in, header_line)) throw IoError("snapshot header missing");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(header_line);
    } catch (const std::exception& e) {
        throw IoError("bad snapshot header: " + std::string(e.what()));
    }
    int d = header.at("d").get<int>();
    Coord lo = Coord::zero(d), hi = Coord::zero(d);
    for (int i = 0; i < d; ++i) {
        lo[i] = header.at("lo")[i].get<int>();
        hi[i] = header.at("hi")[i].get<int>();
    }
    auto dist = std::make_shared<WeightDistribution>(WeightDistribution::parse(
        header.at("dist").at("kind").get<std::string>(),
        header.at("dist").at("params").get<std::vector<double>>(),
        header.at("dist").at("table").get<std::string>()));

    EdgeConfig cfg{LatticeWindow(lo, hi), dist};
    cfg.master_seed = header.at("seed").get<std::uint64_t>();
    cfg.replica = header.at("replica").get<std::uint64_t>();
    cfg.bit_depth = header.at("J").get<unsigned>();
    auto n_edges = header.at("edges").get<std::int64_t>();
    if (n_edges != cfg.window.edge_count()) throw IoError("snapshot edge count mismatch");
    cfg.weights.resize(size_t(n_edges));
    in.read(reinterpret_cast<char*>(cfg.weights.data()),
            std::streamsize(cfg.weights.size() * sizeof(double)));
    if (in.gcount() != std::streamsize(cfg.weights.size() * sizeof(double)))
        throw IoError("snapshot truncated");
    if (auto scale = dist->rational_scale()) {
        cfg.int_scale = scale;
        cfg.int_weights.resize(cfg.weights.size());
        for (size_t i = 0; i < cfg.weights.size(); ++i)
            cfg.int_weights[i] = std::llround(cfg.weights[i] * double(*scale));
    }
    return cfg;
}

}  // namespace fpp
