#include "driver.hpp"

#include <filesystem>
#include <fstream>

namespace fpp {

namespace fs = std::filesystem;

DriveResult drive_sample(const ResolvedConfig& cfg, const std::string& out_dir) {
    RunConfig rc = cfg.run_config();
    if (!rc.dist->validate_subcritical(rc.d) && !rc.allow_supercritical)
        throw ConfigError("distribution fails the subcriticality test "
                          "(set allow_supercritical = true to proceed)");
    int m = smoothing_radius(rc.x, resolved_zeta(rc));
    LatticeWindow win = window_for(rc.x, m, resolved_margin(rc));
    EdgeConfig sample = sample_config(rc.dist, win, rc.master_seed, 0, rc.bit_depth);
    auto report = geodesic_report(sample, Coord::zero(rc.d), rc.x);
    double fm = averaged_passage_time(sample, rc.x, m);

    fs::create_directories(out_dir);
    std::string base =
        versioned_base(out_dir, artifact_base("sample", cfg), {".config.bin", ".json"});
    std::string bin_path = (fs::path(out_dir) / (base + ".config.bin")).string();
    std::string json_path = (fs::path(out_dir) / (base + ".json")).string();
    write_config_snapshot(sample, bin_path);

    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["config_echo"] = cfg.echo_map();
    j["m"] = m;
    j["window"] = {{"edges", win.edge_count()}, {"vertices", win.vertex_count()}};
    j["report"] = {{"T", report.T},
                   {"path_edges", report.path.size()},
                   {"geo_set_size", report.geo_set.size()},
                   {"G", report.max_length},
                   {"G_exact", report.max_length_exact},
                   {"unique_geodesic", report.unique_geodesic},
                   {"boundary_touched", report.boundary_touched},
                   {"F_m", fm},
                   {"Y", kesten_indicator(report, rc.kesten_a)}};
    j["files"] = {bin_path, json_path};

    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + json_path + "'");
    out << j.dump(2) << "\n";
    return {j, 0};
}

DriveResult drive_campaign(const ResolvedConfig& cfg, const std::string& out_dir) {
    RunConfig rc = cfg.run_config();
    auto rec = run_campaign(rc);
    std::vector<TailPoint> tails;
    TailFits fits;
    if (long(rec.replicas.size()) - rec.censored >= 100 && cfg.x.l1() > 1) {
        tails = tail_profile(rec, cfg.lambda_grid);
        fits = fit_tails(tails, long(rec.replicas.size()) - rec.censored);
    } else {
        fits.note = "tail profile skipped: needs >= 100 accepted replicas and |x|_1 > 1";
    }
    auto files = emit_campaign(cfg, rec, tails, fits, out_dir, "campaign");
    auto j = campaign_summary(cfg, rec, tails, fits);
    j["subcommand"] = "campaign";
    j["files"] = files.paths;
    return {j, 0};
}

DriveResult drive_tails(const ResolvedConfig& cfg, const std::string& record_json_path,
                        const std::string& out_dir) {
    if (record_json_path.empty())
        throw ConfigError("tails needs --record <base.run.json> from a previous campaign");
    ResolvedConfig loaded;
    RunRecord rec = load_record(record_json_path, &loaded);
    // Profile on the current lambda grid; everything else comes from the record.
    ResolvedConfig merged = loaded;
    merged.lambda_grid = cfg.lambda_grid;
    merged.out_dir = cfg.out_dir;
    auto tails = tail_profile(rec, merged.lambda_grid);
    auto fits = fit_tails(tails, long(rec.replicas.size()) - rec.censored);
    auto files = emit_tails(merged, tails, fits, out_dir);

    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["record"] = record_json_path;
    j["lambda_grid"] = merged.lambda_grid;
    if (fits.valid_lower)
        j["fit_lower"] = {{"c1", fits.lower.c1}, {"c2", fits.lower.c2}, {"r2", fits.lower.r2}};
    if (fits.valid_upper)
        j["fit_upper"] = {{"c1", fits.upper.c1}, {"c2", fits.upper.c2}, {"r2", fits.upper.r2}};
    if (!fits.note.empty()) j["fit_note"] = fits.note;
    j["files"] = files.paths;
    return {j, 0};
}

DriveResult drive_variance_scaling(const ResolvedConfig& cfg, const std::string& out_dir) {
    RunConfig base = cfg.run_config();
    auto points = variance_scaling(base, cfg.sizes);
    auto files = emit_variance(cfg, points, out_dir);
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["config_echo"] = cfg.echo_map();
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : points)
        arr.push_back({{"n", p.n},
                       {"var_T", p.var_T},
                       {"ratio", p.ratio},
                       {"se_ratio", p.se_ratio},
                       {"se_reliable", p.se_reliable},
                       {"censored", p.censored}});
    j["points"] = arr;
    j["files"] = files.paths;
    return {j, 0};
}

DriveResult drive_animals(const ResolvedConfig& cfg, const std::string& out_dir) {
    auto dist = cfg.make_dist();
    int cap = animal_exact_cap(cfg.d);
    GrowthStats stats;
    try {
        stats = animal_growth_stats(*dist, cfg.d, cfg.animals_n_lo, cfg.animals_n_hi,
                                    int(cfg.animals_replicas), cfg.animals_beta_grid, cfg.seed,
                                    cfg.bit_depth, cap, cfg.animals_allow_greedy);
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    auto files = emit_growth(cfg, stats.rows, stats.replicas_used, stats.replicas_discarded,
                             out_dir);
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["config_echo"] = cfg.echo_map();
    j["exact_cap"] = cap;
    j["replicas_used"] = stats.replicas_used;
    j["replicas_discarded"] = stats.replicas_discarded;
    j["rows"] = stats.rows.size();
    j["files"] = files.paths;
    return {j, 0};
}

DriveResult drive_verify(const ResolvedConfig& cfg, const std::string& suite,
                         const std::string& only, const std::string& inject_failure,
                         const std::string& out_dir) {
    VerifyOptions opts;
    opts.seed = cfg.seed;
    opts.systems = cfg.verify_systems;
    opts.tuples = cfg.verify_tuples;
    opts.quadrature = cfg.verify_quadrature;
    opts.only = only;
    opts.inject_failure = inject_failure;
    opts.workers = cfg.workers;
    auto report = run_verify(suite, opts);
    auto files = emit_checks(cfg, suite, report, out_dir);
    auto j = checks_json(cfg, suite, report);
    j["files"] = files.paths;
    if (report.empty_selection) j["warning"] = "0 checks selected";
    return {j, report.failed};
}

}  // namespace fpp
