#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "animals.hpp"
#include "config.hpp"
#include "verify.hpp"

namespace fpp {

constexpr int kFormatVersion = 1;

// "subcommand_n<l1>_<dist>_s<seed>", plus a _vK suffix on collision.
std::string artifact_base(const std::string& subcommand, const ResolvedConfig& cfg);

// First base (possibly versioned) such that no target file exists yet.
std::string versioned_base(const std::string& out_dir, const std::string& base,
                           const std::vector<std::string>& extensions);

struct TailFits {
    bool valid_lower = false, valid_upper = false;
    RateFit lower, upper;
    std::string note;
};
TailFits fit_tails(const std::vector<TailPoint>& tails, long n_samples);

// Campaign artifact trio + config echo. replicas.csv is a pure function of
// (config echo minus execution keys, record), so reruns are byte-identical.
struct EmittedFiles {
    std::string base;
    std::vector<std::string> paths;
};
EmittedFiles emit_campaign(const ResolvedConfig& cfg, const RunRecord& rec,
                           const std::vector<TailPoint>& tails, const TailFits& fits,
                           const std::string& out_dir, const std::string& subcommand);

nlohmann::json campaign_summary(const ResolvedConfig& cfg, const RunRecord& rec,
                                const std::vector<TailPoint>& tails, const TailFits& fits);

// Reload a persisted campaign (run.json + sibling replicas.csv).
RunRecord load_record(const std::string& run_json_path, ResolvedConfig* cfg_out);

EmittedFiles emit_tails(const ResolvedConfig& cfg, const std::vector<TailPoint>& tails,
                        const TailFits& fits, const std::string& out_dir);

EmittedFiles emit_variance(const ResolvedConfig& cfg,
                           const std::vector<VarianceScalePoint>& points,
                           const std::string& out_dir);

EmittedFiles emit_growth(const ResolvedConfig& cfg, const std::vector<GrowthRow>& rows,
                         int used, int discarded, const std::string& out_dir);

EmittedFiles emit_checks(const ResolvedConfig& cfg, const std::string& suite,
                         const VerifyReport& report, const std::string& out_dir);
nlohmann::json checks_json(const ResolvedConfig& cfg, const std::string& suite,
                           const VerifyReport& report);

// Config snapshot: one JSON header line (d, lo, hi, dist, seed, J), '\n',
// then the weights as little-endian 64-bit floats in canonical edge order.
void write_config_snapshot(const EdgeConfig& cfg, const std::string& path);
EdgeConfig read_config_snapshot(const std::string& path);

}  // namespace fpp
