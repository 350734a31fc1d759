#pragma once

#include <string>

#include "io.hpp"

namespace fpp {

// High-level entry points behind the CLI subcommands. Each runs the work,
// writes the artifact files into out_dir and returns a JSON summary.
struct DriveResult {
    nlohmann::json summary;
    long failed_checks = 0;
};

DriveResult drive_sample(const ResolvedConfig& cfg, const std::string& out_dir);
DriveResult drive_campaign(const ResolvedConfig& cfg, const std::string& out_dir);
DriveResult drive_tails(const ResolvedConfig& cfg, const std::string& record_json_path,
                        const std::string& out_dir);
DriveResult drive_variance_scaling(const ResolvedConfig& cfg, const std::string& out_dir);
DriveResult drive_animals(const ResolvedConfig& cfg, const std::string& out_dir);
DriveResult drive_verify(const ResolvedConfig& cfg, const std::string& suite,
                         const std::string& only, const std::string& inject_failure,
                         const std::string& out_dir);

}  // namespace fpp
