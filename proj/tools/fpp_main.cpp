// fpplab command-line interface. Everything goes through the C API in
// fpplab.h; this translation unit never touches the core headers.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fpplab.h"

namespace {

struct CommonOpts {
    std::string config;
    std::string out;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<long> replicas;
    std::optional<int> workers;
    std::string x;
    std::string dist;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "flat key = value configuration file");
    cmd->add_option("--out", o.out, "output directory (default: config `out`, then $FPPLAB_OUT)");
    cmd->add_option("--set", o.sets, "override any config key, key=value")->take_all();
    cmd->add_option("--seed", o.seed, "master seed override");
    cmd->add_option("--replicas", o.replicas, "replica count override");
    cmd->add_option("--workers", o.workers, "worker thread count");
    cmd->add_option("-x,--x", o.x, "displacement, comma separated (e.g. 16,0)");
    cmd->add_option("--dist", o.dist,
                    "distribution, kind[:params] (uniform, exponential:RATE, "
                    "two_point:A,B,P, bernoulli:P0, point_mass:C, piecewise:TABLE.csv)");
}

// Expand the --dist sugar into flat config overrides.
int append_dist_overrides(const std::string& spec, std::vector<std::string>& sets) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string params = colon == std::string::npos ? "" : spec.substr(colon + 1);
    sets.push_back("dist=" + kind);
    if (kind == "uniform") return 0;
    if (kind == "exponential") {
        if (!params.empty()) sets.push_back("dist.rate=" + params);
        return 0;
    }
    if (kind == "bernoulli") {
        sets.push_back("dist.p0=" + params);
        return 0;
    }
    if (kind == "point_mass") {
        sets.push_back("dist.value=" + params);
        return 0;
    }
    if (kind == "piecewise") {
        sets.push_back("dist.table=" + params);
        return 0;
    }
    if (kind == "two_point") {
        auto c1 = params.find(',');
        auto c2 = c1 == std::string::npos ? std::string::npos : params.find(',', c1 + 1);
        if (c2 == std::string::npos) {
            std::fprintf(stderr, "error: --dist two_point needs A,B,P\n");
            return 2;
        }
        sets.push_back("dist.a=" + params.substr(0, c1));
        sets.push_back("dist.b=" + params.substr(c1 + 1, c2 - c1 - 1));
        sets.push_back("dist.p=" + params.substr(c2 + 1));
        return 0;
    }
    std::fprintf(stderr, "error: unknown distribution kind '%s'\n", kind.c_str());
    return 2;
}

class ConfigHandle {
  public:
    ~ConfigHandle() { fpp_config_free(cfg_); }
    fpp_config* get() const { return cfg_; }

    int load(const CommonOpts& o) {
        std::vector<std::string> sets = o.sets;
        if (!o.dist.empty())
            if (int rc = append_dist_overrides(o.dist, sets)) return rc;
        if (!o.x.empty()) sets.push_back("x=" + o.x);
        if (o.seed) sets.push_back("seed=" + std::to_string(*o.seed));
        if (o.replicas) sets.push_back("replicas=" + std::to_string(*o.replicas));
        if (o.workers) sets.push_back("workers=" + std::to_string(*o.workers));
        if (!o.out.empty()) sets.push_back("out=" + o.out);
        std::vector<const char*> raw;
        for (const auto& s : sets) raw.push_back(s.c_str());
        fpp_status st = fpp_config_load(o.config.empty() ? nullptr : o.config.c_str(),
                                        raw.data(), raw.size(), &cfg_);
        if (st != FPP_OK) std::fprintf(stderr, "error: %s\n", fpp_last_error());
        return st;
    }

  private:
    fpp_config* cfg_ = nullptr;
};

int finish(fpp_status st, char* summary) {
    if (summary) {
        std::fputs(summary, stdout);
        std::fputc('\n', stdout);
        fpp_string_free(summary);
    }
    if (st != FPP_OK) std::fprintf(stderr, "error: %s\n", fpp_last_error());
    return st;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fpplab: first-passage percolation simulation and verification"};
    app.set_version_flag("--version", fpp_version());
    app.require_subcommand(1);

    CommonOpts sample_o, campaign_o, tails_o, var_o, animals_o, lemmas_o, entropy_o;
    std::string record_path, only, inject;

    auto* c_sample = app.add_subcommand("sample", "sample one configuration and report (0,x)");
    add_common(c_sample, sample_o);
    auto* c_campaign = app.add_subcommand("campaign", "seeded Monte Carlo campaign");
    add_common(c_campaign, campaign_o);
    auto* c_tails = app.add_subcommand("tails", "re-profile a persisted campaign");
    add_common(c_tails, tails_o);
    c_tails->add_option("--record", record_path, "path to a campaign .run.json")->required();
    auto* c_var = app.add_subcommand("variance-scaling", "variance ratio across sizes");
    add_common(c_var, var_o);
    auto* c_animals = app.add_subcommand("animals", "greedy lattice animal growth statistics");
    add_common(c_animals, animals_o);
    auto* c_lemmas = app.add_subcommand("verify-lemmas", "exact identity and inequality suite");
    add_common(c_lemmas, lemmas_o);
    auto* c_entropy = app.add_subcommand("entropy-checks", "entropy engine check suite");
    add_common(c_entropy, entropy_o);
    for (auto* cmd : {c_lemmas, c_entropy}) {
        cmd->add_option("--only", only, "run only checks whose name contains this substring");
        cmd->add_option("--inject-failure", inject, "test hook: flip the named check")
            ->group("");  // hidden
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return FPP_CONFIG_ERROR;
    }

    auto run_verify_cmd = [&](const CommonOpts& o, const char* suite) -> int {
        ConfigHandle cfg;
        if (int rc = cfg.load(o)) return rc;
        char* report = nullptr;
        int n_failed = 0;
        fpp_status st = fpp_verify_run(cfg.get(), suite, only.empty() ? nullptr : only.c_str(),
                                       inject.empty() ? nullptr : inject.c_str(), nullptr,
                                       &report, &n_failed);
        return finish(st, report);
    };

    if (c_sample->parsed()) {
        ConfigHandle cfg;
        if (int rc = cfg.load(sample_o)) return rc;
        char* summary = nullptr;
        return finish(fpp_sample_run(cfg.get(), nullptr, &summary), summary);
    }
    if (c_campaign->parsed()) {
        ConfigHandle cfg;
        if (int rc = cfg.load(campaign_o)) return rc;
        char* summary = nullptr;
        return finish(fpp_campaign_run(cfg.get(), nullptr, &summary), summary);
    }
    if (c_tails->parsed()) {
        ConfigHandle cfg;
        if (int rc = cfg.load(tails_o)) return rc;
        char* summary = nullptr;
        return finish(fpp_tails_run(cfg.get(), record_path.c_str(), nullptr, &summary), summary);
    }
    if (c_var->parsed()) {
        ConfigHandle cfg;
        if (int rc = cfg.load(var_o)) return rc;
        char* summary = nullptr;
        return finish(fpp_variance_scaling_run(cfg.get(), nullptr, &summary), summary);
    }
    if (c_animals->parsed()) {
        ConfigHandle cfg;
        if (int rc = cfg.load(animals_o)) return rc;
        char* summary = nullptr;
        return finish(fpp_animals_run(cfg.get(), nullptr, &summary), summary);
    }
    if (c_lemmas->parsed()) return run_verify_cmd(lemmas_o, "lemmas");
    if (c_entropy->parsed()) return run_verify_cmd(entropy_o, "entropy");
    return FPP_CONFIG_ERROR;
}
