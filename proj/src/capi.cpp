#include "fpplab.h"

#include <cstring>
#include <string>

#include "driver.hpp"

using namespace fpp;

namespace {

thread_local std::string g_last_error;

fpp_status classify(const std::exception& e) {
    if (dynamic_cast<const IoError*>(&e)) return FPP_RUNTIME_ERROR;
    if (dynamic_cast<const ConfigError*>(&e)) return FPP_CONFIG_ERROR;
    if (dynamic_cast<const std::invalid_argument*>(&e)) return FPP_CONFIG_ERROR;
    if (dynamic_cast<const std::domain_error*>(&e)) return FPP_CONFIG_ERROR;
    if (dynamic_cast<const std::range_error*>(&e)) return FPP_CONFIG_ERROR;
    return FPP_RUNTIME_ERROR;
}

template <class Fn>
fpp_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return classify(e);
    } catch (...) {
        g_last_error = "unknown error";
        return FPP_RUNTIME_ERROR;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

fpp_status require(bool ok, const char* message) {
    if (ok) return FPP_OK;
    g_last_error = message;
    return FPP_CONFIG_ERROR;
}

const WeightDistribution* unwrap(const fpp_dist* d) {
    return reinterpret_cast<const WeightDistribution*>(d);
}
const ResolvedConfig* unwrap(const fpp_config* c) {
    return reinterpret_cast<const ResolvedConfig*>(c);
}

std::string resolve_out_dir(const ResolvedConfig& cfg, const char* out_dir) {
    return out_dir && *out_dir ? out_dir : cfg.out_dir;
}

}  // namespace

extern "C" {

const char* fpp_version(void) { return "fpplab 1.0.0"; }

const char* fpp_last_error(void) { return g_last_error.c_str(); }

void fpp_string_free(char* s) { delete[] s; }

fpp_status fpp_dist_create(const char* kind, const double* params, size_t n_params,
                           const char* table_path, fpp_dist** out) {
    if (auto st = require(kind && out, "fpp_dist_create: null argument")) return st;
    return guarded([&] {
        std::vector<double> ps(params, params + (params ? n_params : 0));
        auto* d = new WeightDistribution(
            WeightDistribution::parse(kind, ps, table_path ? table_path : ""));
        *out = reinterpret_cast<fpp_dist*>(d);
        return FPP_OK;
    });
}

void fpp_dist_free(fpp_dist* dist) { delete unwrap(dist); }

fpp_status fpp_dist_cdf(const fpp_dist* dist, double t, double* out) {
    if (auto st = require(dist && out, "fpp_dist_cdf: null argument")) return st;
    return guarded([&] {
        *out = unwrap(dist)->cdf(t);
        return FPP_OK;
    });
}

fpp_status fpp_dist_inverse_cdf(const fpp_dist* dist, double u, double* out) {
    if (auto st = require(dist && out, "fpp_dist_inverse_cdf: null argument")) return st;
    return guarded([&] {
        *out = unwrap(dist)->inverse_cdf(u);
        return FPP_OK;
    });
}

fpp_status fpp_dist_animal_weight(const fpp_dist* dist, double t, double* out) {
    if (auto st = require(dist && out, "fpp_dist_animal_weight: null argument")) return st;
    return guarded([&] {
        *out = unwrap(dist)->animal_weight(t);
        return FPP_OK;
    });
}

fpp_status fpp_dist_atom_at_zero(const fpp_dist* dist, double* out) {
    if (auto st = require(dist && out, "fpp_dist_atom_at_zero: null argument")) return st;
    return guarded([&] {
        *out = unwrap(dist)->atom_at_zero();
        return FPP_OK;
    });
}

fpp_status fpp_dist_validate_subcritical(const fpp_dist* dist, int dim, int* ok) {
    if (auto st = require(dist && ok, "fpp_dist_validate_subcritical: null argument")) return st;
    return guarded([&] {
        *ok = unwrap(dist)->validate_subcritical(dim) ? 1 : 0;
        return FPP_OK;
    });
}

fpp_status fpp_dist_sample_weight(const fpp_dist* dist, uint64_t seed, uint32_t bit_depth,
                                  double* weight, uint64_t* bits) {
    if (auto st = require(dist && weight && bits, "fpp_dist_sample_weight: null argument"))
        return st;
    return guarded([&] {
        RngStream stream(seed);
        auto [w, enc] = unwrap(dist)->sample_weight(stream, bit_depth);
        *weight = w;
        *bits = enc.bits;
        return FPP_OK;
    });
}

fpp_status fpp_encode_uniform(const int* bits, size_t depth, double* out) {
    if (auto st = require(bits && out, "fpp_encode_uniform: null argument")) return st;
    return guarded([&] {
        std::vector<int> bs(bits, bits + depth);
        *out = encode_uniform(bs, unsigned(depth));
        return FPP_OK;
    });
}

fpp_status fpp_config_load(const char* path, const char* const* overrides, size_t n_overrides,
                           fpp_config** out) {
    if (auto st = require(out != nullptr, "fpp_config_load: null output")) return st;
    return guarded([&] {
        std::vector<std::string> ovs;
        for (size_t i = 0; i < n_overrides; ++i)
            if (overrides && overrides[i]) ovs.emplace_back(overrides[i]);
        auto* cfg = new ResolvedConfig(parse_config(path ? path : "", ovs));
        *out = reinterpret_cast<fpp_config*>(cfg);
        return FPP_OK;
    });
}

fpp_status fpp_config_echo(const fpp_config* cfg, char** text) {
    if (auto st = require(cfg && text, "fpp_config_echo: null argument")) return st;
    return guarded([&] {
        *text = dup_string(unwrap(cfg)->echo());
        return FPP_OK;
    });
}

void fpp_config_free(fpp_config* cfg) { delete unwrap(cfg); }

fpp_status fpp_sample_run(const fpp_config* cfg, const char* out_dir, char** summary_json) {
    if (auto st = require(cfg && summary_json, "fpp_sample_run: null argument")) return st;
    return guarded([&] {
        auto res = drive_sample(*unwrap(cfg), resolve_out_dir(*unwrap(cfg), out_dir));
        *summary_json = dup_string(res.summary.dump(2));
        return FPP_OK;
    });
}

fpp_status fpp_campaign_run(const fpp_config* cfg, const char* out_dir, char** summary_json) {
    if (auto st = require(cfg && summary_json, "fpp_campaign_run: null argument")) return st;
    return guarded([&] {
        auto res = drive_campaign(*unwrap(cfg), resolve_out_dir(*unwrap(cfg), out_dir));
        *summary_json = dup_string(res.summary.dump(2));
        return FPP_OK;
    });
}

fpp_status fpp_tails_run(const fpp_config* cfg, const char* record_json_path,
                         const char* out_dir, char** summary_json) {
    if (auto st = require(cfg && summary_json, "fpp_tails_run: null argument")) return st;
    return guarded([&] {
        auto res = drive_tails(*unwrap(cfg), record_json_path ? record_json_path : "",
                               resolve_out_dir(*unwrap(cfg), out_dir));
        *summary_json = dup_string(res.summary.dump(2));
        return FPP_OK;
    });
}

fpp_status fpp_variance_scaling_run(const fpp_config* cfg, const char* out_dir,
                                    char** summary_json) {
    if (auto st = require(cfg && summary_json, "fpp_variance_scaling_run: null argument"))
        return st;
    return guarded([&] {
        auto res = drive_variance_scaling(*unwrap(cfg), resolve_out_dir(*unwrap(cfg), out_dir));
        *summary_json = dup_string(res.summary.dump(2));
        return FPP_OK;
    });
}

fpp_status fpp_animals_run(const fpp_config* cfg, const char* out_dir, char** summary_json) {
    if (auto st = require(cfg && summary_json, "fpp_animals_run: null argument")) return st;
    return guarded([&] {
        auto res = drive_animals(*unwrap(cfg), resolve_out_dir(*unwrap(cfg), out_dir));
        *summary_json = dup_string(res.summary.dump(2));
        return FPP_OK;
    });
}

fpp_status fpp_verify_run(const fpp_config* cfg, const char* suite, const char* only,
                          const char* inject_failure, const char* out_dir, char** report_json,
                          int* n_failed) {
    if (auto st = require(cfg && suite && report_json, "fpp_verify_run: null argument"))
        return st;
    return guarded([&]() -> fpp_status {
        auto res = drive_verify(*unwrap(cfg), suite, only ? only : "",
                                inject_failure ? inject_failure : "",
                                resolve_out_dir(*unwrap(cfg), out_dir));
        *report_json = dup_string(res.summary.dump(2));
        if (n_failed) *n_failed = int(res.failed_checks);
        if (res.failed_checks > 0) {
            g_last_error = std::to_string(res.failed_checks) + " check(s) failed";
            return FPP_CHECK_FAILED;
        }
        return FPP_OK;
    });
}

}  // extern "C"
