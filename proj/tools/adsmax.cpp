// adsmax <scenario> --config <path> [--out <path>]
// exit status: 0 pass, 1 fail or scenario failure, 2 configuration error
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adsmax/adsmax.h"

namespace {

constexpr int kPass = 0, kFail = 1, kConfigError = 2;

int config_error(const char* what) {
    std::fprintf(stderr, "adsmax: %s: %s\n", what, adsmax_last_error());
    return kConfigError;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Runs a verification scenario and writes a key-value report plus CSV tables."};
    std::string scenario, config_path, out_path, sweep_param;
    std::vector<double> sweep_values;
    bool quiet = false;

    std::vector<std::string> names;
    for (size_t i = 0; i < adsmax_scenario_count(); ++i) names.emplace_back(adsmax_scenario_name(i));
    app.add_option("scenario", scenario, "scenario to run")->required()->check(CLI::IsMember(names));
    app.add_option("--config", config_path, "key = value configuration file")->required();
    app.add_option("--out", out_path, "report path (overrides output_path); tables go to <out>.<table>.csv");
    auto* sw = app.add_option("--sweep", sweep_param, "repeat the scenario over one parameter")
                   ->check(CLI::IsMember({"R", "n_r", "epsilon", "Phi_scale"}));
    app.add_option("--values", sweep_values, "values for --sweep")->needs(sw)->delimiter(',');
    sw->needs("--values");
    app.add_flag("-q,--quiet", quiet, "do not print the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kConfigError;
    }

    adsmax_config* cfg = nullptr;
    if (adsmax_config_from_file(config_path.c_str(), &cfg) != ADSMAX_OK) return config_error("config");
    int status = kConfigError;
    adsmax_report* report = nullptr;
    do {
        if (adsmax_config_set(cfg, "scenario", scenario.c_str()) != ADSMAX_OK) {
            config_error("config");
            break;
        }
        if (adsmax_config_validate(cfg) != ADSMAX_OK) {
            config_error("config");
            break;
        }
        if (out_path.empty()) out_path = adsmax_config_output_path(cfg);

        int rc = sweep_param.empty()
                     ? adsmax_run(cfg, &report)
                     : adsmax_sweep(cfg, sweep_param.c_str(), sweep_values.data(), sweep_values.size(), &report);
        if (rc == ADSMAX_ERR_CONFIG_PARSE) {
            config_error("config");
            break;
        }
        if (rc != ADSMAX_OK) {
            std::fprintf(stderr, "adsmax: %s: %s\n", adsmax_error_name(rc), adsmax_last_error());
            status = kFail;
            break;
        }
        if (!quiet) std::fputs(adsmax_report_text(report), stdout);
        status = adsmax_report_passed(report) ? kPass : kFail;
        if (!out_path.empty() && adsmax_report_write(report, out_path.c_str()) != ADSMAX_OK) {
            std::fprintf(stderr, "adsmax: cannot write report: %s\n", adsmax_last_error());
            status = kFail;
        }
    } while (false);
    adsmax_report_free(report);
    adsmax_config_free(cfg);
    return status;
}
