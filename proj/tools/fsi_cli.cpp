#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fsi/runner.hpp"

namespace {

int parse_levels(const std::string& spec, int& lo, int& hi) {
    const auto pos = spec.find("..");
    try {
        if (pos == std::string::npos) {
            lo = hi = std::stoi(spec);
        } else {
            lo = std::stoi(spec.substr(0, pos));
            hi = std::stoi(spec.substr(pos + 2));
        }
    } catch (const std::exception&) {
        return 1;
    }
    return 0;
}

void print_failure(const fsi::RunResult& r) {
    std::cerr << "run failed: " << r.failure_kind;
    if (r.failed_step >= 0) std::cerr << " at step " << r.failed_step;
    std::cerr << "\n  " << r.failure_detail << "\n";
    for (const auto& v : r.validation) std::cerr << "  - " << v << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eulerian diffuse-interface fluid-structure interaction solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    CLI::App* run_cmd = app.add_subcommand("run", "run one configured simulation");
    run_cmd->add_option("--config", config_path, "JSON configuration file")->required();
    run_cmd->add_option("--override", overrides, "key=value configuration overrides");

    int case_id = 1;
    std::string levels = "0..2";
    std::string out_dir = "out";
    std::vector<std::string> rate_overrides;
    CLI::App* rates_cmd =
        app.add_subcommand("mms-rates", "manufactured-solution refinement sweep");
    rates_cmd->add_option("--case", case_id, "parameter case (1 or 2)")
        ->check(CLI::IsMember({1, 2}));
    rates_cmd->add_option("--levels", levels, "refinement levels, e.g. 0..2");
    rates_cmd->add_option("--out", out_dir, "output directory");
    rates_cmd->add_option("--override", rate_overrides, "key=value configuration overrides");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            fsi::RunConfig cfg = fsi::RunConfig::from_json_file(config_path);
            for (const auto& o : overrides) cfg.apply_override(o);
            const fsi::RunResult r = fsi::run(cfg);
            if (!r.ok) {
                print_failure(r);
                return 1;
            }
            std::cout << "completed " << r.records.back().step
                      << " steps to t = " << r.records.back().t << "\n";
            if (r.final_errors)
                std::cout << "final errors: e_v = " << r.final_errors->e_v
                          << ", e_B = " << r.final_errors->e_b
                          << ", e_phi = " << r.final_errors->e_phi << "\n";
            std::cout << "outputs in " << cfg.out_dir << "\n";
            return 0;
        }

        int lo = 0, hi = 2;
        if (parse_levels(levels, lo, hi) != 0) {
            std::cerr << "cannot parse --levels '" << levels << "' (expected i0..i1)\n";
            return 2;
        }
        fsi::RunConfig base;
        base.out_dir = out_dir;
        for (const auto& o : rate_overrides) base.apply_override(o);
        const fsi::RatesResult r = fsi::mms_rates(case_id, lo, hi, base);

        std::printf("%-6s %-6s %-12s %-12s %-12s\n", "level", "n", "e_v", "e_B", "e_phi");
        for (const auto& lr : r.levels)
            std::printf("%-6d %-6d %-12.4e %-12.4e %-12.4e\n", lr.level, lr.n, lr.errors.e_v,
                        lr.errors.e_b, lr.errors.e_phi);
        if (!r.rate_v.empty()) {
            std::printf("%-13s %-12s %-12s %-12s\n", "levels", "rate_v", "rate_B", "rate_phi");
            for (std::size_t i = 0; i < r.rate_v.size(); ++i)
                std::printf("%d-%-11d %-12.3f %-12.3f %-12.3f\n", r.levels[i].level,
                            r.levels[i + 1].level, r.rate_v[i], r.rate_b[i], r.rate_phi[i]);
        }
        if (!r.ok) {
            std::cerr << "sweep aborted: " << r.failure << "\n";
            return 1;
        }
        std::cout << "outputs in " << out_dir << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
