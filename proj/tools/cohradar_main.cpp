#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "cohradar/commands.hpp"
#include "cohradar/config.hpp"
#include "cohradar/errors.hpp"

namespace {

void apply_thread_cap() {
    const char* env = std::getenv("COHRADAR_THREADS");
    if (!env) return;
    try {
        const int cap = std::stoi(env);
        if (cap >= 1) omp_set_num_threads(std::min(cap, omp_get_max_threads()));
    } catch (const std::exception&) {
        std::cerr << "ignoring invalid COHRADAR_THREADS=" << env << "\n";
    }
}

struct CommonFlags {
    std::string config_path;
    std::string out_dir = ".";
    std::int64_t seed = -1;
    std::string mode;
    int trials = 0;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags* flags, bool config_required = true) {
    auto* opt = cmd->add_option("--config", flags->config_path, "scenario JSON file");
    if (config_required) opt->required();
    cmd->add_option("--out", flags->out_dir, "output directory");
    cmd->add_option("--seed", flags->seed, "override plan.seed");
    cmd->add_option("--mode", flags->mode, "override mode: semianalytic|sampled")
        ->check(CLI::IsMember({"semianalytic", "sampled"}));
    cmd->add_option("--trials", flags->trials, "override trials");
    cmd->add_flag("--quiet", flags->quiet, "suppress the summary line");
}

cohradar::ScenarioConfig load_with_overrides(const CommonFlags& flags) {
    cohradar::ScenarioConfig config = cohradar::load_scenario(flags.config_path);
    if (flags.seed >= 0) config.plan.seed = static_cast<std::uint64_t>(flags.seed);
    if (flags.mode == "semianalytic") config.mode = cohradar::CorrelatorMode::kSemiAnalytic;
    if (flags.mode == "sampled") config.mode = cohradar::CorrelatorMode::kSampled;
    if (flags.trials > 0) config.trials = flags.trials;
    if (config.mode == cohradar::CorrelatorMode::kSampled &&
        !(config.sample_rate_hz >= 8.0 * config.plan.carrier_hz)) {
        throw cohradar::SchemaError("sampled mode requires sample_rate_hz >= 8 * plan.carrier_hz");
    }
    for (const std::string& warning : config.plan.warnings()) {
        if (!flags.quiet) std::cerr << "warning: " << warning << "\n";
    }
    return config;
}

void report(const cohradar::CommandOutput& output, bool quiet) {
    if (quiet) return;
    std::cout << output.summary << "\n";
    for (const std::string& file : output.files) std::cout << "  wrote " << file << "\n";
}

} // namespace

int main(int argc, char** argv) {
    apply_thread_cap();

    CLI::App app{"partially coherent radar simulation and range estimation"};
    app.require_subcommand(1);

    CommonFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "run one coherence-length sweep");
    add_common(sweep, &sweep_flags);

    CommonFlags mc_flags;
    auto* montecarlo = app.add_subcommand("montecarlo", "repeated sweeps with oracle comparison");
    add_common(montecarlo, &mc_flags);

    CommonFlags analyze_flags;
    std::vector<std::string> analyze_inputs;
    int analyze_targets = -1;
    double analyze_offset = -1.0;
    auto* analyze = app.add_subcommand("analyze", "breakpoint regression on sweep csv files");
    add_common(analyze, &analyze_flags);
    analyze->add_option("inputs", analyze_inputs, "sweep.csv / trials.csv files")->required();
    analyze->add_option("--targets", analyze_targets, "number of targets (0 = auto detect)");
    analyze->add_option("--delay-offset-m", analyze_offset, "cable/component delay, meters");

    CommonFlags plan_flags;
    auto* plan = app.add_subcommand("plan", "sweep-time and bandwidth figures");
    add_common(plan, &plan_flags);

    CommonFlags spectrum_flags;
    auto* spectrum = app.add_subcommand("spectrum", "transmitted spectrum at selected points");
    add_common(spectrum, &spectrum_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cohradar::kExitOk : cohradar::kExitUsage;
    }

    try {
        if (sweep->parsed()) {
            const auto config = load_with_overrides(sweep_flags);
            report(cohradar::cmd_sweep(config, sweep_flags.out_dir), sweep_flags.quiet);
        } else if (montecarlo->parsed()) {
            const auto config = load_with_overrides(mc_flags);
            report(cohradar::cmd_montecarlo(config, mc_flags.out_dir), mc_flags.quiet);
        } else if (analyze->parsed()) {
            auto config = load_with_overrides(analyze_flags);
            if (analyze_targets >= 0) config.analysis.num_targets = analyze_targets;
            if (analyze_offset >= 0.0) config.delay_offset_m = analyze_offset;
            report(cohradar::cmd_analyze(config, analyze_inputs, analyze_flags.out_dir),
                   analyze_flags.quiet);
        } else if (plan->parsed()) {
            const auto config = load_with_overrides(plan_flags);
            report(cohradar::cmd_plan(config, plan_flags.out_dir), plan_flags.quiet);
        } else if (spectrum->parsed()) {
            const auto config = load_with_overrides(spectrum_flags);
            report(cohradar::cmd_spectrum(config, spectrum_flags.out_dir), spectrum_flags.quiet);
        }
    } catch (const cohradar::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return cohradar::kExitSchema;
    } catch (const cohradar::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return cohradar::kExitNumerical;
    } catch (const cohradar::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return cohradar::kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return cohradar::kExitPrecondition;
    } catch (const std::domain_error& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return cohradar::kExitPrecondition;
    } catch (const std::out_of_range& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return cohradar::kExitPrecondition;
    }
    return cohradar::kExitOk;
}
