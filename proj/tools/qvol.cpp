// qvol — simulate the repeated volatility game and analyze the output:
// large-deviation spectra, power-law densities, intrinsic-time staircases,
// summary statistics, and comparison against market volatility series.

#include "qvol/commands.hpp"
#include "qvol/errors.hpp"
#include "qvol/version.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

namespace {

using qvol::cli::KeyStore;

struct FlagSet {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void add(CLI::App* cmd, const std::string& flag, const std::string& key,
             const std::string& help) {
        options[key] = cmd->add_option(flag, values[key], help);
    }

    void apply(KeyStore& store) const {
        for (const auto& [key, opt] : options) {
            if (opt->count() > 0) store.set_flag(key, values.at(key));
        }
    }
};

void add_game_flags(CLI::App* cmd, FlagSet& flags) {
    flags.add(cmd, "--epsilon", "epsilon", "coupling strength in [0,1]");
    flags.add(cmd, "--u", "u", "scale parameter in (0,1)");
    flags.add(cmd, "--D", "D", "power-law scaling parameter (!= 1)");
    flags.add(cmd, "--mu", "mu", "mean return per clock time");
    flags.add(cmd, "--dt", "dt", "round duration");
    flags.add(cmd, "--sigma", "sigma", "fixed volatility component (> 0)");
    flags.add(cmd, "--b", "b", "evolutionary pressure (default 1)");
    flags.add(cmd, "--hbar-s", "hbar_s", "Planck-like constant (default 1)");
    flags.add(cmd, "--s0", "s0", "initial price (default 1)");
    flags.add(cmd, "--seed", "seed", "64-bit PRNG seed (default 42)");
    flags.add(cmd, "--rounds", "rounds", "total rounds to simulate");
    flags.add(cmd, "--transient", "transient", "leading rounds to discard");
    flags.add(cmd, "--i0", "i0", "initial driver in [0,1) or 'random'");
    flags.add(cmd, "--r-init", "r_init", "first round's coupling return (default 0)");
}

void add_estimator_flags(CLI::App* cmd, FlagSet& flags) {
    flags.add(cmd, "--resolutions", "resolutions",
              "comma-separated box sizes (default 32,64,128,256)");
    flags.add(cmd, "--bandwidth", "bandwidth", "kernel bandwidth (default: data-driven)");
    flags.add(cmd, "--alpha-points", "alpha_points", "alpha grid size (default 256)");
    flags.values["raw_scale"] = "true"; // flag presence means true
    flags.options["raw_scale"] = cmd->add_flag(
        "--raw-scale",
        "analyze the signal at its absolute scale (skip min-max normalization)");
}

int exit_with(int code, const std::string& message) {
    std::cerr << "error[" << code << "]: " << message << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-game volatility simulator and multifractal analysis toolkit"};
    app.set_version_flag("--version", std::string("qvol ") + qvol::kEngineVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv";
    app.add_option("--config", config_path, "flat key = value config file");
    app.add_option("--out", out_dir, "output directory (default .)");
    app.add_option("--format", format, "tabular output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run the game and write a trajectory");
    simulate->fallthrough();
    FlagSet sim_flags;
    add_game_flags(simulate, sim_flags);

    // spectrum
    auto* spectrum =
        app.add_subcommand("spectrum", "large-deviation spectrum of a CSV column");
    spectrum->fallthrough();
    std::string spec_input, spec_column, spec_transform = "levels";
    spectrum->add_option("--input", spec_input, "input CSV")->required();
    spectrum->add_option("--column", spec_column, "column to analyze")->required();
    spectrum->add_option("--transform", spec_transform, "levels|integrate")
        ->check(CLI::IsMember({"levels", "integrate"}));
    FlagSet spec_flags;
    add_estimator_flags(spectrum, spec_flags);

    // density
    auto* density =
        app.add_subcommand("density", "log-spaced histogram and power-law fit of a column");
    density->fallthrough();
    std::string dens_input, dens_column;
    density->add_option("--input", dens_input, "input CSV")->required();
    density->add_option("--column", dens_column, "column to bin")->required();
    FlagSet dens_flags;
    dens_flags.add(density, "--bins", "bins", "number of log-spaced bins (default 24)");

    // staircase
    auto* staircase =
        app.add_subcommand("staircase", "cumulative intrinsic time from a trajectory");
    staircase->fallthrough();
    std::string stair_input;
    staircase->add_option("--input", stair_input, "trajectory CSV with a tau_B column")
        ->required();

    // stats
    auto* stats = app.add_subcommand("stats", "summary statistics of a CSV column");
    stats->fallthrough();
    std::string stats_input, stats_column;
    stats->add_option("--input", stats_input, "input CSV")->required();
    stats->add_option("--column", stats_column, "column to summarize")->required();
    FlagSet stats_flags;
    stats_flags.add(stats, "--max-lag", "max_lag", "autocorrelation lags (default 10)");

    // compare
    auto* compare = app.add_subcommand(
        "compare", "simulated spectrum vs market volatility spectrum");
    compare->fallthrough();
    std::string cmp_sim, cmp_sim_column, cmp_sim_transform = "levels";
    std::string cmp_market, cmp_date_col = "Date", cmp_value_col = "Close";
    std::string cmp_date_format = "auto", cmp_market_transform = "levels";
    compare->add_option("--sim", cmp_sim, "simulated trajectory CSV")->required();
    compare->add_option("--sim-column", cmp_sim_column, "simulated column")->required();
    compare->add_option("--sim-transform", cmp_sim_transform, "levels|integrate")
        ->check(CLI::IsMember({"levels", "integrate"}));
    compare->add_option("--market", cmp_market, "market CSV (Date/Close schema)")
        ->required();
    compare->add_option("--date-column", cmp_date_col, "market date column");
    compare->add_option("--value-column", cmp_value_col, "market value column");
    compare->add_option("--date-format", cmp_date_format, "auto|iso|dmy")
        ->check(CLI::IsMember({"auto", "iso", "dmy"}));
    compare->add_option("--market-transform", cmp_market_transform, "levels|log_returns")
        ->check(CLI::IsMember({"levels", "log_returns"}));
    FlagSet cmp_flags;
    add_estimator_flags(compare, cmp_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        return exit_with(1, e.what());
    }

    try {
        KeyStore store;
        if (!config_path.empty()) {
            for (const auto& [key, value] : qvol::cli::parse_config_file(config_path)) {
                store.set_config(key, value);
            }
        }
        qvol::cli::OutputSpec out{out_dir, format};

        if (simulate->parsed()) {
            sim_flags.apply(store);
            qvol::cli::cmd_simulate({store, out}, std::cout);
        } else if (spectrum->parsed()) {
            spec_flags.apply(store);
            qvol::cli::SpectrumArgs args;
            args.input = spec_input;
            args.column = spec_column;
            args.transform = spec_transform;
            args.settings = qvol::cli::analysis_settings_from(store);
            args.out = out;
            qvol::cli::cmd_spectrum(args, std::cout);
        } else if (density->parsed()) {
            dens_flags.apply(store);
            qvol::cli::DensityArgs args;
            args.input = dens_input;
            args.column = dens_column;
            args.bins = qvol::cli::analysis_settings_from(store).bins;
            args.out = out;
            qvol::cli::cmd_density(args, std::cout);
        } else if (staircase->parsed()) {
            qvol::cli::StaircaseArgs args;
            args.input = stair_input;
            args.out = out;
            qvol::cli::cmd_staircase(args, std::cout);
        } else if (stats->parsed()) {
            stats_flags.apply(store);
            qvol::cli::StatsArgs args;
            args.input = stats_input;
            args.column = stats_column;
            args.max_lag = qvol::cli::analysis_settings_from(store).max_lag;
            args.out = out;
            qvol::cli::cmd_stats(args, std::cout);
        } else if (compare->parsed()) {
            cmp_flags.apply(store);
            qvol::cli::CompareArgs args;
            args.sim_input = cmp_sim;
            args.sim_column = cmp_sim_column;
            args.sim_transform = cmp_sim_transform;
            args.market_input = cmp_market;
            args.date_column = cmp_date_col;
            args.value_column = cmp_value_col;
            if (cmp_date_format == "iso") {
                args.date_format = qvol::ingest::DateFormat::Iso;
            } else if (cmp_date_format == "dmy") {
                args.date_format = qvol::ingest::DateFormat::DayFirst;
            }
            args.market_transform = cmp_market_transform;
            args.settings = qvol::cli::analysis_settings_from(store);
            args.out = out;
            qvol::cli::cmd_compare(args, std::cout);
        }
        return 0;
    } catch (const qvol::domain_error& e) {
        return exit_with(2, e.what());
    } catch (const qvol::input_error& e) {
        return exit_with(2, e.what());
    } catch (const qvol::numerical_error& e) {
        return exit_with(3, e.what());
    } catch (const std::exception& e) {
        return exit_with(3, e.what());
    }
}
