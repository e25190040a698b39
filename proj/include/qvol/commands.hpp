#ifndef QVOL_COMMANDS_HPP
#define QVOL_COMMANDS_HPP

#include "qvol/config.hpp"
#include "qvol/ingest.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace qvol::cli {

/// Output destination shared by every command.
struct OutputSpec {
    std::filesystem::path out_dir = ".";
    std::string format = "csv"; ///< "csv" or "json" for the tabular outputs
};

struct SimulateArgs {
    KeyStore keys; ///< game parameter layers (defaults, config, flags)
    OutputSpec out;
};

struct SpectrumArgs {
    std::filesystem::path input;
    std::string column;
    std::string transform = "levels"; ///< "levels" or "integrate"
    AnalysisSettings settings;
    OutputSpec out;
};

struct DensityArgs {
    std::filesystem::path input;
    std::string column;
    int bins = 24;
    OutputSpec out;
};

struct StaircaseArgs {
    std::filesystem::path input;
    OutputSpec out;
};

struct StatsArgs {
    std::filesystem::path input;
    std::string column;
    int max_lag = 10;
    OutputSpec out;
};

struct CompareArgs {
    std::filesystem::path sim_input;
    std::string sim_column;
    std::string sim_transform = "levels";
    std::filesystem::path market_input;
    std::string date_column = "Date";
    std::string value_column = "Close";
    ingest::DateFormat date_format = ingest::DateFormat::Auto;
    std::string market_transform = "levels"; ///< "levels" or "log_returns"
    AnalysisSettings settings;
    OutputSpec out;
};

void cmd_simulate(const SimulateArgs& args, std::ostream& status);
void cmd_spectrum(const SpectrumArgs& args, std::ostream& status);
void cmd_density(const DensityArgs& args, std::ostream& status);
void cmd_staircase(const StaircaseArgs& args, std::ostream& status);
void cmd_stats(const StatsArgs& args, std::ostream& status);
void cmd_compare(const CompareArgs& args, std::ostream& status);

} // namespace qvol::cli

#endif
