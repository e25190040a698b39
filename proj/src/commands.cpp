#include "qvol/commands.hpp"

#include "qvol/analysis.hpp"
#include "qvol/dynamics.hpp"
#include "qvol/errors.hpp"
#include "qvol/table.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

namespace qvol::cli {

namespace {

using nlohmann::ordered_json;

table::CsvFile load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw input_error("cannot open '" + path.string() + "'");
    }
    return table::read_csv(in);
}

analysis::SpectrumOptions spectrum_options(const AnalysisSettings& settings) {
    analysis::SpectrumOptions opts;
    opts.resolutions = settings.resolutions;
    opts.bandwidth = settings.bandwidth;
    opts.alpha_points = settings.alpha_points;
    opts.normalize = !settings.raw_scale;
    return opts;
}

// A tabular result destined for a .csv (or .json, per --format) file.
struct OutTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

void write_table(const OutputSpec& out, const std::string& basename, const OutTable& tbl) {
    std::filesystem::create_directories(out.out_dir);
    if (out.format == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& row : tbl.rows) {
            ordered_json obj;
            for (std::size_t c = 0; c < tbl.columns.size(); ++c) {
                obj[tbl.columns[c]] = row[c];
            }
            arr.push_back(obj);
        }
        table::atomic_write(out.out_dir / (basename + ".json"), arr.dump(2) + "\n");
        return;
    }
    std::ostringstream csv;
    for (std::size_t c = 0; c < tbl.columns.size(); ++c) {
        csv << (c ? "," : "") << tbl.columns[c];
    }
    csv << '\n';
    for (const auto& row : tbl.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            csv << (c ? "," : "") << row[c];
        }
        csv << '\n';
    }
    table::atomic_write(out.out_dir / (basename + ".csv"), csv.str());
}

void write_json(const OutputSpec& out, const std::string& basename, const ordered_json& j) {
    std::filesystem::create_directories(out.out_dir);
    table::atomic_write(out.out_dir / (basename + ".json"), j.dump(2) + "\n");
}

std::vector<double> apply_series_transform(const std::vector<double>& column,
                                           const std::string& transform) {
    if (transform == "levels") return column;
    if (transform == "integrate") return analysis::integrate_returns(column, 1.0);
    throw domain_error("unknown transform '" + transform + "' (expected levels|integrate)");
}

ordered_json spectrum_summary(const analysis::Spectrum& spec) {
    ordered_json j;
    j["peak_alpha"] = spec.peak_alpha;
    j["peak_f"] = spec.peak_f;
    j["resolution"] = spec.peak_resolution;
    ordered_json drops = ordered_json::array();
    for (const auto& info : spec.resolutions) {
        ordered_json d;
        d["resolution"] = info.box_size;
        d["valid_boxes"] = info.valid_boxes;
        d["dropped"] = info.dropped_boxes;
        drops.push_back(d);
    }
    j["dropped_boxes"] = drops;
    return j;
}

OutTable spectrum_table(const analysis::Spectrum& spec) {
    OutTable tbl;
    tbl.columns = {"resolution", "alpha", "f"};
    for (const auto& pt : spec.points) {
        tbl.rows.push_back(
            {std::to_string(pt.resolution), table::g17(pt.alpha), table::g17(pt.f)});
    }
    return tbl;
}

} // namespace

void cmd_simulate(const SimulateArgs& args, std::ostream& status) {
    const dynamics::GameParams params = game_params_from(args.keys);
    const dynamics::Trajectory traj = dynamics::simulate(params);

    std::filesystem::create_directories(args.out.out_dir);
    if (args.out.format == "json") {
        OutTable tbl;
        tbl.columns = {"round", "t", "I", "K", "tau_B", "omega", "mass", "x", "r", "S"};
        for (const auto& st : traj.states) {
            tbl.rows.push_back({std::to_string(st.round), table::g17(st.t), table::g17(st.i),
                                table::g17(st.k), table::g17(st.tau_b), table::g17(st.omega),
                                table::g17(st.mass), table::g17(st.x), table::g17(st.r),
                                table::g17(st.s)});
        }
        write_table(args.out, "trajectory", tbl);
    } else {
        std::ostringstream csv;
        dynamics::write_trajectory_csv(traj, csv);
        table::atomic_write(args.out.out_dir / "trajectory.csv", csv.str());
    }
    table::atomic_write(args.out.out_dir / "metadata.json",
                        dynamics::trajectory_metadata_json(traj));

    status << "simulated " << params.rounds << " rounds, kept " << traj.states.size()
           << " (seed " << params.seed << ") -> "
           << (args.out.out_dir / ("trajectory." + args.out.format)).string() << "\n";
}

void cmd_spectrum(const SpectrumArgs& args, std::ostream& status) {
    const table::CsvFile csv = load_csv(args.input);
    const std::vector<double> column = table::numeric_column(csv, args.column);
    const std::vector<double> signal = apply_series_transform(column, args.transform);

    const analysis::Spectrum spec =
        analysis::large_deviation_spectrum(signal, spectrum_options(args.settings));

    write_table(args.out, "spectrum", spectrum_table(spec));
    write_json(args.out, "peak", spectrum_summary(spec));

    status << "spectrum over " << signal.size() << " samples: peak_alpha "
           << table::g17(spec.peak_alpha) << " at resolution " << spec.peak_resolution
           << "\n";
}

void cmd_density(const DensityArgs& args, std::ostream& status) {
    const table::CsvFile csv = load_csv(args.input);
    const std::vector<double> column = table::numeric_column(csv, args.column);

    const analysis::LogHistogram hist = analysis::log_histogram(column, args.bins);
    const analysis::PowerLawFit fit = analysis::fit_power_law(hist);

    OutTable tbl;
    tbl.columns = {"bin_center", "density"};
    for (std::size_t j = 0; j < hist.centers.size(); ++j) {
        tbl.rows.push_back({table::g17(hist.centers[j]), table::g17(hist.densities[j])});
    }
    write_table(args.out, "histogram", tbl);

    ordered_json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r_squared"] = fit.r_squared;
    j["bin_count"] = fit.bin_count;
    write_json(args.out, "fit", j);

    status << "density fit over " << column.size() << " samples: slope "
           << table::g17(fit.slope) << " (r^2 " << table::g17(fit.r_squared) << ")\n";
}

void cmd_staircase(const StaircaseArgs& args, std::ostream& status) {
    const table::CsvFile csv = load_csv(args.input);
    const std::vector<double> tau = table::numeric_column(csv, "tau_B");
    if (tau.empty()) {
        throw input_error("empty trajectory: no tau_B rows");
    }
    const std::vector<double> cumulative = analysis::devils_staircase(tau);

    std::vector<std::string> rounds;
    if (csv.has_column("round")) {
        const auto round_col = table::numeric_column(csv, "round");
        for (double r : round_col) {
            rounds.push_back(std::to_string(static_cast<std::int64_t>(r)));
        }
    } else {
        for (std::size_t i = 1; i <= tau.size(); ++i) rounds.push_back(std::to_string(i));
    }

    OutTable tbl;
    tbl.columns = {"round", "theta_cumulative"};
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
        tbl.rows.push_back({rounds[i], table::g17(cumulative[i])});
    }
    write_table(args.out, "staircase", tbl);

    status << "staircase over " << tau.size() << " rounds, total intrinsic time "
           << table::g17(cumulative.back()) << "\n";
}

void cmd_stats(const StatsArgs& args, std::ostream& status) {
    const table::CsvFile csv = load_csv(args.input);
    const std::vector<double> column = table::numeric_column(csv, args.column);
    const analysis::SummaryStats st = analysis::summary_stats(column, args.max_lag);

    ordered_json j;
    j["n"] = column.size();
    j["mean"] = st.mean;
    j["std"] = st.std;
    j["skewness"] = st.skewness ? ordered_json(*st.skewness) : ordered_json(nullptr);
    j["excess_kurtosis"] =
        st.excess_kurtosis ? ordered_json(*st.excess_kurtosis) : ordered_json(nullptr);
    if (st.acf_abs) {
        j["acf_abs"] = *st.acf_abs;
    } else {
        j["acf_abs"] = nullptr;
    }
    write_json(args.out, "stats", j);

    status << "stats over " << column.size() << " samples: std " << table::g17(st.std)
           << "\n";
}

void cmd_compare(const CompareArgs& args, std::ostream& status) {
    // Simulated side: a plain numeric column.
    const table::CsvFile sim_csv = load_csv(args.sim_input);
    const std::vector<double> sim_column = table::numeric_column(sim_csv, args.sim_column);
    const std::vector<double> sim_signal =
        apply_series_transform(sim_column, args.sim_transform);

    // Market side: through ingest (clean, sort, dedup).
    std::ifstream market_in(args.market_input, std::ios::binary);
    if (!market_in) {
        throw input_error("cannot open '" + args.market_input.string() + "'");
    }
    ingest::ParseOptions popts;
    popts.date_column = args.date_column;
    popts.value_column = args.value_column;
    popts.date_format = args.date_format;
    popts.source_label = args.market_input.filename().string();
    const ingest::ParseResult market = ingest::parse_csv(market_in, popts);

    std::vector<double> market_signal;
    if (args.market_transform == "levels") {
        market_signal = ingest::to_signal(market.series, ingest::Transform::Levels);
    } else if (args.market_transform == "log_returns") {
        market_signal = analysis::integrate_returns(
            ingest::to_signal(market.series, ingest::Transform::LogReturns), 1.0);
    } else {
        throw domain_error("unknown market transform '" + args.market_transform +
                           "' (expected levels|log_returns)");
    }

    const auto opts = spectrum_options(args.settings);
    const analysis::Spectrum sim_spec = analysis::large_deviation_spectrum(sim_signal, opts);
    const analysis::Spectrum market_spec =
        analysis::large_deviation_spectrum(market_signal, opts);

    bool market_above_one = false;
    for (const auto& pt : market_spec.points) {
        if (pt.alpha > 1.0) {
            market_above_one = true;
            break;
        }
    }

    ordered_json j;
    j["sim"] = spectrum_summary(sim_spec);
    j["market"] = spectrum_summary(market_spec);
    j["peak_delta"] = sim_spec.peak_alpha - market_spec.peak_alpha;
    j["market_alpha_above_one"] = market_above_one;
    ordered_json ingest_report;
    ingest_report["rows_read"] = market.report.rows_read;
    ingest_report["rows_kept"] = market.report.rows_kept;
    ingest_report["rows_dropped_malformed"] = market.report.rows_dropped_malformed;
    ingest_report["rows_dropped_nonpositive"] = market.report.rows_dropped_nonpositive;
    ingest_report["duplicate_dates_resolved"] = market.report.duplicate_dates_resolved;
    j["market_ingest"] = ingest_report;
    write_json(args.out, "compare", j);

    status << "compare: sim peak " << table::g17(sim_spec.peak_alpha) << ", market peak "
           << table::g17(market_spec.peak_alpha) << ", alpha>1 support "
           << (market_above_one ? "yes" : "no") << "\n";
}

} // namespace qvol::cli
