#ifndef QVOL_CONFIG_HPP
#define QVOL_CONFIG_HPP

#include "qvol/analysis.hpp"
#include "qvol/dynamics.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace qvol::cli {

/**
 * Layered key -> value store implementing the precedence
 *   command-line flag > config file > documented default.
 * Values are plain strings; typed accessors validate and name the key on
 * failure.
 */
class KeyStore {
public:
    /// Lowest layer: built-in default.
    void set_default(const std::string& key, const std::string& value);
    /// Middle layer: config file entry.
    void set_config(const std::string& key, const std::string& value);
    /// Top layer: command-line flag.
    void set_flag(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    /// Raw lookup; throws input_error("missing required key 'k'") if unset.
    std::string get(const std::string& key) const;

    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    std::uint64_t get_uint(const std::string& key) const;

private:
    std::map<std::string, std::string> defaults_;
    std::map<std::string, std::string> config_;
    std::map<std::string, std::string> flags_;
};

/// Parse a flat `key = value` config file ('#' starts a comment). Unknown
/// keys are accepted; consumers pick what they need.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

/// Analysis/estimator settings shared by the spectrum-producing commands.
struct AnalysisSettings {
    std::vector<int> resolutions = {32, 64, 128, 256};
    double bandwidth = 0.0;
    std::size_t alpha_points = 256;
    bool raw_scale = false; ///< skip the min-max normalization of the signal
    int bins = 24;
    int max_lag = 10;
};

/// Build GameParams from a KeyStore; throws naming the first offending or
/// missing key. Required keys: epsilon, u, D, mu, dt, sigma, rounds,
/// transient. Defaulted keys: b, hbar_s, s0, seed, i0, r_init.
dynamics::GameParams game_params_from(const KeyStore& store);

/// Build AnalysisSettings from a KeyStore (all keys optional).
AnalysisSettings analysis_settings_from(const KeyStore& store);

/// Comma-separated integer list, e.g. "32,64,128".
std::vector<int> parse_int_list(const std::string& text, const std::string& key);

} // namespace qvol::cli

#endif
