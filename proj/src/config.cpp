#include "qvol/config.hpp"

#include "qvol/errors.hpp"

#include <charconv>
#include <fstream>

namespace qvol::cli {

namespace {

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw input_error("key '" + key + "' has invalid numeric value '" + text + "'");
    }
    return value;
}

} // namespace

void KeyStore::set_default(const std::string& key, const std::string& value) {
    defaults_[key] = value;
}
void KeyStore::set_config(const std::string& key, const std::string& value) {
    config_[key] = value;
}
void KeyStore::set_flag(const std::string& key, const std::string& value) {
    flags_[key] = value;
}

bool KeyStore::has(const std::string& key) const {
    return flags_.count(key) || config_.count(key) || defaults_.count(key);
}

std::string KeyStore::get(const std::string& key) const {
    if (auto it = flags_.find(key); it != flags_.end()) return it->second;
    if (auto it = config_.find(key); it != config_.end()) return it->second;
    if (auto it = defaults_.find(key); it != defaults_.end()) return it->second;
    throw input_error("missing required key '" + key + "'");
}

double KeyStore::get_double(const std::string& key) const {
    return parse_number<double>(key, get(key));
}
std::int64_t KeyStore::get_int(const std::string& key) const {
    return parse_number<std::int64_t>(key, get(key));
}
std::uint64_t KeyStore::get_uint(const std::string& key) const {
    return parse_number<std::uint64_t>(key, get(key));
}

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw input_error("cannot open config file '" + path.string() + "'");
    }
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw input_error("config line " + std::to_string(lineno) +
                              " is not of the form key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw input_error("config line " + std::to_string(lineno) + " has an empty key");
        }
        out[key] = value;
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& key) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = trim(text.substr(start, comma - start));
        if (!item.empty()) {
            out.push_back(static_cast<int>(parse_number<std::int64_t>(key, item)));
        }
        start = comma + 1;
    }
    if (out.empty()) {
        throw input_error("key '" + key + "' has no entries");
    }
    return out;
}

dynamics::GameParams game_params_from(const KeyStore& store) {
    KeyStore keys = store;
    keys.set_default("b", "1");
    keys.set_default("hbar_s", "1");
    keys.set_default("s0", "1");
    keys.set_default("seed", "42");
    keys.set_default("i0", "random");
    keys.set_default("r_init", "0");

    dynamics::GameParams p;
    p.epsilon = keys.get_double("epsilon");
    p.u = keys.get_double("u");
    p.D = keys.get_double("D");
    p.mu = keys.get_double("mu");
    p.dt = keys.get_double("dt");
    p.sigma = keys.get_double("sigma");
    p.b = keys.get_double("b");
    p.hbar_s = keys.get_double("hbar_s");
    p.s0 = keys.get_double("s0");
    p.seed = keys.get_uint("seed");
    p.rounds = keys.get_int("rounds");
    p.transient = keys.get_int("transient");
    if (const std::string i0 = keys.get("i0"); i0 != "random") {
        p.i0 = parse_number<double>("i0", i0);
    }
    p.r_init = keys.get_double("r_init");
    p.validate();
    return p;
}

AnalysisSettings analysis_settings_from(const KeyStore& store) {
    AnalysisSettings s;
    if (store.has("resolutions")) {
        s.resolutions = parse_int_list(store.get("resolutions"), "resolutions");
    }
    if (store.has("bandwidth")) s.bandwidth = store.get_double("bandwidth");
    if (store.has("alpha_points")) {
        const auto points = store.get_int("alpha_points");
        if (points < 2) throw input_error("key 'alpha_points' must be >= 2");
        s.alpha_points = static_cast<std::size_t>(points);
    }
    if (store.has("raw_scale")) {
        const std::string raw = store.get("raw_scale");
        if (raw == "1" || raw == "true") {
            s.raw_scale = true;
        } else if (raw == "0" || raw == "false") {
            s.raw_scale = false;
        } else {
            throw input_error("key 'raw_scale' must be true or false, got '" + raw + "'");
        }
    }
    if (store.has("bins")) s.bins = static_cast<int>(store.get_int("bins"));
    if (store.has("max_lag")) s.max_lag = static_cast<int>(store.get_int("max_lag"));
    return s;
}

} // namespace qvol::cli
