#include "qvol/analysis.hpp"

#include "qvol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qvol::analysis {

namespace {

constexpr double kDegenerateStd = 1e-12;

double sample_std(std::span<const double> xs) {
    const std::size_t n = xs.size();
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    double m2 = 0.0;
    for (double x : xs) m2 += (x - mean) * (x - mean);
    return std::sqrt(m2 / static_cast<double>(n));
}

double sample_mean(std::span<const double> xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    return mean / static_cast<double>(xs.size());
}

// Gaussian kernel density estimate at grid point a.
double kde(const std::vector<double>& alphas, double bandwidth, double a) {
    const double inv_h = 1.0 / bandwidth;
    double sum = 0.0;
    for (double ai : alphas) {
        const double z = (a - ai) * inv_h;
        sum += std::exp(-0.5 * z * z);
    }
    return sum * inv_h / (static_cast<double>(alphas.size()) * std::sqrt(2.0 * M_PI));
}

struct ResolutionData {
    ResolutionInfo info;
    std::vector<double> alphas;
};

} // namespace

std::vector<double> integrate_returns(std::span<const double> returns, double s0) {
    if (!(s0 > 0.0)) {
        throw domain_error("integrate_returns requires s0 > 0, got " + std::to_string(s0));
    }
    std::vector<double> path;
    path.reserve(returns.size() + 1);
    path.push_back(std::log(s0));
    for (std::size_t i = 0; i < returns.size(); ++i) {
        if (!std::isfinite(returns[i])) {
            throw input_error("non-finite return at index " + std::to_string(i));
        }
        path.push_back(path.back() + returns[i]);
    }
    return path;
}

CoarseResult coarse_exponents(std::span<const double> signal, int box_size) {
    if (box_size < 2) {
        throw domain_error("box_size must be >= 2, got " + std::to_string(box_size));
    }
    const std::size_t n = signal.size();
    if (n < 2 * static_cast<std::size_t>(box_size)) {
        throw domain_error("signal of length " + std::to_string(n) +
                           " too short for box_size " + std::to_string(box_size));
    }

    CoarseResult result;
    result.delta = static_cast<double>(box_size) / static_cast<double>(n);
    const double log_delta = std::log(result.delta);
    const std::size_t boxes = (n - 1) / static_cast<std::size_t>(box_size);
    result.alphas.reserve(boxes);

    for (std::size_t j = 0; j < boxes; ++j) {
        const std::size_t start = j * static_cast<std::size_t>(box_size);
        const std::size_t stop = start + static_cast<std::size_t>(box_size); // inclusive
        double lo = signal[start];
        double hi = signal[start];
        for (std::size_t idx = start + 1; idx <= stop; ++idx) {
            lo = std::min(lo, signal[idx]);
            hi = std::max(hi, signal[idx]);
        }
        const double osc = hi - lo;
        if (osc <= 0.0) {
            ++result.dropped;
            continue;
        }
        result.alphas.push_back(std::log(osc) / log_delta);
    }
    return result;
}

Spectrum large_deviation_spectrum(std::span<const double> signal, const SpectrumOptions& opts) {
    if (opts.resolutions.empty()) {
        throw domain_error("at least one resolution is required");
    }
    for (int b : opts.resolutions) {
        if (b < 2) {
            throw domain_error("box_size must be >= 2, got " + std::to_string(b));
        }
    }

    std::vector<int> boxes = opts.resolutions;
    std::sort(boxes.begin(), boxes.end());
    boxes.erase(std::unique(boxes.begin(), boxes.end()), boxes.end());

    // Optional min-max normalization; keeps the estimate invariant under
    // affine rescaling of the input.
    std::vector<double> scaled;
    std::span<const double> sig = signal;
    if (opts.normalize && !signal.empty()) {
        const auto [lo_it, hi_it] = std::minmax_element(signal.begin(), signal.end());
        const double lo = *lo_it;
        const double hi = *hi_it;
        if (hi > lo) {
            scaled.reserve(signal.size());
            const double inv = 1.0 / (hi - lo);
            for (double v : signal) scaled.push_back((v - lo) * inv);
            sig = scaled;
        }
    }

    // Pass 1: coarse exponents per usable resolution.
    std::vector<ResolutionData> kept;
    for (int b : boxes) {
        if (sig.size() < 2 * static_cast<std::size_t>(b)) continue;
        CoarseResult cr = coarse_exponents(sig, b);
        if (cr.alphas.size() < opts.min_valid_boxes) continue;
        ResolutionData rd;
        rd.info.box_size = b;
        rd.info.valid_boxes = cr.alphas.size();
        rd.info.dropped_boxes = cr.dropped;
        rd.info.delta = cr.delta;
        rd.alphas = std::move(cr.alphas);
        kept.push_back(std::move(rd));
    }
    if (kept.empty()) {
        throw numerical_error("no valid boxes at any requested resolution");
    }

    // Bandwidths and the shared alpha grid.
    double grid_lo = std::numeric_limits<double>::infinity();
    double grid_hi = -std::numeric_limits<double>::infinity();
    for (auto& rd : kept) {
        const double sd = sample_std(rd.alphas);
        if (sd < kDegenerateStd) {
            rd.info.bandwidth = 0.0; // degenerate: collapses to a single point
            continue;
        }
        const double h = opts.bandwidth > 0.0
                             ? opts.bandwidth
                             : 1.06 * sd * std::pow(static_cast<double>(rd.alphas.size()), -0.2);
        rd.info.bandwidth = h;
        const auto [mn, mx] = std::minmax_element(rd.alphas.begin(), rd.alphas.end());
        grid_lo = std::min(grid_lo, *mn - 3.0 * h);
        grid_hi = std::max(grid_hi, *mx + 3.0 * h);
    }

    std::vector<double> grid = opts.alpha_grid;
    if (grid.empty() && grid_lo < grid_hi) {
        const std::size_t points = std::max<std::size_t>(opts.alpha_points, 2);
        grid.reserve(points);
        const double step = (grid_hi - grid_lo) / static_cast<double>(points - 1);
        for (std::size_t g = 0; g < points; ++g) {
            grid.push_back(grid_lo + step * static_cast<double>(g));
        }
    }

    // Pass 2: spectrum curves, finest resolution first.
    Spectrum spectrum;
    for (const auto& rd : kept) {
        spectrum.resolutions.push_back(rd.info);
        const double log_inv_delta = std::log(1.0 / rd.info.delta);
        if (rd.info.bandwidth == 0.0) {
            spectrum.points.push_back({rd.info.box_size, sample_mean(rd.alphas), 1.0});
            continue;
        }
        for (double a : grid) {
            const double p = kde(rd.alphas, rd.info.bandwidth, a);
            if (p <= 0.0) continue; // underflowed far tail
            spectrum.points.push_back({rd.info.box_size, a, 1.0 + std::log(p) / log_inv_delta});
        }
    }

    const auto peak = spectrum_peak(spectrum);
    spectrum.peak_alpha = peak.first;
    spectrum.peak_f = peak.second;
    spectrum.peak_resolution = spectrum.resolutions.front().box_size;
    return spectrum;
}

std::pair<double, double> spectrum_peak(const Spectrum& s) {
    if (s.points.empty() || s.resolutions.empty()) {
        throw numerical_error("empty spectrum");
    }
    const int finest = s.resolutions.front().box_size;
    double best_alpha = 0.0;
    double best_f = -std::numeric_limits<double>::infinity();
    bool found = false;
    for (const auto& pt : s.points) {
        if (pt.resolution != finest) continue;
        // strict > keeps the smallest alpha on ties
        if (!found || pt.f > best_f) {
            best_alpha = pt.alpha;
            best_f = pt.f;
            found = true;
        }
    }
    if (!found) {
        throw numerical_error("empty spectrum");
    }
    return {best_alpha, best_f};
}

LogHistogram log_histogram(std::span<const double> samples, int bin_count) {
    if (bin_count < 8) {
        throw domain_error("bin_count must be >= 8, got " + std::to_string(bin_count));
    }
    if (samples.empty()) {
        throw input_error("no samples to bin");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i] > 0.0) || !std::isfinite(samples[i])) {
            throw input_error("non-positive sample at index " + std::to_string(i));
        }
    }

    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (lo == hi) {
        lo *= 1.0 - 1e-9;
        hi *= 1.0 + 1e-9;
    }

    LogHistogram hist;
    const std::size_t bins = static_cast<std::size_t>(bin_count);
    hist.edges.resize(bins + 1);
    const double log_lo = std::log(lo);
    const double log_ratio = std::log(hi / lo);
    for (std::size_t j = 0; j <= bins; ++j) {
        hist.edges[j] = std::exp(log_lo + log_ratio * static_cast<double>(j) /
                                              static_cast<double>(bins));
    }
    hist.edges.front() = lo;
    hist.edges.back() = hi;

    hist.counts.assign(bins, 0);
    const double inv_ratio = static_cast<double>(bins) / log_ratio;
    for (double s : samples) {
        auto j = static_cast<std::size_t>(
            std::max(0.0, std::floor(std::log(s / lo) * inv_ratio)));
        j = std::min(j, bins - 1);
        // guard against edge rounding
        while (j > 0 && s < hist.edges[j]) --j;
        while (j + 1 < bins && s >= hist.edges[j + 1]) ++j;
        ++hist.counts[j];
    }

    hist.centers.resize(bins);
    hist.densities.resize(bins);
    const double n = static_cast<double>(samples.size());
    for (std::size_t j = 0; j < bins; ++j) {
        hist.centers[j] = std::sqrt(hist.edges[j] * hist.edges[j + 1]);
        hist.densities[j] =
            static_cast<double>(hist.counts[j]) / (n * (hist.edges[j + 1] - hist.edges[j]));
    }
    return hist;
}

PowerLawFit fit_power_law(const LogHistogram& hist) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t j = 0; j < hist.counts.size(); ++j) {
        if (hist.counts[j] == 0) continue;
        xs.push_back(std::log(hist.centers[j]));
        ys.push_back(std::log(hist.densities[j]));
    }
    const std::size_t m = xs.size();
    if (m < 8) {
        throw numerical_error("power-law fit needs >= 8 nonempty bins, got " +
                              std::to_string(m));
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        sx += xs[j];
        sy += ys[j];
        sxx += xs[j] * xs[j];
        sxy += xs[j] * ys[j];
    }
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (denom == 0.0) {
        throw numerical_error("degenerate bin centers in power-law fit");
    }

    PowerLawFit fit;
    fit.bin_count = static_cast<int>(m);
    fit.slope = (static_cast<double>(m) * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / static_cast<double>(m);

    double ss_res = 0.0, ss_tot = 0.0;
    const double y_mean = sy / static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double pred = fit.intercept + fit.slope * xs[j];
        ss_res += (ys[j] - pred) * (ys[j] - pred);
        ss_tot += (ys[j] - y_mean) * (ys[j] - y_mean);
    }
    fit.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
    return fit;
}

std::vector<double> devils_staircase(std::span<const double> tau_series) {
    std::vector<double> cum;
    cum.reserve(tau_series.size());
    double total = 0.0;
    for (std::size_t i = 0; i < tau_series.size(); ++i) {
        if (!(tau_series[i] >= 0.0) || !std::isfinite(tau_series[i])) {
            throw input_error("negative or non-finite tau at index " + std::to_string(i));
        }
        total += tau_series[i];
        cum.push_back(total);
    }
    return cum;
}

SummaryStats summary_stats(std::span<const double> series, int max_lag) {
    if (max_lag < 1) {
        throw domain_error("max_lag must be >= 1, got " + std::to_string(max_lag));
    }
    if (series.size() <= static_cast<std::size_t>(max_lag)) {
        throw domain_error("series length " + std::to_string(series.size()) +
                           " must exceed max_lag " + std::to_string(max_lag));
    }

    const std::size_t n = series.size();
    SummaryStats st;
    st.mean = sample_mean(series);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : series) {
        const double d = x - st.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    st.std = std::sqrt(m2);

    const auto [mn, mx] = std::minmax_element(series.begin(), series.end());
    const bool constant = (*mn == *mx);
    if (!constant && m2 > 0.0) {
        st.skewness = m3 / (m2 * std::sqrt(m2));
        st.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }

    // Autocorrelation of absolute deviations from the mean.
    std::vector<double> abs_dev;
    abs_dev.reserve(n);
    for (double x : series) abs_dev.push_back(std::abs(x - st.mean));
    const auto [amn, amx] = std::minmax_element(abs_dev.begin(), abs_dev.end());
    if (*amn != *amx) {
        const double a_mean = sample_mean(abs_dev);
        double denom = 0.0;
        for (double a : abs_dev) denom += (a - a_mean) * (a - a_mean);
        std::vector<double> acf;
        acf.reserve(static_cast<std::size_t>(max_lag));
        for (int lag = 1; lag <= max_lag; ++lag) {
            double num = 0.0;
            for (std::size_t i = 0; i + static_cast<std::size_t>(lag) < n; ++i) {
                num += (abs_dev[i] - a_mean) * (abs_dev[i + static_cast<std::size_t>(lag)] - a_mean);
            }
            acf.push_back(num / denom);
        }
        st.acf_abs = std::move(acf);
    }
    return st;
}

} // namespace qvol::analysis
