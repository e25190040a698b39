#ifndef QVOL_ANALYSIS_HPP
#define QVOL_ANALYSIS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace qvol::analysis {

struct SpectrumPoint {
    int resolution; ///< box size in samples
    double alpha;   ///< coarse Holder exponent
    double f;       ///< large-deviation spectrum estimate
};

struct ResolutionInfo {
    int box_size = 0;
    std::size_t valid_boxes = 0;
    std::size_t dropped_boxes = 0; ///< zero-oscillation boxes excluded
    double delta = 0.0;            ///< box scale: box_size / signal length
    double bandwidth = 0.0;        ///< kernel bandwidth actually used (0 if degenerate)
};

/// Estimated large-deviation spectrum: one curve per kept resolution plus
/// the peak of the finest-resolution curve. Resolutions are ordered by
/// increasing box size; the finest (smallest box) comes first.
struct Spectrum {
    std::vector<SpectrumPoint> points;        ///< resolution-major, alpha ascending
    std::vector<ResolutionInfo> resolutions;  ///< strictly increasing box sizes
    double peak_alpha = 0.0;
    double peak_f = 0.0;
    int peak_resolution = 0;
};

struct PowerLawFit {
    double slope = 0.0;     ///< d(log density) / d(log value)
    double intercept = 0.0; ///< log-density offset (natural logs)
    double r_squared = 0.0;
    int bin_count = 0; ///< nonempty bins used by the fit
};

struct LogHistogram {
    std::vector<double> edges;        ///< bin_count + 1 log-spaced edges
    std::vector<double> centers;      ///< geometric bin centers
    std::vector<std::size_t> counts;
    std::vector<double> densities;    ///< count / (n * linear bin width)
};

struct SummaryStats {
    double mean = 0.0;
    double std = 0.0;
    std::optional<double> skewness;        ///< unset when variance is zero
    std::optional<double> excess_kurtosis; ///< unset when variance is zero
    std::optional<std::vector<double>> acf_abs; ///< lags 1..max_lag; unset when degenerate
};

/// Cumulative log-price path: ln(s0) followed by partial sums of the
/// returns; length = returns.size() + 1.
std::vector<double> integrate_returns(std::span<const double> returns, double s0);

struct CoarseResult {
    std::vector<double> alphas;
    std::size_t dropped = 0; ///< zero-oscillation boxes
    double delta = 0.0;      ///< box_size / signal length
};

/// Coarse Holder exponents over non-overlapping boxes of box_size samples
/// (each box includes its right endpoint): alpha_j = log(osc_j)/log(delta).
/// A constant signal yields an empty result with every box counted dropped.
CoarseResult coarse_exponents(std::span<const double> signal, int box_size);

struct SpectrumOptions {
    std::vector<int> resolutions = {32, 64, 128, 256};
    std::size_t min_valid_boxes = 50; ///< resolutions with fewer boxes are skipped
    double bandwidth = 0.0;           ///< 0 = normal-reference rule per resolution
    std::size_t alpha_points = 256;   ///< auto grid size
    std::vector<double> alpha_grid;   ///< explicit grid; empty = auto
    bool normalize = true;            ///< min-max rescale the signal to [0,1] first
};

/// Kernel large-deviation spectrum across the requested resolutions:
/// f(alpha) = 1 + log p(alpha) / log(1/delta) per resolution, where p is a
/// Gaussian kernel density over that resolution's coarse exponents. The
/// signal is min-max normalized first (unless disabled), so the result is
/// scale-invariant; raw coarse_exponents is not.
Spectrum large_deviation_spectrum(std::span<const double> signal,
                                  const SpectrumOptions& opts = {});

/// Peak of the finest-resolution curve; ties break toward smaller alpha.
std::pair<double, double> spectrum_peak(const Spectrum& s);

/// Logarithmically spaced histogram over [min, max] of strictly positive
/// samples. Degenerate spans are widened by 1e-9 relative.
LogHistogram log_histogram(std::span<const double> samples, int bin_count);

/// Least-squares line through (log center, log density) over nonempty bins.
/// Requires at least 8 nonempty bins.
PowerLawFit fit_power_law(const LogHistogram& hist);

/// Running sum of intrinsic-time increments; nondecreasing for tau >= 0.
std::vector<double> devils_staircase(std::span<const double> tau_series);

/// Moment statistics plus the autocorrelation of absolute deviations at
/// lags 1..max_lag.
SummaryStats summary_stats(std::span<const double> series, int max_lag);

} // namespace qvol::analysis

#endif
