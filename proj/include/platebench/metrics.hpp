#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <utility>
#include <vector>

#include "platebench/common.hpp"
#include "platebench/response.hpp"

namespace platebench {

constexpr double kDefaultProminence = 0.5;
inline Interval default_band() { return {1.0, 250.0}; }

struct PeakSet {
    std::vector<int> bins;           // indices into the originating response
    std::vector<double> freqs;       // Hz
    std::vector<double> heights;
    std::vector<double> prominences;

    std::size_t size() const { return bins.size(); }
    bool empty() const { return bins.empty(); }
};

// Local maxima (strictly greater than both neighbours) kept when their
// prominence reaches the threshold. The prominence of a peak is its height
// above the higher of its two bases; each base is the minimum between the
// peak and the nearest sample exceeding the peak on that side (or the signal
// end).
inline PeakSet find_peaks(const std::vector<double>& values, const std::vector<double>& freqs,
                          double prominence_threshold = kDefaultProminence) {
    if (values.size() != freqs.size()) throw DataError("find_peaks: length mismatch");
    PeakSet peaks;
    const int n = static_cast<int>(values.size());
    for (int i = 1; i + 1 < n; ++i) {
        if (!(values[i] > values[i - 1] && values[i] > values[i + 1])) continue;

        double left_base = values[i];
        for (int j = i - 1; j >= 0 && values[j] <= values[i]; --j)
            left_base = std::min(left_base, values[j]);
        double right_base = values[i];
        for (int j = i + 1; j < n && values[j] <= values[i]; ++j)
            right_base = std::min(right_base, values[j]);

        const double prominence = values[i] - std::max(left_base, right_base);
        if (prominence >= prominence_threshold) {
            peaks.bins.push_back(i);
            peaks.freqs.push_back(freqs[i]);
            peaks.heights.push_back(values[i]);
            peaks.prominences.push_back(prominence);
        }
    }
    return peaks;
}

namespace detail {

// Indices of the response bins inside the band (inclusive bounds).
inline std::pair<std::size_t, std::size_t> band_range(const FrequencyResponse& r, Interval band) {
    std::size_t first = r.size(), last = 0;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r.freqs[i] >= band.lo && r.freqs[i] <= band.hi) {
            if (first == r.size()) first = i;
            last = i;
        }
    if (first == r.size()) throw DataError("band contains no frequency bins");
    return {first, last};
}

}  // namespace detail

// Peak detection restricted to the band, so bins outside it can never
// influence the result.
inline PeakSet banded_peaks(const FrequencyResponse& normalized, Interval band,
                            double prominence_threshold = kDefaultProminence) {
    const auto [first, last] = detail::band_range(normalized, band);
    std::vector<double> vals(normalized.values_db.begin() + static_cast<std::ptrdiff_t>(first),
                             normalized.values_db.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    std::vector<double> freqs(normalized.freqs.begin() + static_cast<std::ptrdiff_t>(first),
                              normalized.freqs.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    PeakSet peaks = find_peaks(vals, freqs, prominence_threshold);
    for (int& b : peaks.bins) b += static_cast<int>(first);
    return peaks;
}

// Mean squared deviation over the band bins of two (normalized) responses.
inline double mse(const FrequencyResponse& pred, const FrequencyResponse& ref, Interval band) {
    if (pred.size() != ref.size()) throw DataError("mse: length mismatch");
    const auto [first, last] = detail::band_range(ref, band);
    double sum = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        const double d = pred.values_db[i] - ref.values_db[i];
        sum += d * d;
    }
    return sum / static_cast<double>(last - first + 1);
}

// 1-D earth-mover distance between the band-restricted responses, after
// mapping dB to linear amplitudes and normalizing each to unit mass. On the
// line W1 reduces to the CDF-difference integral.
inline double emd(const FrequencyResponse& pred, const FrequencyResponse& ref, Interval band) {
    if (pred.size() != ref.size()) throw DataError("emd: length mismatch");
    const auto [first, last] = detail::band_range(ref, band);

    std::vector<double> p, q;
    p.reserve(last - first + 1);
    q.reserve(last - first + 1);
    double sum_p = 0.0, sum_q = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        p.push_back(std::pow(10.0, pred.values_db[i] / 10.0));
        q.push_back(std::pow(10.0, ref.values_db[i] / 10.0));
        sum_p += p.back();
        sum_q += q.back();
    }
    if (!(sum_p > 0.0) || !(sum_q > 0.0)) throw DataError("emd: zero total mass");

    double cdf_p = 0.0, cdf_q = 0.0, dist = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        cdf_p += p[i] / sum_p;
        cdf_q += q[i] / sum_q;
        dist += std::abs(cdf_p - cdf_q) * (ref.freqs[first + i + 1] - ref.freqs[first + i]);
    }
    return dist;
}

namespace detail {

// Minimum-cost assignment of all rows to distinct columns (rows ≤ columns)
// by the shortest-augmenting-path method with dual potentials; O(m²n).
inline std::vector<int> assign_min_cost(const std::vector<std::vector<double>>& cost) {
    const int m = static_cast<int>(cost.size());
    const int n = m > 0 ? static_cast<int>(cost[0].size()) : 0;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(m) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> match(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= m; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = match[static_cast<std::size_t>(j0)];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost[static_cast<std::size_t>(i0) - 1][static_cast<std::size_t>(j) - 1] -
                                   u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(static_cast<std::size_t>(m), -1);
    for (int j = 1; j <= n; ++j)
        if (match[static_cast<std::size_t>(j)] > 0)
            row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)]) - 1] = j - 1;
    return row_to_col;
}

}  // namespace detail

struct PeakMatch {
    std::vector<std::pair<int, int>> pairs;  // (index into ref set, index into pred set)
    double e_f = 0.0;                        // mean matched |Δf|, Hz
};

// Optimal pairing of min(|K|, |K̂|) peaks minimizing total frequency
// distance. With one or both sets empty there are no pairs and e_f = 0; the
// count mismatch is peak_ratio_error's business.
inline PeakMatch match_peaks(const PeakSet& ref, const PeakSet& pred) {
    PeakMatch match;
    if (ref.empty() || pred.empty()) return match;

    const bool ref_rows = ref.size() <= pred.size();
    const auto& rows = ref_rows ? ref : pred;
    const auto& cols = ref_rows ? pred : ref;
    std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            cost[i][j] = std::abs(rows.freqs[i] - cols.freqs[j]);

    const std::vector<int> row_to_col = detail::assign_min_cost(cost);
    double total = 0.0;
    for (std::size_t i = 0; i < row_to_col.size(); ++i) {
        const int j = row_to_col[i];
        total += cost[i][static_cast<std::size_t>(j)];
        if (ref_rows)
            match.pairs.emplace_back(static_cast<int>(i), j);
        else
            match.pairs.emplace_back(j, static_cast<int>(i));
    }
    std::sort(match.pairs.begin(), match.pairs.end());
    match.e_f = total / static_cast<double>(match.pairs.size());
    return match;
}

// 1 − min(|K̂|/|K|, |K|/|K̂|); both empty → 0 (perfect), one empty → 1.
inline double peak_ratio_error(const PeakSet& ref, const PeakSet& pred) {
    if (ref.empty() && pred.empty()) return 0.0;
    if (ref.empty() || pred.empty()) return 1.0;
    const double a = static_cast<double>(ref.size());
    const double b = static_cast<double>(pred.size());
    return 1.0 - std::min(a / b, b / a);
}

struct SampleMetrics {
    double e_mse = 0.0;
    double e_emd = 0.0;   // Hz
    double e_peaks = 0.0;
    double e_f = 0.0;     // Hz
    int peaks_ref = 0;
    int peaks_pred = 0;
};

struct MetricsReport {
    Interval band{1.0, 250.0};
    double prominence_threshold = kDefaultProminence;
    std::vector<SampleMetrics> samples;
    double mean_mse = 0.0;
    double mean_emd = 0.0;
    double mean_peaks = 0.0;
    double mean_f = 0.0;
};

// Full metric suite over aligned prediction/reference corpora. MSE and peak
// detection run on normalized responses; EMD runs on the raw dB responses
// (its unit-mass normalization makes the affine response normalization
// redundant there).
inline MetricsReport evaluate(const std::vector<FrequencyResponse>& pred,
                              const std::vector<FrequencyResponse>& ref,
                              const NormalizationStats& stats, Interval band = default_band(),
                              double prominence_threshold = kDefaultProminence) {
    if (pred.size() != ref.size()) throw DataError("evaluate: sample count mismatch");
    if (pred.empty()) throw DataError("evaluate: no samples");

    MetricsReport report;
    report.band = band;
    report.prominence_threshold = prominence_threshold;
    report.samples.reserve(pred.size());
    for (std::size_t s = 0; s < pred.size(); ++s) {
        const FrequencyResponse np = normalize(pred[s], stats);
        const FrequencyResponse nr = normalize(ref[s], stats);
        SampleMetrics m;
        m.e_mse = mse(np, nr, band);
        m.e_emd = emd(pred[s], ref[s], band);
        const PeakSet peaks_ref = banded_peaks(nr, band, prominence_threshold);
        const PeakSet peaks_pred = banded_peaks(np, band, prominence_threshold);
        m.peaks_ref = static_cast<int>(peaks_ref.size());
        m.peaks_pred = static_cast<int>(peaks_pred.size());
        m.e_peaks = peak_ratio_error(peaks_ref, peaks_pred);
        m.e_f = match_peaks(peaks_ref, peaks_pred).e_f;
        report.samples.push_back(m);

        report.mean_mse += m.e_mse;
        report.mean_emd += m.e_emd;
        report.mean_peaks += m.e_peaks;
        report.mean_f += m.e_f;
    }
    const double n = static_cast<double>(report.samples.size());
    report.mean_mse /= n;
    report.mean_emd /= n;
    report.mean_peaks /= n;
    report.mean_f /= n;
    return report;
}

inline void write_report_text(const MetricsReport& r, std::ostream& out) {
    out.precision(9);
    out << "platebench metrics report\n"
        << "note: MSE is the mean over band bins, not the sum\n"
        << "band_hz " << r.band.lo << " " << r.band.hi << "\n"
        << "prominence_threshold " << r.prominence_threshold << "\n"
        << "samples " << r.samples.size() << "\n"
        << "mean_mse " << r.mean_mse << "\n"
        << "mean_emd_hz " << r.mean_emd << "\n"
        << "mean_peak_ratio_error " << r.mean_peaks << "\n"
        << "mean_peak_freq_error_hz " << r.mean_f << "\n"
        << "sample e_mse e_emd_hz e_peaks e_f_hz peaks_ref peaks_pred\n";
    for (std::size_t s = 0; s < r.samples.size(); ++s) {
        const auto& m = r.samples[s];
        out << s << " " << m.e_mse << " " << m.e_emd << " " << m.e_peaks << " " << m.e_f << " "
            << m.peaks_ref << " " << m.peaks_pred << "\n";
    }
}

inline void write_report_csv(const MetricsReport& r, std::ostream& out) {
    out.precision(9);
    out << "sample,e_mse,e_emd_hz,e_peaks,e_f_hz,peaks_ref,peaks_pred\n";
    for (std::size_t s = 0; s < r.samples.size(); ++s) {
        const auto& m = r.samples[s];
        out << s << "," << m.e_mse << "," << m.e_emd << "," << m.e_peaks << "," << m.e_f << ","
            << m.peaks_ref << "," << m.peaks_pred << "\n";
    }
}

}  // namespace platebench
