#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "platebench/common.hpp"
#include "platebench/fem.hpp"

namespace platebench {

// Squared normal velocity |v_z|² = ω²|u_z|² at every grid node.
struct VelocityField {
    double frequency = 0.0;
    GridDims grid;
    std::vector<double> values;  // row-major (ny, nx), (m/s)²

    double mean() const {
        double sum = 0.0;
        for (double v : values) sum += v;
        return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
    }
};

inline VelocityField velocity_field(const HarmonicSolution& sol, const PlateMesh& mesh) {
    if (sol.displacement.size() != mesh.n_dofs())
        throw DataError("velocity_field: solution does not match mesh");
    VelocityField vf;
    vf.frequency = sol.frequency;
    vf.grid = mesh.grid;
    const double omega = 2.0 * kPi * sol.frequency;
    vf.values.resize(static_cast<std::size_t>(mesh.n_nodes()));
    for (int n = 0; n < mesh.n_nodes(); ++n)
        vf.values[static_cast<std::size_t>(n)] =
            omega * omega * std::norm(sol.displacement[mesh.dof(n, 2)]);
    return vf;
}

// Scalar frequency response: 10·log10(r · area-mean of |v_z|²) per frequency,
// with reference value r = 1 s²/m². The uniform node mean stands in for the
// area integral on the structured grid.
struct FrequencyResponse {
    std::vector<double> freqs;      // Hz, strictly increasing
    std::vector<double> values_db;

    std::size_t size() const { return freqs.size(); }
};

constexpr double kResponseReference = 1.0;  // s²/m²

inline FrequencyResponse frequency_response(const std::vector<VelocityField>& fields) {
    FrequencyResponse fr;
    fr.freqs.reserve(fields.size());
    fr.values_db.reserve(fields.size());
    for (const auto& vf : fields) {
        const double mean = vf.mean();
        if (!(mean > 0.0))
            throw DataError("frequency_response: zero velocity field at f = " +
                            std::to_string(vf.frequency) + " Hz");
        fr.freqs.push_back(vf.frequency);
        fr.values_db.push_back(10.0 * std::log10(kResponseReference * mean));
    }
    return fr;
}

// Benchmark normalization: per-frequency mean over samples, one overall
// standard deviation. Field statistics use log10(|v_z|² + ε).
struct NormalizationStats {
    std::vector<double> response_mean;  // per frequency, dB
    double response_std = 0.0;
    std::vector<double> field_mean;     // per frequency, log10 units
    double field_std = 0.0;

    bool has_field_stats() const { return field_std > 0.0; }
};

constexpr double kFieldLogEpsilon = 1e-30;

inline NormalizationStats compute_norm_stats(const std::vector<FrequencyResponse>& responses) {
    if (responses.size() < 2)
        throw ConfigError("compute_norm_stats: need at least 2 samples");
    const std::size_t bins = responses.front().size();
    for (const auto& r : responses)
        if (r.size() != bins) throw DataError("compute_norm_stats: response length mismatch");

    NormalizationStats stats;
    stats.response_mean.assign(bins, 0.0);
    for (const auto& r : responses)
        for (std::size_t f = 0; f < bins; ++f) stats.response_mean[f] += r.values_db[f];
    for (double& m : stats.response_mean) m /= static_cast<double>(responses.size());

    double sq = 0.0;
    for (const auto& r : responses)
        for (std::size_t f = 0; f < bins; ++f) {
            const double d = r.values_db[f] - stats.response_mean[f];
            sq += d * d;
        }
    stats.response_std = std::sqrt(sq / (static_cast<double>(responses.size()) * bins));
    if (!(stats.response_std > 0.0))
        throw DataError("compute_norm_stats: zero variance across samples");
    return stats;
}

// Streaming accumulator for the field half of NormalizationStats, so corpus
// generation never holds all fields in memory at once.
class FieldStatsAccumulator {
public:
    void add_sample(const std::vector<VelocityField>& fields) {
        prepare(fields.size());
        for (std::size_t f = 0; f < fields.size(); ++f)
            add_bin(f, fields[f].values.data(), fields[f].values.size());
        ++samples_;
    }

    // Same statistics from one flat (n_freq × per_freq) array.
    template <typename Scalar>
    void add_sample_flat(const Scalar* values, std::size_t n_freq, std::size_t per_freq) {
        prepare(n_freq);
        for (std::size_t f = 0; f < n_freq; ++f) add_bin(f, values + f * per_freq, per_freq);
        ++samples_;
    }

    int samples() const { return samples_; }

    // Writes field_mean / field_std into stats.
    void finalize(NormalizationStats& stats) const {
        if (samples_ < 2) throw ConfigError("field stats: need at least 2 samples");
        stats.field_mean.resize(sum_.size());
        double sq = 0.0;
        long long total = 0;
        for (std::size_t f = 0; f < sum_.size(); ++f) {
            stats.field_mean[f] = sum_[f] / static_cast<double>(counts_[f]);
            sq += sumsq_[f] - sum_[f] * sum_[f] / static_cast<double>(counts_[f]);
            total += counts_[f];
        }
        stats.field_std = std::sqrt(std::max(sq, 0.0) / static_cast<double>(total));
        if (!(stats.field_std > 0.0)) throw DataError("field stats: zero variance");
    }

private:
    void prepare(std::size_t n_freq) {
        if (sum_.empty()) {
            sum_.assign(n_freq, 0.0);
            sumsq_.assign(n_freq, 0.0);
            counts_.assign(n_freq, 0);
        }
        if (n_freq != sum_.size()) throw DataError("field stats: frequency count mismatch");
    }

    template <typename Scalar>
    void add_bin(std::size_t f, const Scalar* values, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = std::log10(static_cast<double>(values[i]) + kFieldLogEpsilon);
            sum_[f] += x;
            sumsq_[f] += x * x;
        }
        counts_[f] += static_cast<long long>(n);
    }

    std::vector<double> sum_, sumsq_;
    std::vector<long long> counts_;
    int samples_ = 0;
};

inline FrequencyResponse normalize(const FrequencyResponse& r, const NormalizationStats& stats) {
    if (r.size() != stats.response_mean.size())
        throw DataError("normalize: response length does not match stats");
    FrequencyResponse out;
    out.freqs = r.freqs;
    out.values_db.resize(r.size());
    for (std::size_t f = 0; f < r.size(); ++f)
        out.values_db[f] = (r.values_db[f] - stats.response_mean[f]) / stats.response_std;
    return out;
}

inline FrequencyResponse denormalize(const FrequencyResponse& r, const NormalizationStats& stats) {
    if (r.size() != stats.response_mean.size())
        throw DataError("denormalize: response length does not match stats");
    FrequencyResponse out;
    out.freqs = r.freqs;
    out.values_db.resize(r.size());
    for (std::size_t f = 0; f < r.size(); ++f)
        out.values_db[f] = r.values_db[f] * stats.response_std + stats.response_mean[f];
    return out;
}

// Area-averaged pooling of a row-major grid onto a coarser grid. Each target
// pixel averages the source pixels it overlaps, weighted by overlap, which
// preserves the overall mean exactly up to round-off.
inline std::vector<double> pool_grid(const std::vector<double>& values, GridDims src,
                                     GridDims target) {
    if (target.ny < 1 || target.nx < 1 || target.ny > src.ny || target.nx > src.nx)
        throw ConfigError("pool_grid: invalid target dimensions");
    if (values.size() != static_cast<std::size_t>(src.ny) * src.nx)
        throw DataError("pool_grid: value count does not match source dims");

    auto overlaps = [](int n_src, int n_tgt) {
        // For each target cell: list of (source index, weight); weights sum
        // to n_src/n_tgt.
        std::vector<std::vector<std::pair<int, double>>> out(static_cast<std::size_t>(n_tgt));
        const double ratio = static_cast<double>(n_src) / n_tgt;
        for (int t = 0; t < n_tgt; ++t) {
            const double lo = t * ratio, hi = (t + 1) * ratio;
            for (int s = static_cast<int>(lo); s < n_src && s < hi; ++s) {
                const double w = std::min(hi, static_cast<double>(s + 1)) -
                                 std::max(lo, static_cast<double>(s));
                if (w > 0.0) out[static_cast<std::size_t>(t)].emplace_back(s, w);
            }
        }
        return out;
    };
    const auto rows = overlaps(src.ny, target.ny);
    const auto cols = overlaps(src.nx, target.nx);

    std::vector<double> out(static_cast<std::size_t>(target.ny) * target.nx, 0.0);
    for (int ti = 0; ti < target.ny; ++ti)
        for (int tj = 0; tj < target.nx; ++tj) {
            double acc = 0.0, wsum = 0.0;
            for (const auto& [si, wi] : rows[static_cast<std::size_t>(ti)])
                for (const auto& [sj, wj] : cols[static_cast<std::size_t>(tj)]) {
                    acc += wi * wj * values[static_cast<std::size_t>(si) * src.nx + sj];
                    wsum += wi * wj;
                }
            out[static_cast<std::size_t>(ti) * target.nx + tj] = acc / wsum;
        }
    return out;
}

inline VelocityField downsample_field(const VelocityField& field, GridDims target) {
    VelocityField out;
    out.frequency = field.frequency;
    out.grid = target;
    out.values = pool_grid(field.values, field.grid, target);
    return out;
}

}  // namespace platebench
