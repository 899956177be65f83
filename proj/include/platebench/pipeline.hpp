#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "platebench/dataset.hpp"
#include "platebench/fem.hpp"
#include "platebench/mesh.hpp"
#include "platebench/metrics.hpp"
#include "platebench/parallel.hpp"
#include "platebench/response.hpp"
#include "platebench/sampling.hpp"

namespace platebench {

// "start:stop:step" in Hz, e.g. the default "1:300:1" → 1, 2, ..., 300.
inline std::vector<double> parse_freq_spec(const std::string& spec) {
    double start = 0.0, stop = 0.0, step = 0.0;
    std::size_t a = spec.find(':');
    std::size_t b = a == std::string::npos ? std::string::npos : spec.find(':', a + 1);
    try {
        if (a == std::string::npos || b == std::string::npos) throw std::invalid_argument(spec);
        std::size_t used = 0;
        start = std::stod(spec.substr(0, a), &used);
        stop = std::stod(spec.substr(a + 1, b - a - 1));
        step = std::stod(spec.substr(b + 1));
    } catch (const std::exception&) {
        throw ConfigError("bad frequency spec '" + spec + "', expected start:stop:step");
    }
    if (!(start > 0.0) || !(step > 0.0) || stop < start)
        throw ConfigError("bad frequency spec '" + spec + "': need 0 < start <= stop, step > 0");
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> freqs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) freqs[static_cast<std::size_t>(i)] = start + i * step;
    return freqs;
}

inline const char* kDefaultFreqSpec = "1:300:1";

struct SweepConfig {
    std::vector<double> freqs = parse_freq_spec(kDefaultFreqSpec);
    std::string freq_spec = kDefaultFreqSpec;
    int workers = 1;
    double residual_tol = 1e-8;
    bool store_fields = false;
    GridDims stored_field_dims{40, 60};
};

// End-to-end simulation of one sample: sample pattern and parameters, build
// the beaded mesh, sweep all frequencies, reduce to the scalar response (and
// optionally the downsampled velocity fields).
inline SampleRecord simulate_sample(const DatasetSetting& setting, std::uint64_t seed, int id,
                                    const SweepConfig& cfg) {
    SampleRecord rec;
    rec.id = id;
    rec.seed = seed;
    rec.setting_name = setting.name;
    rec.params = sample_plate_params(seed, setting);

    const BeadingPattern pattern = sample_pattern(seed, setting);
    rec.field = rasterize_pattern(pattern, rec.params.length, rec.params.width, setting.grid,
                                  setting.edge_mode);
    const PlateMesh mesh = build_mesh(rec.params, rec.field, setting.grid);
    const SystemMatrices sys = assemble_system(mesh, rec.params);
    const LoadVector load = point_load(mesh, rec.params);
    const std::vector<HarmonicSolution> sols =
        frequency_sweep(sys, load, cfg.freqs, cfg.workers, cfg.residual_tol);

    std::vector<VelocityField> fields;
    fields.reserve(sols.size());
    for (const auto& sol : sols) fields.push_back(velocity_field(sol, mesh));
    rec.response = frequency_response(fields);

    if (cfg.store_fields) {
        // Coarser-than-target grids are stored at native resolution.
        const GridDims target{std::min(cfg.stored_field_dims.ny, setting.grid.ny),
                              std::min(cfg.stored_field_dims.nx, setting.grid.nx)};
        rec.vfield_dims = target;
        rec.vfields.reserve(fields.size() * static_cast<std::size_t>(target.cell_count()));
        for (const auto& vf : fields) {
            const std::vector<double> pooled = pool_grid(vf.values, vf.grid, target);
            for (double v : pooled) rec.vfields.push_back(static_cast<float>(v));
        }
    }
    return rec;
}

struct GenerateOptions {
    DatasetSetting setting;
    int n_samples = 0;
    std::uint64_t base_seed = 1;
    double test_fraction = 1.0 / 6.0;  // default split: 5 train samples per test sample
    SweepConfig sweep;
    json run_config;  // echoed into the manifest
    std::function<void(int, const std::string&)> progress;
};

// Generates the corpus: per-sample seeds are base_seed + id, failed solves
// are skipped with the reason recorded, normalization statistics come from
// the train split only. With more samples than workers the parallelism goes
// over samples; otherwise the frequency sweep parallelizes internally.
inline std::pair<std::vector<SampleRecord>, DatasetManifest> generate_corpus(
    const GenerateOptions& opt) {
    if (opt.n_samples < 2) throw ConfigError("generate_corpus: need at least 2 samples");
    DatasetSetting setting = opt.setting;
    setting.validate();
    if (setting.grid.ny < 3 || setting.grid.nx < 3)
        throw ConfigError("generate_corpus: setting has no resolved grid");

    const int n = opt.n_samples;
    const int n_test = static_cast<int>(std::floor(n * opt.test_fraction));
    const int n_train = n - n_test;

    int outer = opt.sweep.workers > n ? n : opt.sweep.workers;
    if (outer < 1) outer = 1;
    SweepConfig inner_cfg = opt.sweep;
    inner_cfg.workers = opt.sweep.workers / outer > 0 ? opt.sweep.workers / outer : 1;

    std::vector<SampleRecord> slots(static_cast<std::size_t>(n));
    std::vector<std::string> failures(static_cast<std::size_t>(n));
    std::vector<char> ok(static_cast<std::size_t>(n), 0);
    parallel_for(n, outer, [&](int id) {
        const std::uint64_t seed = opt.base_seed + static_cast<std::uint64_t>(id);
        try {
            slots[static_cast<std::size_t>(id)] = simulate_sample(setting, seed, id, inner_cfg);
            ok[static_cast<std::size_t>(id)] = 1;
            if (opt.progress) opt.progress(id, "done");
        } catch (const Error& e) {
            failures[static_cast<std::size_t>(id)] = e.what();
            if (opt.progress) opt.progress(id, std::string("skipped: ") + e.what());
        }
    });

    DatasetManifest manifest;
    manifest.setting = setting;
    manifest.creation_seed = opt.base_seed;
    manifest.residual_tol = opt.sweep.residual_tol;
    manifest.freq_spec = opt.sweep.freq_spec;
    manifest.run_config = opt.run_config.is_null() ? json::object() : opt.run_config;

    std::vector<SampleRecord> records;
    std::vector<FrequencyResponse> train_responses;
    FieldStatsAccumulator field_acc;
    for (int id = 0; id < n; ++id) {
        DatasetManifest::SampleInfo info;
        info.id = id;
        info.seed = opt.base_seed + static_cast<std::uint64_t>(id);
        info.test = id >= n_train;
        if (!ok[static_cast<std::size_t>(id)]) {
            info.skipped = true;
            info.skip_reason = failures[static_cast<std::size_t>(id)];
        } else {
            SampleRecord& rec = slots[static_cast<std::size_t>(id)];
            info.params = rec.params;
            if (!info.test) {
                train_responses.push_back(rec.response);
                if (!rec.vfields.empty())
                    field_acc.add_sample_flat(rec.vfields.data(), rec.response.size(),
                                              static_cast<std::size_t>(rec.vfield_dims.cell_count()));
            }
        }
        manifest.samples.push_back(std::move(info));
    }
    if (train_responses.size() < 2)
        throw DataError("generate_corpus: fewer than 2 train samples succeeded");
    manifest.stats = compute_norm_stats(train_responses);
    if (field_acc.samples() >= 2) field_acc.finalize(manifest.stats);

    for (int id = 0; id < n; ++id) {
        if (!ok[static_cast<std::size_t>(id)]) continue;
        SampleRecord& rec = slots[static_cast<std::size_t>(id)];
        try {
            rec.peaks = banded_peaks(normalize(rec.response, manifest.stats), default_band());
        } catch (const DataError&) {
            rec.peaks = PeakSet{};  // custom frequency range outside the band
        }
        records.push_back(std::move(rec));
    }
    return {std::move(records), std::move(manifest)};
}

}  // namespace platebench
