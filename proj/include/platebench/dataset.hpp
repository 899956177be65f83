#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>
#include <zlib.h>

#include "platebench/common.hpp"
#include "platebench/geometry.hpp"
#include "platebench/metrics.hpp"
#include "platebench/response.hpp"
#include "platebench/sampling.hpp"

namespace platebench {

static_assert(std::endian::native == std::endian::little,
              "PLTB1 writes native byte order and requires a little-endian host");

using nlohmann::json;

// ---- JSON mappings for the manifest -------------------------------------

inline void to_json(json& j, const Interval& v) { j = json::array({v.lo, v.hi}); }
inline void from_json(const json& j, Interval& v) {
    v.lo = j.at(0).get<double>();
    v.hi = j.at(1).get<double>();
}
inline void to_json(json& j, const IntInterval& v) { j = json::array({v.lo, v.hi}); }
inline void from_json(const json& j, IntInterval& v) {
    v.lo = j.at(0).get<int>();
    v.hi = j.at(1).get<int>();
}
inline void to_json(json& j, const GridDims& g) { j = json::array({g.ny, g.nx}); }
inline void from_json(const json& j, GridDims& g) {
    g.ny = j.at(0).get<int>();
    g.nx = j.at(1).get<int>();
}

inline void to_json(json& j, const ParamRanges& r) {
    j = json{{"length", r.length},
             {"width", r.width},
             {"thickness", r.thickness},
             {"density", r.density},
             {"youngs_modulus", r.youngs_modulus},
             {"poisson_ratio", r.poisson_ratio},
             {"loss_factor", r.loss_factor},
             {"rot_stiffness", r.rot_stiffness},
             {"load_x", r.load_x},
             {"load_y", r.load_y}};
}
inline void from_json(const json& j, ParamRanges& r) {
    j.at("length").get_to(r.length);
    j.at("width").get_to(r.width);
    j.at("thickness").get_to(r.thickness);
    j.at("density").get_to(r.density);
    j.at("youngs_modulus").get_to(r.youngs_modulus);
    j.at("poisson_ratio").get_to(r.poisson_ratio);
    j.at("loss_factor").get_to(r.loss_factor);
    j.at("rot_stiffness").get_to(r.rot_stiffness);
    j.at("load_x").get_to(r.load_x);
    j.at("load_y").get_to(r.load_y);
}

inline void to_json(json& j, const DatasetSetting& s) {
    j = json{{"name", s.name},
             {"line_count", s.line_count},
             {"ellipse_count", s.ellipse_count},
             {"bead_width", s.bead_width},
             {"ranges", s.ranges},
             {"bead_depth", s.bead_depth},
             {"grid", s.grid},
             {"f_max", s.f_max},
             {"edge_mode", s.edge_mode == EdgeMode::Hard ? "hard" : "ramp"}};
}
inline void from_json(const json& j, DatasetSetting& s) {
    j.at("name").get_to(s.name);
    j.at("line_count").get_to(s.line_count);
    j.at("ellipse_count").get_to(s.ellipse_count);
    j.at("bead_width").get_to(s.bead_width);
    j.at("ranges").get_to(s.ranges);
    j.at("bead_depth").get_to(s.bead_depth);
    j.at("grid").get_to(s.grid);
    j.at("f_max").get_to(s.f_max);
    const std::string mode = j.at("edge_mode").get<std::string>();
    if (mode != "hard" && mode != "ramp") throw DataError("unknown edge_mode: " + mode);
    s.edge_mode = mode == "hard" ? EdgeMode::Hard : EdgeMode::Ramp;
}

inline void to_json(json& j, const PlateParams& p) {
    j = json{{"length", p.length},
             {"width", p.width},
             {"thickness", p.thickness},
             {"density", p.density},
             {"youngs_modulus", p.youngs_modulus},
             {"poisson_ratio", p.poisson_ratio},
             {"loss_factor", p.loss_factor},
             {"rot_stiffness", p.rot_stiffness},
             {"load_position", json::array({p.load_position.x, p.load_position.y})},
             {"bead_depth", p.bead_depth}};
}
inline void from_json(const json& j, PlateParams& p) {
    j.at("length").get_to(p.length);
    j.at("width").get_to(p.width);
    j.at("thickness").get_to(p.thickness);
    j.at("density").get_to(p.density);
    j.at("youngs_modulus").get_to(p.youngs_modulus);
    j.at("poisson_ratio").get_to(p.poisson_ratio);
    j.at("loss_factor").get_to(p.loss_factor);
    j.at("rot_stiffness").get_to(p.rot_stiffness);
    p.load_position.x = j.at("load_position").at(0).get<double>();
    p.load_position.y = j.at("load_position").at(1).get<double>();
    j.at("bead_depth").get_to(p.bead_depth);
}

inline void to_json(json& j, const NormalizationStats& s) {
    j = json{{"response_mean", s.response_mean},
             {"response_std", s.response_std},
             {"field_mean", s.field_mean},
             {"field_std", s.field_std}};
}
inline void from_json(const json& j, NormalizationStats& s) {
    j.at("response_mean").get_to(s.response_mean);
    j.at("response_std").get_to(s.response_std);
    j.at("field_mean").get_to(s.field_mean);
    j.at("field_std").get_to(s.field_std);
}

// ---- Records and manifest ------------------------------------------------

struct SampleRecord {
    int id = 0;
    std::uint64_t seed = 0;
    std::string setting_name;
    PlateParams params;
    BeadingField field;
    FrequencyResponse response;
    // Optional per-frequency downsampled squared-velocity fields,
    // row-major (n_freq, vfield_dims.ny, vfield_dims.nx).
    std::vector<float> vfields;
    GridDims vfield_dims{0, 0};
    PeakSet peaks;  // cache of banded peaks on the normalized response
};

struct DatasetManifest {
    struct SampleInfo {
        int id = 0;
        std::uint64_t seed = 0;
        bool test = false;
        bool skipped = false;
        std::string skip_reason;
        PlateParams params;
    };

    int format_version = 1;
    DatasetSetting setting;
    std::uint64_t creation_seed = 0;
    double residual_tol = 1e-8;
    std::string freq_spec;
    NormalizationStats stats;
    std::vector<SampleInfo> samples;
    json run_config;  // free-form echo of the generating invocation

    int count_train() const {
        int n = 0;
        for (const auto& s : samples) n += (!s.skipped && !s.test) ? 1 : 0;
        return n;
    }
    int count_test() const {
        int n = 0;
        for (const auto& s : samples) n += (!s.skipped && s.test) ? 1 : 0;
        return n;
    }
    int count_skipped() const {
        int n = 0;
        for (const auto& s : samples) n += s.skipped ? 1 : 0;
        return n;
    }
};

inline void to_json(json& j, const DatasetManifest::SampleInfo& s) {
    j = json{{"id", s.id}, {"seed", s.seed}, {"test", s.test}, {"skipped", s.skipped}};
    if (s.skipped)
        j["skip_reason"] = s.skip_reason;
    else
        j["params"] = s.params;
}
inline void from_json(const json& j, DatasetManifest::SampleInfo& s) {
    j.at("id").get_to(s.id);
    j.at("seed").get_to(s.seed);
    j.at("test").get_to(s.test);
    j.at("skipped").get_to(s.skipped);
    if (s.skipped)
        j.at("skip_reason").get_to(s.skip_reason);
    else
        j.at("params").get_to(s.params);
}

inline void to_json(json& j, const DatasetManifest& m) {
    j = json{{"format_version", m.format_version},
             {"setting", m.setting},
             {"creation_seed", m.creation_seed},
             {"residual_tol", m.residual_tol},
             {"freq_spec", m.freq_spec},
             {"stats", m.stats},
             {"samples", m.samples},
             {"run_config", m.run_config},
             {"counts",
              json{{"total", m.samples.size()},
                   {"train", m.count_train()},
                   {"test", m.count_test()},
                   {"skipped", m.count_skipped()}}}};
}
inline void from_json(const json& j, DatasetManifest& m) {
    j.at("format_version").get_to(m.format_version);
    j.at("setting").get_to(m.setting);
    j.at("creation_seed").get_to(m.creation_seed);
    j.at("residual_tol").get_to(m.residual_tol);
    j.at("freq_spec").get_to(m.freq_spec);
    j.at("stats").get_to(m.stats);
    j.at("samples").get_to(m.samples);
    m.run_config = j.value("run_config", json::object());
}

// ---- PLTB1 container -----------------------------------------------------
//
// Layout: magic "PLTB1\n" · u64 little-endian header length · UTF-8 JSON
// header (array table + manifest) · raw little-endian array payloads, each
// followed by its CRC32 (u32). Array offsets are relative to the end of the
// header, so the header never depends on its own size.

namespace pltb {

constexpr char kMagic[6] = {'P', 'L', 'T', 'B', '1', '\n'};

struct ArraySpec {
    std::string name;
    std::string dtype;  // "f32" | "f64" | "u8"
    std::vector<std::int64_t> shape;
    std::uint64_t offset = 0;  // payload-relative

    std::uint64_t elements() const {
        std::uint64_t n = 1;
        for (auto s : shape) n *= static_cast<std::uint64_t>(s);
        return n;
    }
    std::uint64_t elem_size() const {
        if (dtype == "f32") return 4;
        if (dtype == "f64") return 8;
        if (dtype == "u8") return 1;
        throw DataError("unknown dtype: " + dtype);
    }
    std::uint64_t bytes() const { return elements() * elem_size(); }
};

inline void to_json(json& j, const ArraySpec& a) {
    j = json{{"name", a.name}, {"dtype", a.dtype}, {"shape", a.shape}, {"offset", a.offset}};
}
inline void from_json(const json& j, ArraySpec& a) {
    j.at("name").get_to(a.name);
    j.at("dtype").get_to(a.dtype);
    j.at("shape").get_to(a.shape);
    j.at("offset").get_to(a.offset);
}

inline std::uint32_t crc_bytes(const void* data, std::uint64_t len) {
    const auto* p = static_cast<const Bytef*>(data);
    uLong crc = crc32(0L, Z_NULL, 0);
    while (len > 0) {
        const auto chunk = static_cast<uInt>(std::min<std::uint64_t>(len, 1u << 30));
        crc = crc32(crc, p, chunk);
        p += chunk;
        len -= chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

}  // namespace pltb

namespace detail {

inline void write_le_u64(std::ostream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), 8);
}
inline void write_le_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), 4);
}

inline void write_array_payload(std::ostream& out, const void* data, std::uint64_t bytes) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
    write_le_u32(out, pltb::crc_bytes(data, bytes));
}

}  // namespace detail

// Writes records + manifest; returns total bytes written. Per sample the
// container holds the beading field (f32), the response values (f64), the
// peak cache (f64, rows bin/freq/height/prominence), and optionally the
// downsampled velocity fields (f32). The frequency grid is stored once.
inline std::uint64_t write_dataset(const std::vector<SampleRecord>& records,
                                   const DatasetManifest& manifest, const std::string& path) {
    std::vector<pltb::ArraySpec> specs;
    std::uint64_t offset = 0;
    auto add = [&](const std::string& name, const std::string& dtype,
                   std::vector<std::int64_t> shape) {
        pltb::ArraySpec spec{name, dtype, std::move(shape), offset};
        offset += spec.bytes() + 4;  // payload + CRC32
        specs.push_back(std::move(spec));
    };

    if (!records.empty())
        add("freqs", "f64", {static_cast<std::int64_t>(records.front().response.size())});
    for (const auto& rec : records) {
        const std::string p = "s" + std::to_string(rec.id) + "/";
        add(p + "field", "f32", {rec.field.grid.ny, rec.field.grid.nx});
        add(p + "response", "f64", {static_cast<std::int64_t>(rec.response.size())});
        add(p + "peaks", "f64", {4, static_cast<std::int64_t>(rec.peaks.size())});
        if (!rec.vfields.empty()) {
            const auto nf = static_cast<std::int64_t>(rec.response.size());
            add(p + "vfields", "f32", {nf, rec.vfield_dims.ny, rec.vfield_dims.nx});
        }
    }

    json header;
    header["format"] = "PLTB1";
    header["arrays"] = specs;
    header["manifest"] = manifest;
    const std::string header_str = header.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + path);
    out.write(pltb::kMagic, 6);
    detail::write_le_u64(out, header_str.size());
    out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));

    std::size_t spec_idx = 0;
    auto emit = [&](const void* data, std::uint64_t bytes) {
        if (bytes != specs[spec_idx].bytes())
            throw DataError("internal: array size mismatch for " + specs[spec_idx].name);
        detail::write_array_payload(out, data, bytes);
        ++spec_idx;
    };

    if (!records.empty())
        emit(records.front().response.freqs.data(), records.front().response.freqs.size() * 8);
    for (const auto& rec : records) {
        emit(rec.field.values.data(), rec.field.values.size() * 4);
        emit(rec.response.values_db.data(), rec.response.values_db.size() * 8);
        std::vector<double> peak_rows;
        peak_rows.reserve(4 * rec.peaks.size());
        for (int b : rec.peaks.bins) peak_rows.push_back(static_cast<double>(b));
        peak_rows.insert(peak_rows.end(), rec.peaks.freqs.begin(), rec.peaks.freqs.end());
        peak_rows.insert(peak_rows.end(), rec.peaks.heights.begin(), rec.peaks.heights.end());
        peak_rows.insert(peak_rows.end(), rec.peaks.prominences.begin(), rec.peaks.prominences.end());
        emit(peak_rows.data(), peak_rows.size() * 8);
        if (!rec.vfields.empty()) emit(rec.vfields.data(), rec.vfields.size() * 4);
    }
    out.flush();
    if (!out) throw DataError("write failed: " + path);
    return 6 + 8 + header_str.size() + offset;
}

// Streaming reader: the header is parsed once, array payloads are fetched on
// demand, so memory use is proportional to one record.
class DatasetReader {
public:
    explicit DatasetReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
        if (!in_) throw DataError("cannot open: " + path);
        in_.seekg(0, std::ios::end);
        file_size_ = static_cast<std::uint64_t>(in_.tellg());
        in_.seekg(0);

        char magic[6];
        if (!in_.read(magic, 6) || std::memcmp(magic, pltb::kMagic, 6) != 0)
            throw DataError("not a PLTB1 file: " + path);
        std::uint64_t header_len = 0;
        if (!in_.read(reinterpret_cast<char*>(&header_len), 8) || 14 + header_len > file_size_)
            throw DataError("truncated header: " + path);
        std::string header_str(header_len, '\0');
        if (!in_.read(header_str.data(), static_cast<std::streamsize>(header_len)))
            throw DataError("truncated header: " + path);

        json header;
        try {
            header = json::parse(header_str);
        } catch (const json::exception& e) {
            throw DataError("bad PLTB1 header: " + std::string(e.what()));
        }
        if (header.value("format", "") != "PLTB1") throw DataError("bad PLTB1 header format tag");
        manifest_ = header.at("manifest").get<DatasetManifest>();
        if (manifest_.format_version != 1)
            throw DataError("unsupported dataset format version " +
                            std::to_string(manifest_.format_version));
        payload_base_ = 14 + header_len;
        for (const auto& a : header.at("arrays")) {
            pltb::ArraySpec spec = a.get<pltb::ArraySpec>();
            if (payload_base_ + spec.offset + spec.bytes() + 4 > file_size_)
                throw DataError("truncated array " + spec.name + ": " + path);
            arrays_[spec.name] = std::move(spec);
        }
    }

    const DatasetManifest& manifest() const { return manifest_; }
    bool has_array(const std::string& name) const { return arrays_.count(name) > 0; }
    const pltb::ArraySpec& array_spec(const std::string& name) const {
        auto it = arrays_.find(name);
        if (it == arrays_.end()) throw DataError("no such array: " + name);
        return it->second;
    }

    template <typename T>
    std::vector<T> read_array(const std::string& name) {
        const pltb::ArraySpec& spec = array_spec(name);
        if ((sizeof(T) == 4 && spec.dtype != "f32") || (sizeof(T) == 8 && spec.dtype != "f64") ||
            (sizeof(T) == 1 && spec.dtype != "u8"))
            throw DataError("dtype mismatch for array " + name);
        std::vector<T> data(spec.elements());
        in_.seekg(static_cast<std::streamoff>(payload_base_ + spec.offset));
        if (!in_.read(reinterpret_cast<char*>(data.data()),
                      static_cast<std::streamsize>(spec.bytes())))
            throw DataError("read failed for array " + name);
        std::uint32_t stored = 0;
        if (!in_.read(reinterpret_cast<char*>(&stored), 4))
            throw DataError("missing checksum for array " + name);
        if (stored != pltb::crc_bytes(data.data(), spec.bytes()))
            throw DataError("checksum failure for array " + name);
        return data;
    }

    // Loads one sample by id. Fails for skipped or unknown ids.
    SampleRecord read_sample(int id) {
        const DatasetManifest::SampleInfo* info = nullptr;
        for (const auto& s : manifest_.samples)
            if (s.id == id) info = &s;
        if (info == nullptr) throw DataError("no such sample id: " + std::to_string(id));
        if (info->skipped)
            throw DataError("sample " + std::to_string(id) + " was skipped: " + info->skip_reason);

        SampleRecord rec;
        rec.id = id;
        rec.seed = info->seed;
        rec.setting_name = manifest_.setting.name;
        rec.params = info->params;

        const std::string p = "s" + std::to_string(id) + "/";
        const auto& field_spec = array_spec(p + "field");
        rec.field.grid = {static_cast<int>(field_spec.shape.at(0)),
                          static_cast<int>(field_spec.shape.at(1))};
        rec.field.dx = rec.params.length / (rec.field.grid.nx - 1);
        rec.field.dy = rec.params.width / (rec.field.grid.ny - 1);
        rec.field.values = read_array<float>(p + "field");
        rec.response.freqs = read_array<double>("freqs");
        rec.response.values_db = read_array<double>(p + "response");
        if (rec.response.values_db.size() != rec.response.freqs.size())
            throw DataError("response length mismatch for sample " + std::to_string(id));

        const std::vector<double> peak_rows = read_array<double>(p + "peaks");
        const std::size_t k = array_spec(p + "peaks").shape.at(1) > 0
                                  ? static_cast<std::size_t>(array_spec(p + "peaks").shape.at(1))
                                  : 0;
        for (std::size_t i = 0; i < k; ++i) {
            rec.peaks.bins.push_back(static_cast<int>(peak_rows[i]));
            rec.peaks.freqs.push_back(peak_rows[k + i]);
            rec.peaks.heights.push_back(peak_rows[2 * k + i]);
            rec.peaks.prominences.push_back(peak_rows[3 * k + i]);
        }
        if (has_array(p + "vfields")) {
            const auto& vspec = array_spec(p + "vfields");
            rec.vfield_dims = {static_cast<int>(vspec.shape.at(1)),
                               static_cast<int>(vspec.shape.at(2))};
            rec.vfields = read_array<float>(p + "vfields");
        }
        return rec;
    }

    // Ids of stored (non-skipped) samples, ascending.
    std::vector<int> sample_ids() const {
        std::vector<int> ids;
        for (const auto& s : manifest_.samples)
            if (!s.skipped) ids.push_back(s.id);
        return ids;
    }

private:
    std::string path_;
    std::ifstream in_;
    std::uint64_t file_size_ = 0;
    std::uint64_t payload_base_ = 0;
    DatasetManifest manifest_;
    std::map<std::string, pltb::ArraySpec> arrays_;
};

inline std::pair<std::vector<SampleRecord>, DatasetManifest> read_dataset(const std::string& path) {
    DatasetReader reader(path);
    std::vector<SampleRecord> records;
    for (int id : reader.sample_ids()) records.push_back(reader.read_sample(id));
    return {std::move(records), reader.manifest()};
}

// ---- Corpus statistics ---------------------------------------------------

struct CorpusSummary {
    int n_samples = 0;
    GridDims field_dims{0, 0};
    std::vector<double> mean_field;
    std::vector<double> freqs;
    std::vector<double> mean_response_db;
    std::vector<int> per_sample_peaks;
    std::vector<double> per_sample_fraction;
    std::map<int, int> peak_count_hist;
    std::array<double, 5> fraction_edges{};   // quartile edges of beaded fraction
    std::array<double, 4> bin_mean_peaks{};   // mean peak count per quartile bin
    std::array<int, 4> bin_counts{};
    std::vector<double> peak_density;         // mean peaks per 10 Hz bin
    double density_bin_hz = 10.0;
};

// Corpus statistics: mean design/response, peak-count distribution, peak
// count against beaded fraction (quartile bins), and peak density over
// frequency.
inline CorpusSummary summarize(const std::vector<SampleRecord>& records,
                               const NormalizationStats& stats, Interval band = default_band(),
                               double prominence_threshold = kDefaultProminence) {
    if (records.size() < 10) throw ConfigError("summarize: need at least 10 samples");

    CorpusSummary sum;
    sum.n_samples = static_cast<int>(records.size());
    sum.field_dims = records.front().field.grid;
    sum.mean_field.assign(records.front().field.values.size(), 0.0);
    sum.freqs = records.front().response.freqs;
    sum.mean_response_db.assign(sum.freqs.size(), 0.0);

    const int n_density_bins =
        static_cast<int>(std::ceil((band.hi - band.lo + 1.0) / sum.density_bin_hz));
    std::vector<double> density_counts(static_cast<std::size_t>(n_density_bins), 0.0);

    for (const auto& rec : records) {
        if (rec.field.grid.ny != sum.field_dims.ny || rec.field.grid.nx != sum.field_dims.nx)
            throw DataError("summarize: field dimension mismatch");
        if (rec.response.size() != sum.freqs.size())
            throw DataError("summarize: response length mismatch");
        for (std::size_t i = 0; i < sum.mean_field.size(); ++i)
            sum.mean_field[i] += static_cast<double>(rec.field.values[i]);
        for (std::size_t f = 0; f < sum.freqs.size(); ++f)
            sum.mean_response_db[f] += rec.response.values_db[f];

        const PeakSet peaks =
            banded_peaks(normalize(rec.response, stats), band, prominence_threshold);
        sum.per_sample_peaks.push_back(static_cast<int>(peaks.size()));
        sum.per_sample_fraction.push_back(beaded_fraction(rec.field));
        sum.peak_count_hist[static_cast<int>(peaks.size())] += 1;
        for (double f : peaks.freqs) {
            const int bin = std::min(n_density_bins - 1,
                                     static_cast<int>((f - band.lo) / sum.density_bin_hz));
            density_counts[static_cast<std::size_t>(bin)] += 1.0;
        }
    }
    for (double& v : sum.mean_field) v /= sum.n_samples;
    for (double& v : sum.mean_response_db) v /= sum.n_samples;
    sum.peak_density.resize(density_counts.size());
    for (std::size_t i = 0; i < density_counts.size(); ++i)
        sum.peak_density[i] = density_counts[i] / sum.n_samples;

    // Quartile bins of the beaded fraction; right-closed except the first.
    std::vector<double> sorted = sum.per_sample_fraction;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        const double pos = q * (sorted.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
    };
    for (int q = 0; q <= 4; ++q) sum.fraction_edges[static_cast<std::size_t>(q)] = quantile(q / 4.0);
    std::array<double, 4> totals{};
    for (std::size_t s = 0; s < sum.per_sample_fraction.size(); ++s) {
        const double x = sum.per_sample_fraction[s];
        int bin = 3;
        for (int b = 0; b < 4; ++b)
            if (x <= sum.fraction_edges[static_cast<std::size_t>(b) + 1]) {
                bin = b;
                break;
            }
        totals[static_cast<std::size_t>(bin)] += sum.per_sample_peaks[s];
        sum.bin_counts[static_cast<std::size_t>(bin)] += 1;
    }
    for (int b = 0; b < 4; ++b)
        sum.bin_mean_peaks[static_cast<std::size_t>(b)] =
            sum.bin_counts[static_cast<std::size_t>(b)] > 0
                ? totals[static_cast<std::size_t>(b)] / sum.bin_counts[static_cast<std::size_t>(b)]
                : 0.0;
    return sum;
}

inline void write_summary_text(const CorpusSummary& s, std::ostream& out) {
    out.precision(9);
    out << "platebench corpus summary\n"
        << "samples " << s.n_samples << "\n"
        << "field_dims " << s.field_dims.ny << " " << s.field_dims.nx << "\n";
    out << "peak_count_histogram (count samples)\n";
    for (const auto& [count, n] : s.peak_count_hist) out << count << " " << n << "\n";
    out << "beaded_fraction_quartiles";
    for (double e : s.fraction_edges) out << " " << e;
    out << "\nmean_peaks_per_fraction_bin";
    for (double v : s.bin_mean_peaks) out << " " << v;
    out << "\nsamples_per_fraction_bin";
    for (int v : s.bin_counts) out << " " << v;
    out << "\npeak_density_per_" << s.density_bin_hz << "hz";
    for (double v : s.peak_density) out << " " << v;
    out << "\nsample peaks beaded_fraction\n";
    for (std::size_t i = 0; i < s.per_sample_peaks.size(); ++i)
        out << i << " " << s.per_sample_peaks[i] << " " << s.per_sample_fraction[i] << "\n";
}

inline void write_summary_csv(const CorpusSummary& s, std::ostream& out) {
    out.precision(9);
    out << "sample,peaks,beaded_fraction\n";
    for (std::size_t i = 0; i < s.per_sample_peaks.size(); ++i)
        out << i << "," << s.per_sample_peaks[i] << "," << s.per_sample_fraction[i] << "\n";
}

inline void write_response_csv(const FrequencyResponse& r, std::ostream& out) {
    out.precision(17);
    out << "frequency_hz,response_db\n";
    for (std::size_t i = 0; i < r.size(); ++i)
        out << r.freqs[i] << "," << r.values_db[i] << "\n";
}

}  // namespace platebench
