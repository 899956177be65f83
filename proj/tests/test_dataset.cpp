#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "platebench/dataset.hpp"
#include "platebench/rng.hpp"

using namespace platebench;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "platebench_dataset_test";
    fs::create_directories(dir);
    return dir;
}

SampleRecord make_record(int id, Rng& rng, bool with_vfields) {
    SampleRecord rec;
    rec.id = id;
    rec.seed = 1000 + static_cast<std::uint64_t>(id);
    rec.setting_name = "v5000";
    rec.params = sample_plate_params(rec.seed, DatasetSetting::v5000());

    rec.field.grid = {4, 5};
    rec.field.dx = rec.params.length / 4.0;
    rec.field.dy = rec.params.width / 3.0;
    for (int i = 0; i < 20; ++i)
        rec.field.values.push_back(static_cast<float>(rng.uniform(0.0, 1.0)));

    for (int f = 1; f <= 20; ++f) {
        rec.response.freqs.push_back(static_cast<double>(f));
        rec.response.values_db.push_back(rng.uniform(-40.0, 0.0));
    }
    rec.response.values_db[10] = 20.0;  // guarantee one strong peak
    rec.peaks = find_peaks(rec.response.values_db, rec.response.freqs, 0.5);

    if (with_vfields) {
        rec.vfield_dims = {2, 3};
        for (std::size_t i = 0; i < 20u * 2u * 3u; ++i)
            rec.vfields.push_back(static_cast<float>(rng.uniform(0.0, 1e-3)));
    }
    return rec;
}

bool params_equal(const PlateParams& a, const PlateParams& b) {
    return a.length == b.length && a.width == b.width && a.thickness == b.thickness &&
           a.density == b.density && a.youngs_modulus == b.youngs_modulus &&
           a.poisson_ratio == b.poisson_ratio && a.loss_factor == b.loss_factor &&
           a.rot_stiffness == b.rot_stiffness && a.load_position.x == b.load_position.x &&
           a.load_position.y == b.load_position.y && a.bead_depth == b.bead_depth;
}

struct Fixture {
    std::vector<SampleRecord> records;
    DatasetManifest manifest;

    explicit Fixture(int format_version = 1) {
        Rng rng(808);
        for (int id = 0; id < 3; ++id) records.push_back(make_record(id, rng, id == 1));

        manifest.format_version = format_version;
        manifest.setting = DatasetSetting::v5000();
        manifest.creation_seed = 42;
        manifest.residual_tol = 1e-8;
        manifest.freq_spec = "1:20:1";
        manifest.stats.response_mean.assign(20, -10.0);
        manifest.stats.response_std = 4.0;
        manifest.run_config = json{{"workers", 2}};
        for (const auto& rec : records) {
            DatasetManifest::SampleInfo info;
            info.id = rec.id;
            info.seed = rec.seed;
            info.test = rec.id == 2;
            info.params = rec.params;
            manifest.samples.push_back(info);
        }
        DatasetManifest::SampleInfo skipped;
        skipped.id = 3;
        skipped.seed = 1003;
        skipped.skipped = true;
        skipped.skip_reason = "solver residual above tolerance";
        manifest.samples.push_back(skipped);
    }
};

}  // namespace

TEST_CASE("dataset round trip preserves every byte of every array") {
    const Fixture fx;
    const fs::path path = temp_dir() / "roundtrip.pltb";
    const std::uint64_t written = write_dataset(fx.records, fx.manifest, path.string());
    CHECK(written == fs::file_size(path));

    auto [records, manifest] = read_dataset(path.string());
    REQUIRE(records.size() == 3);

    for (std::size_t s = 0; s < records.size(); ++s) {
        const SampleRecord &got = records[s], &want = fx.records[s];
        REQUIRE(got.id == want.id);
        REQUIRE(got.seed == want.seed);
        REQUIRE(params_equal(got.params, want.params));
        REQUIRE(got.field.grid == want.field.grid);
        REQUIRE(got.field.values == want.field.values);        // bitwise: float ==
        REQUIRE(got.response.freqs == want.response.freqs);    // bitwise: double ==
        REQUIRE(got.response.values_db == want.response.values_db);
        REQUIRE(got.peaks.bins == want.peaks.bins);
        REQUIRE(got.peaks.freqs == want.peaks.freqs);
        REQUIRE(got.peaks.heights == want.peaks.heights);
        REQUIRE(got.peaks.prominences == want.peaks.prominences);
        REQUIRE(got.vfield_dims == want.vfield_dims);
        REQUIRE(got.vfields == want.vfields);
    }

    CHECK(manifest.creation_seed == 42);
    CHECK(manifest.freq_spec == "1:20:1");
    CHECK(manifest.residual_tol == 1e-8);
    CHECK(manifest.setting.name == "v5000");
    CHECK(manifest.setting.grid == GridDims{81, 121});
    CHECK(manifest.stats.response_std == 4.0);
    CHECK(manifest.stats.response_mean == fx.manifest.stats.response_mean);
    CHECK(manifest.run_config.at("workers") == 2);
    CHECK(manifest.count_train() == 2);
    CHECK(manifest.count_test() == 1);
    CHECK(manifest.count_skipped() == 1);
    REQUIRE(manifest.samples.size() == 4);
    CHECK(manifest.samples[3].skip_reason == "solver residual above tolerance");
}

TEST_CASE("written byte count matches the layout arithmetic") {
    const Fixture fx;
    const fs::path path = temp_dir() / "layout.pltb";
    const std::uint64_t written = write_dataset(fx.records, fx.manifest, path.string());

    DatasetReader reader(path.string());
    std::uint64_t payload = 0;
    payload += reader.array_spec("freqs").bytes() + 4;
    for (const auto& rec : fx.records) {
        const std::string p = "s" + std::to_string(rec.id) + "/";
        payload += reader.array_spec(p + "field").bytes() + 4;
        payload += reader.array_spec(p + "response").bytes() + 4;
        payload += reader.array_spec(p + "peaks").bytes() + 4;
        if (!rec.vfields.empty()) payload += reader.array_spec(p + "vfields").bytes() + 4;
    }
    // header length from the file itself
    std::ifstream in(path, std::ios::binary);
    in.seekg(6);
    std::uint64_t header_len = 0;
    in.read(reinterpret_cast<char*>(&header_len), 8);
    CHECK(written == 6 + 8 + header_len + payload);

    // the projected full-scale corpus: 100 samples of (300, 40, 60) f32 fields
    const pltb::ArraySpec big{"x", "f32", {300, 40, 60}, 0};
    CHECK(big.bytes() == 2'880'000);
    CHECK(100 * big.bytes() == 288'000'000);  // ≈ 288 MB of velocity fields
}

TEST_CASE("streaming reads fetch single samples without loading the corpus") {
    const Fixture fx;
    const fs::path path = temp_dir() / "stream.pltb";
    write_dataset(fx.records, fx.manifest, path.string());

    DatasetReader reader(path.string());
    CHECK(reader.sample_ids() == std::vector<int>{0, 1, 2});
    const SampleRecord rec = reader.read_sample(1);
    CHECK(rec.id == 1);
    CHECK(rec.vfield_dims == GridDims{2, 3});
    CHECK(rec.vfields.size() == 20u * 2u * 3u);
    CHECK(rec.field.dx == Catch::Approx(rec.params.length / 4.0));

    CHECK(reader.has_array("freqs"));
    CHECK_FALSE(reader.has_array("s0/vfields"));  // only sample 1 stored fields
    CHECK_THROWS_AS(reader.array_spec("nonsense"), DataError);
    CHECK_THROWS_AS(reader.read_sample(77), DataError);
    CHECK_THROWS_WITH(reader.read_sample(3), Catch::Matchers::ContainsSubstring("skipped"));
    CHECK_THROWS_AS(reader.read_array<double>("s0/field"), DataError);  // dtype mismatch
}

TEST_CASE("truncated files are rejected") {
    const Fixture fx;
    const fs::path path = temp_dir() / "full.pltb";
    const std::uint64_t size = write_dataset(fx.records, fx.manifest, path.string());

    const fs::path cut = temp_dir() / "cut.pltb";
    {
        std::ifstream in(path, std::ios::binary);
        std::vector<char> bytes(static_cast<std::size_t>(size) - 1);
        in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        std::ofstream out(cut, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    CHECK_THROWS_AS(DatasetReader(cut.string()), DataError);

    const fs::path stub = temp_dir() / "stub.pltb";
    {
        std::ifstream in(path, std::ios::binary);
        std::vector<char> bytes(10);
        in.read(bytes.data(), 10);
        std::ofstream out(stub, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), 10);
    }
    CHECK_THROWS_AS(DatasetReader(stub.string()), DataError);
}

TEST_CASE("corrupted payload bytes fail their checksum") {
    const Fixture fx;
    const fs::path path = temp_dir() / "corrupt.pltb";
    write_dataset(fx.records, fx.manifest, path.string());

    std::uint64_t header_len = 0;
    {
        std::ifstream in(path, std::ios::binary);
        in.seekg(6);
        in.read(reinterpret_cast<char*>(&header_len), 8);
    }
    {
        std::fstream file(path, std::ios::binary | std::ios::in | std::ios::out);
        file.seekp(static_cast<std::streamoff>(14 + header_len + 3));  // inside "freqs"
        char byte = 0;
        file.read(&byte, 1);
        file.seekp(static_cast<std::streamoff>(14 + header_len + 3));
        byte = static_cast<char>(byte ^ 0x5a);
        file.write(&byte, 1);
    }
    DatasetReader reader(path.string());  // header itself is intact
    CHECK_THROWS_WITH(reader.read_array<double>("freqs"),
                      Catch::Matchers::ContainsSubstring("checksum"));
}

TEST_CASE("foreign files and future versions are rejected") {
    const fs::path junk = temp_dir() / "junk.pltb";
    {
        std::ofstream out(junk, std::ios::binary | std::ios::trunc);
        out << "GARBAGE FILE THAT IS LONG ENOUGH TO READ A HEADER FROM";
    }
    CHECK_THROWS_WITH(DatasetReader(junk.string()),
                      Catch::Matchers::ContainsSubstring("not a PLTB1"));
    CHECK_THROWS_AS(DatasetReader((temp_dir() / "missing.pltb").string()), DataError);

    const Fixture future(2);
    const fs::path path = temp_dir() / "future.pltb";
    write_dataset(future.records, future.manifest, path.string());
    CHECK_THROWS_WITH(DatasetReader(path.string()),
                      Catch::Matchers::ContainsSubstring("version"));
}

TEST_CASE("corpus summary reports peak statistics against beaded fraction") {
    // 12 synthetic samples: sample s carries (s % 4) + 1 spikes and a beaded
    // fraction that grows with s, so the quartile bins split 3/3/3/3.
    std::vector<SampleRecord> records;
    for (int s = 0; s < 12; ++s) {
        SampleRecord rec;
        rec.id = s;
        rec.field.grid = {4, 5};
        rec.field.values.assign(20, 0.0f);
        for (int k = 0; k <= s; ++k) rec.field.values[static_cast<std::size_t>(k)] = 1.0f;

        for (int f = 1; f <= 300; ++f) {
            rec.response.freqs.push_back(static_cast<double>(f));
            rec.response.values_db.push_back(0.0);
        }
        const int n_peaks = (s % 4) + 1;
        for (int k = 0; k < n_peaks; ++k) rec.response.values_db[50u * (k + 1)] = 2.0;
        records.push_back(std::move(rec));
    }
    NormalizationStats stats;  // identity normalization keeps the spikes at 2
    stats.response_mean.assign(300, 0.0);
    stats.response_std = 1.0;

    const CorpusSummary sum = summarize(records, stats);
    CHECK(sum.n_samples == 12);
    CHECK(sum.field_dims == GridDims{4, 5});

    for (int s = 0; s < 12; ++s) {
        CHECK(sum.per_sample_peaks[static_cast<std::size_t>(s)] == (s % 4) + 1);
        CHECK(sum.per_sample_fraction[static_cast<std::size_t>(s)] ==
              Catch::Approx((s + 1) / 20.0));
    }
    CHECK(sum.peak_count_hist.at(1) == 3);
    CHECK(sum.peak_count_hist.at(2) == 3);
    CHECK(sum.peak_count_hist.at(3) == 3);
    CHECK(sum.peak_count_hist.at(4) == 3);

    int binned = 0;
    for (int c : sum.bin_counts) binned += c;
    CHECK(binned == 12);
    for (int q = 0; q < 4; ++q)
        CHECK(sum.fraction_edges[static_cast<std::size_t>(q)] <
              sum.fraction_edges[static_cast<std::size_t>(q) + 1]);

    // peaks sit at 51, 101, 151, 201 Hz → density bins 5, 10, 15, 20
    REQUIRE(sum.peak_density.size() == 25);
    CHECK(sum.peak_density[5] == Catch::Approx(1.0));         // every sample has the 51 Hz spike
    CHECK(sum.peak_density[10] == Catch::Approx(9.0 / 12.0)); // samples with ≥ 2 spikes
    CHECK(sum.peak_density[0] == 0.0);
    double density_total = 0.0;
    for (double v : sum.peak_density) density_total += v;
    double mean_peaks = 0.0;
    for (int v : sum.per_sample_peaks) mean_peaks += v;
    CHECK(density_total == Catch::Approx(mean_peaks / 12.0));

    // the mean field accumulates the staircase of memberships
    CHECK(sum.mean_field[0] == Catch::Approx(1.0));   // beaded in every sample
    CHECK(sum.mean_field[19] == Catch::Approx(0.0));  // never beaded
    CHECK(sum.mean_response_db[50] == Catch::Approx(2.0));  // common spike survives the mean

    std::ostringstream text;
    write_summary_text(sum, text);
    CHECK(text.str().find("peak_count_histogram") != std::string::npos);
    CHECK(text.str().find("mean_peaks_per_fraction_bin") != std::string::npos);
    std::ostringstream csv;
    write_summary_csv(sum, csv);
    int lines = 0;
    for (char c : csv.str()) lines += c == '\n' ? 1 : 0;
    CHECK(lines == 13);  // header + 12 samples

    CHECK_THROWS_AS(summarize({records[0]}, stats), ConfigError);
}

TEST_CASE("response CSV lists one row per frequency bin") {
    FrequencyResponse r;
    r.freqs = {1.0, 2.0, 3.0};
    r.values_db = {-10.0, -20.0, -30.0};
    std::ostringstream out;
    write_response_csv(r, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "frequency_hz,response_db");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);
}
