// platebench command-line front end: dataset generation, metric evaluation,
// corpus statistics, and per-sample exports.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "platebench/dataset.hpp"
#include "platebench/fem.hpp"
#include "platebench/mesh.hpp"
#include "platebench/metrics.hpp"
#include "platebench/parallel.hpp"
#include "platebench/pipeline.hpp"
#include "platebench/response.hpp"
#include "platebench/settings_io.hpp"

namespace {

bool log_quiet() {
    const char* env = std::getenv("PLATEBENCH_LOG");
    return env != nullptr && std::string(env) == "quiet";
}

platebench::Interval parse_band(const std::string& spec) {
    const auto c = spec.find(':');
    if (c == std::string::npos)
        throw platebench::ConfigError("band must be lo:hi, got '" + spec + "'");
    try {
        return {std::stod(spec.substr(0, c)), std::stod(spec.substr(c + 1))};
    } catch (const std::exception&) {
        throw platebench::ConfigError("band must be lo:hi, got '" + spec + "'");
    }
}

void write_text_file(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    std::ofstream out(path);
    if (!out) throw platebench::DataError("cannot open for writing: " + path);
    fn(out);
    if (!out.flush()) throw platebench::DataError("write failed: " + path);
}

struct GenerateArgs {
    std::string setting = "v5000";
    int n = 0;
    std::uint64_t seed = 1;
    std::string out;
    std::string freqs = platebench::kDefaultFreqSpec;
    int workers = platebench::default_workers();
    double tol = 1e-8;
    bool store_fields = false;
    double test_fraction = 1.0 / 6.0;
};

int cmd_generate(const GenerateArgs& args) {
    platebench::GenerateOptions opt;
    opt.setting = platebench::resolve_setting(args.setting);
    opt.n_samples = args.n;
    opt.base_seed = args.seed;
    opt.test_fraction = args.test_fraction;
    opt.sweep.freqs = platebench::parse_freq_spec(args.freqs);
    opt.sweep.freq_spec = args.freqs;
    opt.sweep.workers = args.workers;
    opt.sweep.residual_tol = args.tol;
    opt.sweep.store_fields = args.store_fields;
    opt.run_config = platebench::json{{"command", "generate"},
                                      {"setting", args.setting},
                                      {"n", args.n},
                                      {"seed", args.seed},
                                      {"freqs", args.freqs},
                                      {"workers", args.workers},
                                      {"tol", args.tol},
                                      {"store_fields", args.store_fields},
                                      {"test_fraction", args.test_fraction}};
    if (!log_quiet())
        opt.progress = [&](int id, const std::string& msg) {
            std::fprintf(stderr, "[generate] sample %d/%d: %s\n", id + 1, args.n, msg.c_str());
        };

    auto [records, manifest] = platebench::generate_corpus(opt);
    const std::uint64_t bytes = platebench::write_dataset(records, manifest, args.out);
    if (!log_quiet())
        std::fprintf(stderr, "[generate] wrote %zu records (%llu bytes) to %s\n", records.size(),
                     static_cast<unsigned long long>(bytes), args.out.c_str());
    return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& ref_path, const std::string& band_spec,
             const std::string& out_prefix) {
    const platebench::Interval band = parse_band(band_spec);
    auto [pred_records, pred_manifest] = platebench::read_dataset(pred_path);
    auto [ref_records, ref_manifest] = platebench::read_dataset(ref_path);
    if (pred_records.size() != ref_records.size())
        throw platebench::DataError("datasets hold different sample counts");
    std::vector<platebench::FrequencyResponse> pred, ref;
    for (std::size_t i = 0; i < pred_records.size(); ++i) {
        if (pred_records[i].id != ref_records[i].id)
            throw platebench::DataError("sample ids are misaligned between datasets");
        pred.push_back(pred_records[i].response);
        ref.push_back(ref_records[i].response);
    }

    const platebench::MetricsReport report =
        platebench::evaluate(pred, ref, ref_manifest.stats, band);
    if (out_prefix.empty()) {
        platebench::write_report_text(report, std::cout);
    } else {
        write_text_file(out_prefix + ".txt",
                        [&](std::ostream& o) { platebench::write_report_text(report, o); });
        write_text_file(out_prefix + ".csv",
                        [&](std::ostream& o) { platebench::write_report_csv(report, o); });
    }
    return 0;
}

int cmd_stats(const std::string& data_path, const std::string& out_prefix) {
    auto [records, manifest] = platebench::read_dataset(data_path);
    const platebench::CorpusSummary summary = platebench::summarize(records, manifest.stats);
    if (out_prefix.empty()) {
        platebench::write_summary_text(summary, std::cout);
    } else {
        write_text_file(out_prefix + ".txt",
                        [&](std::ostream& o) { platebench::write_summary_text(summary, o); });
        write_text_file(out_prefix + ".csv",
                        [&](std::ostream& o) { platebench::write_summary_csv(summary, o); });
    }
    return 0;
}

void write_raw_f32(const std::string& path, const float* data, std::size_t count) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw platebench::DataError("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * 4));
    if (!out.flush()) throw platebench::DataError("write failed: " + path);
}

struct ExportArgs {
    std::string data;
    int sample = 0;
    std::string out_prefix;
    double field_freq = -1.0;
    bool design = false;
    bool mesh = false;
};

int cmd_export(const ExportArgs& args) {
    platebench::DatasetReader reader(args.data);
    const platebench::SampleRecord rec = reader.read_sample(args.sample);

    write_text_file(args.out_prefix + "_response.csv",
                    [&](std::ostream& o) { platebench::write_response_csv(rec.response, o); });

    if (args.design) {
        write_raw_f32(args.out_prefix + "_design.bin", rec.field.values.data(),
                      rec.field.values.size());
        if (!log_quiet())
            std::fprintf(stderr, "[export] design grid %d x %d\n", rec.field.grid.ny,
                         rec.field.grid.nx);
    }
    if (args.field_freq >= 0.0) {
        if (rec.vfields.empty())
            throw platebench::DataError("dataset stores no velocity fields (generate with --store-fields)");
        std::size_t bin = rec.response.size();
        double best = std::numeric_limits<double>::max();
        for (std::size_t i = 0; i < rec.response.size(); ++i) {
            const double d = std::abs(rec.response.freqs[i] - args.field_freq);
            if (d < best) {
                best = d;
                bin = i;
            }
        }
        if (bin == rec.response.size() || best > 0.5)
            throw platebench::DataError("no stored field near f = " + std::to_string(args.field_freq));
        const std::size_t cells = static_cast<std::size_t>(rec.vfield_dims.cell_count());
        write_raw_f32(args.out_prefix + "_field.bin", rec.vfields.data() + bin * cells, cells);
        if (!log_quiet())
            std::fprintf(stderr, "[export] field at %g Hz, grid %d x %d\n",
                         rec.response.freqs[bin], rec.vfield_dims.ny, rec.vfield_dims.nx);
    }
    if (args.mesh) {
        const platebench::PlateMesh mesh =
            platebench::build_mesh(rec.params, rec.field, rec.field.grid);
        write_text_file(args.out_prefix + "_mesh.txt",
                        [&](std::ostream& o) { platebench::write_mesh_text(mesh, o); });
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"beaded-plate vibration benchmark toolkit"};
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "simulate samples and write a dataset");
    generate->add_option("--setting", gen.setting, "v5000, g5000, or a setting file path");
    generate->add_option("--n", gen.n, "number of samples")->required();
    generate->add_option("--seed", gen.seed, "base seed (sample i uses seed + i)");
    generate->add_option("--out", gen.out, "output dataset path")->required();
    generate->add_option("--freqs", gen.freqs, "frequency range start:stop:step in Hz");
    generate->add_option("--workers", gen.workers, "worker thread count");
    generate->add_option("--tol", gen.tol, "harmonic solve residual tolerance");
    generate->add_flag("--store-fields", gen.store_fields, "store 40x60 velocity fields");
    generate->add_option("--test-fraction", gen.test_fraction, "fraction of samples in the test split");

    std::string eval_pred, eval_ref, eval_band = "1:250", eval_out;
    CLI::App* eval_cmd = app.add_subcommand("eval", "score predictions against references");
    eval_cmd->add_option("--pred", eval_pred, "predicted dataset")->required();
    eval_cmd->add_option("--ref", eval_ref, "reference dataset")->required();
    eval_cmd->add_option("--band", eval_band, "evaluation band lo:hi in Hz");
    eval_cmd->add_option("--out-prefix", eval_out, "write <prefix>.txt and <prefix>.csv");

    std::string stats_data, stats_out;
    CLI::App* stats_cmd = app.add_subcommand("stats", "corpus statistics");
    stats_cmd->add_option("--data", stats_data, "dataset path")->required();
    stats_cmd->add_option("--out-prefix", stats_out, "write <prefix>.txt and <prefix>.csv");

    ExportArgs exp;
    CLI::App* export_cmd = app.add_subcommand("export", "per-sample exports");
    export_cmd->add_option("--data", exp.data, "dataset path")->required();
    export_cmd->add_option("--sample", exp.sample, "sample id")->required();
    export_cmd->add_option("--out-prefix", exp.out_prefix, "output file prefix")->required();
    export_cmd->add_option("--field", exp.field_freq, "dump the stored velocity field at this frequency");
    export_cmd->add_flag("--design", exp.design, "dump the beading field as raw f32");
    export_cmd->add_flag("--mesh", exp.mesh, "dump the mesh as plain text");

    try {
        app.parse(argc, argv);
        if (*generate) return cmd_generate(gen);
        if (*eval_cmd) return cmd_eval(eval_pred, eval_ref, eval_band, eval_out);
        if (*stats_cmd) return cmd_stats(stats_data, stats_out);
        if (*export_cmd) return cmd_export(exp);
        return 1;
    } catch (const CLI::ParseError& e) {
        // --help/--version exit 0; any usage problem is a configuration error
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const platebench::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const platebench::SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 3;
    } catch (const platebench::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
