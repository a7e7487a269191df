#include <csignal>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "xit/core/error.hpp"
#include "xit/core/image.hpp"
#include "xit/core/rng.hpp"
#include "xit/core/transform_spec.hpp"
#include "xit/pipeline/apply.hpp"
#include "xit/pipeline/study_set.hpp"
#include "xit/pipeline/sweep.hpp"
#include "xit/segmentation/seg_transforms.hpp"
#include "xit/service/http_api.hpp"
#include "xit/service/study_service.hpp"
#include "xit/stats/analysis.hpp"

namespace {

xit::service::HttpApi* g_api = nullptr;

void handle_signal(int) {
    if (g_api != nullptr) g_api->stop();
}

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

int run_sweep(const std::string& input, const std::string& output, std::uint64_t seed,
              const std::vector<std::string>& only, const std::string& name, bool serial) {
    xit::SweepOptions opts;
    opts.input_dir = input;
    opts.output_dir = output;
    opts.master_seed = seed;
    opts.only = only;
    opts.dataset_name = name.empty() ? std::filesystem::path(input).filename().string() : name;
    opts.policy = serial ? xit::ExecutionPolicy::Serial : xit::ExecutionPolicy::Parallel;
    const xit::SweepManifest manifest = xit::apply_sweep(opts);
    std::cerr << "sweep: wrote " << manifest.entries.size() << " outputs, "
              << manifest.warnings.size() << " warnings, manifest "
              << (std::filesystem::path(output) / xit::kManifestName).string() << '\n';
    return 0;
}

int run_apply(const std::string& transform, std::optional<int> block, std::optional<double> prob,
              std::optional<int> segments, std::uint64_t seed, const std::string& in,
              const std::string& out, const std::string& flat_path,
              const std::string& labels_path) {
    xit::TransformSpec spec;
    spec.kind = xit::parse_kind(transform);
    spec.block_size = block;
    spec.probability = prob;
    spec.segments = segments;
    spec.validate();

    const xit::ImageBuffer img = xit::load_image(in);
    xit::Rng rng(seed);
    std::optional<xit::SegmentationMap> seg;
    if (spec.segments) {
        seg = xit::slic_segment(img, *spec.segments);
        if (!labels_path.empty()) xit::export_label_map(*seg, {}, labels_path);
    }
    const xit::TransformOutput result =
        xit::apply_transform(img, spec, rng, seg ? &*seg : nullptr);
    xit::save_image(result.image, out);
    if (result.flat && !flat_path.empty()) {
        const auto bytes = xit::encode_flat(*result.flat);
        std::ofstream f(flat_path, std::ios::binary);
        f.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
        if (!f) throw xit::IoError("cannot write " + flat_path);
    }
    std::cerr << "apply: " << spec.canonical() << " -> " << out;
    if (result.actual_segments) std::cerr << " (K=" << *result.actual_segments << ")";
    std::cerr << '\n';
    return 0;
}

int run_sample_study(const std::string& manifest_path, const std::string& labels_path,
                     std::uint64_t seed, const std::string& out) {
    const xit::SweepManifest manifest = xit::read_manifest(manifest_path);
    const xit::LabelMap labels = xit::LabelMap::read_csv(labels_path);
    xit::Rng rng(seed);
    const xit::StudySet set = xit::sample_study_set(manifest, labels, rng);
    xit::write_study_set(set, out);
    std::cerr << "sample-study: " << set.items.size() << " test items, " << set.practice.size()
              << " practice items -> " << out << '\n';
    return 0;
}

int run_stats(const std::string& responses, const std::string& table_path,
              const std::string& report_path, const std::string& tests, const std::string& mode) {
    xit::stats::AnalysisOptions opts = xit::stats::parse_tests(tests);
    opts.mode = xit::stats::parse_ttest_mode(mode);

    std::optional<xit::stats::Aggregation> agg;
    xit::stats::ResponseTable table;
    if (!responses.empty()) {
        agg = xit::stats::aggregate_trials(xit::stats::read_trials(responses));
        table = agg->table;
    }
    if (!table_path.empty()) {
        // Fixture rows fill cells the trial data does not cover, e.g. model
        // accuracies next to freshly collected human responses.
        const auto extra = xit::stats::ResponseTable::read_csv(table_path);
        for (const auto& row : extra.rows()) {
            if (table.find(row.spec, row.subject_kind) == nullptr) table.add(row);
        }
    }
    if (table.empty()) throw xit::InvalidArgument("no responses to analyze");

    const nlohmann::json report = xit::stats::build_report(table, opts, agg ? &*agg : nullptr);
    std::ofstream f(report_path);
    f << report.dump(2) << '\n';
    if (!f) throw xit::IoError("cannot write " + report_path);
    std::cerr << "stats: " << table.rows().size() << " cells -> " << report_path << '\n';
    return 0;
}

int run_serve(const std::string& host, int port, const std::string& study_path,
              const std::string& data_dir, const std::string& static_dir) {
    xit::service::StudyService service(xit::read_study_set(study_path), data_dir);
    xit::service::HttpApi api(service, static_dir);
    const int bound = api.bind(host, port);
    g_api = &api;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    std::cerr << "serve: listening on http://" << host << ':' << bound << "/v1\n";
    api.listen();
    g_api = nullptr;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extreme image transformations: sweep generation, study service and statistics"};
    app.require_subcommand(1);

    std::string input, output, dataset_name;
    std::uint64_t seed = 0;
    std::vector<std::string> only;
    bool serial = false;
    auto* sweep = app.add_subcommand("sweep", "Apply the transform sweep to a directory of PNGs");
    sweep->add_option("--input", input, "Directory of source PNGs")->required();
    sweep->add_option("--output", output, "Output directory")->required();
    sweep->add_option("--seed", seed, "Master seed")->required();
    sweep->add_option("--only", only, "Restrict to canonical specs or transform names");
    sweep->add_option("--name", dataset_name, "Dataset name recorded in the manifest");
    sweep->add_flag("--serial", serial, "Use the serial reference kernels");

    std::string transform, flat_path, labels_out;
    std::optional<int> block, segments;
    std::optional<double> prob;
    std::string in_path, out_path;
    auto* apply = app.add_subcommand("apply", "Apply one transform to one image");
    apply->add_option("--transform", transform, "Transform name, e.g. within_grid")->required();
    apply->add_option("--block", block, "Block size in pixels");
    apply->add_option("--prob", prob, "Shuffle probability");
    apply->add_option("--segments", segments, "Requested SLIC region count");
    apply->add_option("--seed", seed, "Seed")->required();
    apply->add_option("--flat", flat_path, "Also write the planar ColorFlatten file");
    apply->add_option("--labels", labels_out, "Write the SLIC label map PNG");
    apply->add_option("IN", in_path, "Input PNG")->required();
    apply->add_option("OUT", out_path, "Output PNG")->required();

    std::string manifest_path, labels_path, study_out;
    auto* sample = app.add_subcommand("sample-study", "Draw the study set from a sweep manifest");
    sample->add_option("--manifest", manifest_path, "Sweep manifest.jsonl")->required();
    sample->add_option("--labels", labels_path, "CSV path,class")->required();
    sample->add_option("--seed", seed, "Seed")->required();
    sample->add_option("--out", study_out, "Output study.json")->required();

    std::string responses, table_path, report_path, tests = "pearson,ttest,ols,rank",
                                                    mode = "welch";
    auto* stats = app.add_subcommand("stats", "Analyze study responses");
    stats->add_option("--responses", responses, "Per-trial responses CSV");
    stats->add_option("--table", table_path,
                      "Accuracy table CSV spec,subject_kind,accuracy[,mean_confidence]");
    stats->add_option("--report", report_path, "Output report.json")->required();
    stats->add_option("--tests", tests, "Comma-separated subset of pearson,ttest,ols,rank");
    stats->add_option("--ttest-mode", mode, "welch, paired or two_sample_pooled");

    std::string host = "127.0.0.1", study_path, data_dir, static_dir;
    int port = 8080;
    auto* serve = app.add_subcommand("serve", "Run the study HTTP service");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "Port (env XIT_PORT)");
    serve->add_option("--study", study_path, "study.json (env XIT_STUDY)");
    serve->add_option("--data-dir", data_dir, "Journal directory (env XIT_DATA_DIR)");
    serve->add_option("--static", static_dir, "Serve front-end assets from this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*sweep) return run_sweep(input, output, seed, only, dataset_name, serial);
        if (*apply) {
            return run_apply(transform, block, prob, segments, seed, in_path, out_path, flat_path,
                             labels_out);
        }
        if (*sample) return run_sample_study(manifest_path, labels_path, seed, study_out);
        if (*stats) {
            if (responses.empty() && table_path.empty()) {
                throw xit::InvalidArgument("stats needs --responses and/or --table");
            }
            return run_stats(responses, table_path, report_path, tests, mode);
        }
        if (*serve) {
            if (serve->count("--port") == 0) port = std::stoi(env_or("XIT_PORT", std::to_string(port)));
            if (study_path.empty()) study_path = env_or("XIT_STUDY", "");
            if (data_dir.empty()) data_dir = env_or("XIT_DATA_DIR", "xit-data");
            if (study_path.empty()) throw xit::InvalidArgument("serve needs --study or XIT_STUDY");
            return run_serve(host, port, study_path, data_dir, static_dir);
        }
    } catch (const xit::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
