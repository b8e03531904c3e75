#include <algorithm>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "pcbfeat/pipeline.hpp"

namespace {

using namespace pcbfeat;
using pipeline::PipelineConfig;

struct Overrides {
    std::string config;
    std::string dataset;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::vector<int> ksizes;
    std::vector<std::string> families;
    std::optional<int> jobs;

    void attach(CLI::App* cmd, bool with_dataset) {
        cmd->add_option("-c,--config", config, "JSON config file");
        if (with_dataset) cmd->add_option("-d,--dataset", dataset, "dataset manifest JSON");
        cmd->add_option("-o,--out", out, "output directory");
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--ksizes", ksizes, "region sizes, e.g. 5,10,25")->delimiter(',');
        cmd->add_option("--families", families, "color,shape,texture")->delimiter(',');
        cmd->add_option("-j,--jobs", jobs, "worker threads (0 = all cores)");
    }

    PipelineConfig resolve() const {
        PipelineConfig cfg = config.empty() ? PipelineConfig{} : pipeline::load_config(config);
        if (!dataset.empty()) cfg.dataset = dataset;
        if (!out.empty()) cfg.output_dir = out;
        if (seed) cfg.seed = *seed;
        if (!ksizes.empty()) cfg.ksizes = ksizes;
        if (!families.empty()) {
            cfg.families.clear();
            for (const auto& f : families) cfg.families.push_back(parse_family(f));
        }
        if (jobs) cfg.workers = *jobs;
        cfg.forest.seed = cfg.seed;
        cfg.validate();
        return cfg;
    }
};

int report_status(const char* verb, const pipeline::RunStatus& st) {
    // Per-image problems were already logged as they happened.
    if (st.exit_code == 2)
        for (const auto& m : st.messages) std::cerr << "[" << verb << "] " << m << "\n";
    std::cerr << "[" << verb << "] " << st.succeeded << " succeeded, " << st.failed << " failed\n";
    return st.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pcbfeat: region feature extraction and importance ranking for PCB images"};
    app.require_subcommand(1);

    Overrides extract_opts;
    auto* extract = app.add_subcommand("extract", "extract per-region features for every image and ksize");
    extract_opts.attach(extract, true);

    Overrides rank_opts;
    auto* rank = app.add_subcommand("rank", "fit forests on extracted features and summarize importances");
    rank_opts.attach(rank, false);

    std::string report_dir = "pcbfeat_out";
    auto* report = app.add_subcommand("report", "print the summaries of a finished rank run");
    report->add_option("-o,--out", report_dir, "output directory of the run");

    pipeline::SyntheticBoardSpec synth_spec;
    std::string synth_dir = "synthetic";
    int synth_count = 10;
    int synth_size = 0;
    auto* synth = app.add_subcommand("synth", "generate synthetic boards with masks and a dataset manifest");
    synth->add_option("-o,--out", synth_dir, "directory for boards and dataset.json");
    synth->add_option("-n,--count", synth_count, "number of boards");
    synth->add_option("--size", synth_size, "square board side in pixels; component sizes scale along");
    synth->add_option("--components", synth_spec.component_count, "components per board");
    synth->add_option("--seed", synth_spec.seed, "seed of the first board");
    synth->add_option("--noise", synth_spec.noise_sigma, "gaussian noise sigma");
    synth->add_flag("--striped", synth_spec.striped, "stripe the components");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*extract) return report_status("extract", pipeline::run_extract(extract_opts.resolve()));
        if (*rank) return report_status("rank", pipeline::run_rank(rank_opts.resolve()));
        if (*report) {
            std::cout << pipeline::render_report(report_dir);
            return 0;
        }
        if (*synth) {
            if (synth_size > 0) {
                // Component sizes scale with the board relative to the default side.
                const double scale = static_cast<double>(synth_size) / synth_spec.width;
                synth_spec.min_size = std::max(2, static_cast<int>(synth_spec.min_size * scale));
                synth_spec.max_size = std::max(synth_spec.min_size, static_cast<int>(synth_spec.max_size * scale));
                synth_spec.width = synth_spec.height = synth_size;
            }
            std::cout << pipeline::synth_dataset(synth_dir, synth_count, synth_spec).string() << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParams& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
