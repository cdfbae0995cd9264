#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "clic/cli/config.hpp"
#include "clic/cli/pipeline.hpp"
#include "clic/common/errors.hpp"

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string mode;
    std::string out_dir;
    std::vector<std::uint64_t> seeds;
    int jobs = -1;
};

clic::cli::RunConfig load_config(const GlobalArgs& args) {
    auto cfg = clic::cli::parse_config(args.config_path);
    if (!args.mode.empty()) cfg.mode = clic::model::mode_from_name(args.mode);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (!args.seeds.empty()) cfg.train.seeds = args.seeds;
    if (args.jobs > 0) cfg.jobs = args.jobs;
    clic::cli::validate(cfg);
    return cfg;
}

void add_common(CLI::App* cmd, GlobalArgs& args) {
    cmd->add_option("--config", args.config_path, "run configuration file (JSON)")->required();
    cmd->add_option("--mode", args.mode, "ecg | ecg-attr | clic-dtt | clic-llm");
    cmd->add_option("--out", args.out_dir, "output directory override");
    cmd->add_option("--seeds", args.seeds, "seed list override");
    cmd->add_option("--jobs", args.jobs, "concurrent seed runs");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CLIC: contextual language-informed cardiac pathology classification"};
    app.require_subcommand(1);

    GlobalArgs args;
    std::string split = "test";
    std::uint64_t export_seed = 0;
    std::string format = "markdown";

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic PTB-XL-shaped dataset");
    CLI::App* prepare = app.add_subcommand("prepare", "parse metadata, derive labels, write manifest");
    CLI::App* text_dtt = app.add_subcommand("text-dtt", "render template texts");
    CLI::App* text_llm = app.add_subcommand("text-llm", "generate prompt-guided texts");
    CLI::App* embed = app.add_subcommand("embed", "embed texts into a store file");
    CLI::App* train = app.add_subcommand("train", "train the configured mode across seeds");
    CLI::App* eval = app.add_subcommand("eval", "re-evaluate checkpoints on the test split");
    CLI::App* exp = app.add_subcommand("export-embeddings", "dump penultimate activations as CSV");
    CLI::App* report = app.add_subcommand("report", "aggregate run metrics into a table");

    for (CLI::App* cmd : {synth, prepare, text_dtt, text_llm, embed, train, eval, exp, report}) {
        add_common(cmd, args);
    }
    exp->add_option("--split", split, "train | val | test");
    exp->add_option("--seed", export_seed, "checkpoint seed to export");
    report->add_option("--format", format, "markdown | csv | json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        const auto cfg = load_config(args);
        if (synth->parsed()) clic::cli::run_synth(cfg);
        else if (prepare->parsed()) clic::cli::run_prepare(cfg);
        else if (text_dtt->parsed()) clic::cli::run_text_dtt(cfg);
        else if (text_llm->parsed()) clic::cli::run_text_llm(cfg);
        else if (embed->parsed()) clic::cli::run_embed(cfg);
        else if (train->parsed()) clic::cli::run_train(cfg);
        else if (eval->parsed()) clic::cli::run_eval(cfg);
        else if (exp->parsed()) clic::cli::run_export_embeddings(cfg, split, export_seed);
        else if (report->parsed()) {
            clic::metrics::TableFormat fmt;
            if (format == "markdown") fmt = clic::metrics::TableFormat::Markdown;
            else if (format == "csv") fmt = clic::metrics::TableFormat::Csv;
            else if (format == "json") fmt = clic::metrics::TableFormat::Json;
            else throw clic::ConfigValidationError("format must be markdown|csv|json");
            std::cout << clic::cli::run_report(cfg, fmt);
        }
    } catch (const clic::ConfigParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const clic::ConfigValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
