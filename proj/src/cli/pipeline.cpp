#include "clic/cli/pipeline.hpp"

#include <atomic>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "clic/common/errors.hpp"
#include "clic/common/io.hpp"
#include "clic/data/statements.hpp"
#include "clic/data/synth.hpp"
#include "clic/metrics/export.hpp"
#include "clic/model/checkpoint.hpp"
#include "clic/textenc/providers.hpp"
#include "clic/textenc/store_io.hpp"
#include "clic/training/experiment.hpp"

namespace clic::cli {

namespace {

bool mode_uses_text(model::Mode mode) {
    return mode == model::Mode::ClicDtT || mode == model::Mode::ClicLLM;
}

std::string texts_file_name(model::Mode mode) {
    return mode == model::Mode::ClicLLM ? "texts_llm.jsonl" : "texts_dtt.jsonl";
}

std::string emb_file_name(model::Mode mode) {
    return mode == model::Mode::ClicLLM ? "emb_llm.bin" : "emb_dtt.bin";
}

std::vector<data::ManifestRecord> load_manifest_checked(const RunConfig& cfg) {
    const auto path = cfg.out_path() / "manifest.jsonl";
    if (!std::filesystem::exists(path)) {
        throw ConfigValidationError("manifest not found at " + path.string() +
                                    "; run `clic prepare` first");
    }
    return data::read_manifest(path);
}

struct PipelineData {
    training::LoadedDataset dataset;
    std::vector<int> train_idx, val_idx, test_idx;
};

PipelineData load_pipeline_data(const RunConfig& cfg) {
    PipelineData out;
    out.dataset = training::load_dataset(cfg.data_root_path(), load_manifest_checked(cfg));
    out.train_idx = out.dataset.indices_for_fold_range(1, 8);
    out.val_idx = out.dataset.indices_for_fold_range(9, 9);
    out.test_idx = out.dataset.indices_for_fold_range(10, 10);
    return out;
}

model::AttrSchema schema_from_train(const PipelineData& pd) {
    std::vector<data::PatientMeta> train_metas;
    train_metas.reserve(pd.train_idx.size());
    for (int i : pd.train_idx) train_metas.push_back(pd.dataset.metas[i]);
    return model::build_attr_schema(train_metas);
}

// context rows aligned with dataset record order
model::Mat build_context(const RunConfig& cfg, const PipelineData& pd,
                         const model::AttrSchema& schema) {
    const auto& ds = pd.dataset;
    if (cfg.mode == model::Mode::EcgAttr) {
        model::Mat ctx(ds.size(), schema.dim());
        for (int i = 0; i < ds.size(); ++i) {
            const auto v = model::vectorize_attributes(ds.metas[i], schema);
            std::copy(v.begin(), v.end(), ctx.row(i));
        }
        return ctx;
    }
    if (mode_uses_text(cfg.mode)) {
        const auto emb_path = cfg.out_path() / emb_file_name(cfg.mode);
        if (!std::filesystem::exists(emb_path)) {
            throw ConfigValidationError("embedding store not found at " + emb_path.string() +
                                        "; run `clic embed` first");
        }
        const auto store = textenc::load_embedding_file(emb_path, textenc::kTextDim);
        model::Mat ctx(ds.size(), store.dim());
        for (int i = 0; i < ds.size(); ++i) {
            const std::vector<float>* v = store.find(ds.ids[i]);
            if (v == nullptr) {
                throw ProviderUnavailable("no embedding for record '" + ds.ids[i] + "' in " +
                                          emb_path.string());
            }
            std::copy(v->begin(), v->end(), ctx.row(i));
        }
        return ctx;
    }
    return {};
}

model::ModelConfig model_config_for(const RunConfig& cfg, const model::AttrSchema& schema) {
    model::ModelConfig mc;
    mc.mode = cfg.mode;
    mc.input_leads = 12;
    mc.attr_dim = cfg.mode == model::Mode::EcgAttr ? schema.dim() : 0;
    return mc;
}

}  // namespace

void write_texts(const std::filesystem::path& path,
                 const std::vector<textgen::ContextText>& texts) {
    std::ostringstream out;
    for (const auto& t : texts) {
        nlohmann::json j;
        j["id"] = t.id;
        j["provenance"] = textgen::provenance_name(t.provenance);
        j["text"] = t.text;
        if (t.params.has_value()) {
            j["model"] = t.params->model;
            j["temperature"] = t.params->temperature;
            j["prompt_hash"] = t.params->prompt_hash;
        }
        out << j.dump() << '\n';
    }
    write_file(path, out.str());
}

std::vector<textgen::ContextText> read_texts(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::vector<textgen::ContextText> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        textgen::ContextText t;
        t.id = j.at("id").get<std::string>();
        t.provenance = textgen::provenance_from_name(j.at("provenance").get<std::string>());
        t.text = j.at("text").get<std::string>();
        if (j.contains("prompt_hash")) {
            textgen::GeneratorParams p;
            p.model = j.value("model", std::string{});
            p.temperature = j.value("temperature", 0.0);
            p.prompt_hash = j["prompt_hash"].get<std::string>();
            t.params = p;
        }
        out.push_back(std::move(t));
    }
    return out;
}

void run_synth(const RunConfig& cfg) {
    if (!cfg.synth.has_value()) {
        throw ConfigValidationError("synth subcommand needs a synth section in the config");
    }
    data::write_synthetic_ptbxl(*cfg.synth, cfg.synth->seed, cfg.data_root_path());
    std::cout << "synth: wrote " << cfg.synth->n_records << " records to "
              << cfg.data_root_path().string() << '\n';
}

void run_prepare(const RunConfig& cfg) {
    const auto root = cfg.data_root_path();
    const auto table = data::load_statement_table(root / "scp_statements.csv");
    const auto rows = data::load_ptbxl_metadata(root / "ptbxl_database.csv", table);
    const auto manifest = data::build_manifest(rows, table, cfg.label_threshold);
    data::write_manifest(cfg.out_path() / "manifest.jsonl", manifest);

    std::array<int, data::kNumClasses> counts{};
    for (const auto& rec : manifest) ++counts[static_cast<int>(rec.label)];
    std::cout << "prepare: retained " << manifest.size() << " of " << rows.size() << " records (";
    for (int c = 0; c < data::kNumClasses; ++c) {
        std::cout << data::kClassNames[c] << ' ' << counts[c]
                  << (c + 1 < data::kNumClasses ? ", " : ")\n");
    }
}

void run_text_dtt(const RunConfig& cfg) {
    const auto manifest = load_manifest_checked(cfg);
    const auto table = data::load_statement_table(cfg.data_root_path() / "scp_statements.csv");
    std::vector<textgen::ContextText> texts;
    texts.reserve(manifest.size());
    for (const auto& rec : manifest) texts.push_back(textgen::render_dtt(rec.meta, table));
    write_texts(cfg.out_path() / "texts_dtt.jsonl", texts);
    std::cout << "text-dtt: wrote " << texts.size() << " texts\n";
}

void run_text_llm(const RunConfig& cfg) {
    if (!cfg.llm.has_value()) {
        throw ConfigValidationError("text-llm needs an llm section in the config");
    }
    const auto manifest = load_manifest_checked(cfg);
    const auto table = data::load_statement_table(cfg.data_root_path() / "scp_statements.csv");

    textgen::ReportCache cache(cfg.out_path() / "llm_cache.jsonl");
    textgen::LlmClient client(*cfg.llm);

    // generation is parallel up to the jobs bound; output keeps manifest order
    std::vector<textgen::ContextText> texts(manifest.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(manifest.size());
    const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(manifest.size())));
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < manifest.size(); i = next.fetch_add(1)) {
                try {
                    const auto prompt = textgen::build_prompt(manifest[i].meta, table);
                    auto text = client.generate(manifest[i].id, prompt, &cache);
                    text.id = manifest[i].id;
                    texts[i] = std::move(text);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    write_texts(cfg.out_path() / "texts_llm.jsonl", texts);
    std::cout << "text-llm: wrote " << texts.size() << " texts (cache size " << cache.size()
              << ")\n";
}

void run_embed(const RunConfig& cfg) {
    if (!mode_uses_text(cfg.mode)) {
        std::cout << "embed: mode " << model::mode_name(cfg.mode) << " uses no text embeddings\n";
        return;
    }
    const auto texts_path = cfg.out_path() / texts_file_name(cfg.mode);
    if (!std::filesystem::exists(texts_path)) {
        throw ConfigValidationError("texts not found at " + texts_path.string() +
                                    "; run the text stage first");
    }
    const auto texts = read_texts(texts_path);

    textenc::EmbeddingStore store;
    switch (cfg.text_provider.kind) {
        case TextProviderConfig::Kind::Hash: {
            textenc::HashEmbedder embedder;
            store = textenc::EmbeddingStore(embedder.dim(), embedder.provider_tag());
            for (const auto& t : texts) store.put(t.id, embedder.embed_text(t.text));
            break;
        }
        case TextProviderConfig::Kind::Http: {
            textenc::HttpEmbedder embedder(cfg.text_provider.base_url, cfg.text_provider.model);
            store = textenc::EmbeddingStore(embedder.dim(), embedder.provider_tag());
            for (const auto& t : texts) store.put(t.id, embedder.embed_text(t.text));
            break;
        }
        case TextProviderConfig::Kind::Precomputed: {
            std::filesystem::path p(cfg.text_provider.path);
            if (p.is_relative()) p = cfg.config_dir / p;
            store = textenc::load_embedding_file(p, textenc::kTextDim);
            break;
        }
    }
    textenc::write_embedding_file(store, cfg.out_path() / emb_file_name(cfg.mode));
    std::cout << "embed: stored " << store.size() << " vectors (provider "
              << store.provider_tag() << ")\n";
}

void run_train(const RunConfig& cfg) {
    const PipelineData pd = load_pipeline_data(cfg);
    const model::AttrSchema schema = schema_from_train(pd);
    const model::Mat context = build_context(cfg, pd, schema);

    training::ExperimentSpec spec;
    spec.model = model_config_for(cfg, schema);
    spec.train = cfg.train;
    spec.data = &pd.dataset;
    spec.train_idx = pd.train_idx;
    spec.val_idx = pd.val_idx;
    spec.test_idx = pd.test_idx;
    spec.context = context.rows > 0 ? &context : nullptr;
    spec.schema = schema;
    spec.out_dir = cfg.out_path() / "runs";
    spec.jobs = cfg.jobs;

    const auto result = training::run_experiment(spec);
    for (const auto& run : result.runs) {
        std::cout << "train: mode " << model::mode_name(cfg.mode) << " seed " << run.seed
                  << " stopped at epoch " << run.train.stopped_epoch << " (best "
                  << run.train.best_epoch << "), test macro-F1 "
                  << format_fixed(run.test_report.macro_f1, 3) << ", accuracy "
                  << format_fixed(run.test_report.accuracy, 3) << '\n';
    }
}

void run_eval(const RunConfig& cfg) {
    const PipelineData pd = load_pipeline_data(cfg);
    for (const std::uint64_t seed : cfg.train.seeds) {
        const auto run_dir =
            cfg.out_path() / "runs" / model::mode_name(cfg.mode) / std::to_string(seed);
        auto loaded = model::load_checkpoint(run_dir / "checkpoint.bin");
        const model::Mat context = build_context(cfg, pd, loaded.schema);
        const auto eval = training::evaluate(loaded.net, pd.dataset, pd.test_idx,
                                             context.rows > 0 ? &context : nullptr,
                                             cfg.train.batch_size);
        std::vector<data::Superclass> labels;
        for (int i : pd.test_idx) labels.push_back(pd.dataset.labels[i]);
        const auto report = metrics::summarize(metrics::confusion_matrix(eval.preds, labels));
        write_file(run_dir / "metrics.json",
                   metrics::metrics_report_json(model::mode_name(cfg.mode), seed, report));
        std::cout << "eval: seed " << seed << " macro-F1 " << format_fixed(report.macro_f1, 3)
                  << ", accuracy " << format_fixed(report.accuracy, 3) << '\n';
    }
}

void run_export_embeddings(const RunConfig& cfg, const std::string& split, std::uint64_t seed) {
    const PipelineData pd = load_pipeline_data(cfg);
    const auto run_dir = cfg.out_path() / "runs" / model::mode_name(cfg.mode) / std::to_string(seed);
    auto loaded = model::load_checkpoint(run_dir / "checkpoint.bin");
    const model::Mat context = build_context(cfg, pd, loaded.schema);

    const std::vector<int>* idx = nullptr;
    if (split == "train") idx = &pd.train_idx;
    else if (split == "val") idx = &pd.val_idx;
    else if (split == "test") idx = &pd.test_idx;
    else throw ConfigValidationError("split must be train|val|test");

    const std::string csv = metrics::export_embeddings_csv(
        loaded.net, pd.dataset, *idx, context.rows > 0 ? &context : nullptr,
        cfg.train.batch_size);
    const auto path = cfg.out_path() / ("embeddings_" + std::string(model::mode_name(cfg.mode)) +
                                        "_" + std::to_string(seed) + "_" + split + ".csv");
    write_file(path, csv);
    std::cout << "export-embeddings: wrote " << path.string() << '\n';
}

std::string run_report(const RunConfig& cfg, metrics::TableFormat format) {
    static constexpr model::Mode kOrder[] = {model::Mode::EcgOnly, model::Mode::EcgAttr,
                                             model::Mode::ClicDtT, model::Mode::ClicLLM};
    std::vector<std::pair<std::string, metrics::AggregateReport>> table;
    for (const auto mode : kOrder) {
        const auto mode_dir = cfg.out_path() / "runs" / model::mode_name(mode);
        if (!std::filesystem::exists(mode_dir)) continue;
        std::vector<metrics::MetricsReport> reports;
        std::vector<std::string> seeds;
        for (const auto& entry : std::filesystem::directory_iterator(mode_dir)) {
            if (entry.is_directory()) seeds.push_back(entry.path().filename().string());
        }
        std::sort(seeds.begin(), seeds.end());
        for (const auto& seed : seeds) {
            const auto file = mode_dir / seed / "metrics.json";
            if (std::filesystem::exists(file)) {
                reports.push_back(metrics::metrics_report_from_json(read_file(file)));
            }
        }
        if (!reports.empty()) {
            table.emplace_back(model::mode_name(mode), metrics::aggregate_runs(reports));
        }
    }
    if (table.empty()) throw ConfigValidationError("no run metrics found under out_dir/runs");

    const std::string text = metrics::render_table(table, format);
    const char* ext = format == metrics::TableFormat::Markdown
                          ? "md"
                          : (format == metrics::TableFormat::Csv ? "csv" : "json");
    write_file(cfg.out_path() / ("report." + std::string(ext)), text);
    return text;
}

}  // namespace clic::cli
