#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clic/cli/config.hpp"
#include "clic/metrics/metrics.hpp"
#include "clic/textgen/context_text.hpp"

namespace clic::cli {

// Pipeline stages, one per subcommand. All are idempotent: re-running after
// completion overwrites the same outputs.
void run_synth(const RunConfig& cfg);
void run_prepare(const RunConfig& cfg);
void run_text_dtt(const RunConfig& cfg);
void run_text_llm(const RunConfig& cfg);
void run_embed(const RunConfig& cfg);
void run_train(const RunConfig& cfg);
void run_eval(const RunConfig& cfg);
void run_export_embeddings(const RunConfig& cfg, const std::string& split, std::uint64_t seed);
std::string run_report(const RunConfig& cfg, metrics::TableFormat format);

// texts_{dtt,llm}.jsonl helpers (shared with tests)
void write_texts(const std::filesystem::path& path,
                 const std::vector<textgen::ContextText>& texts);
std::vector<textgen::ContextText> read_texts(const std::filesystem::path& path);

}  // namespace clic::cli
