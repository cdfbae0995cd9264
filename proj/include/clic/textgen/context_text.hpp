#pragma once

#include <optional>
#include <string>

#include "clic/data/types.hpp"

namespace clic::textgen {

enum class TextProvenance { DataToText, Llm };

const char* provenance_name(TextProvenance p);
TextProvenance provenance_from_name(const std::string& name);

struct GeneratorParams {
    std::string model;
    double temperature = 0.0;
    std::string prompt_hash;

    bool operator==(const GeneratorParams&) const = default;
};

struct ContextText {
    std::string id;
    std::string text;
    TextProvenance provenance = TextProvenance::DataToText;
    std::optional<GeneratorParams> params;  // LLM texts only
};

struct PromptMessages {
    std::string system;
    std::string user;
};

// Deterministic template verbalization of acquisition-time metadata. The
// wording below is the fixed contract:
//   "The patient is a {age}-year-old {sex}."         (age clause dropped when absent)
//   "The body mass index is {bmi} kg/m2 ({category})."   (omitted when BMI absent)
//   "The ECG was recorded with the {device} device." (omitted when absent)
//   "Recorded rhythm: {descriptions joined by '; '}."     (omitted when empty)
//   "Signal morphology: {descriptions joined by '; '}."   (omitted when empty)
// Sentences are joined by single spaces; unknown sex renders as
// "patient of unrecorded sex".
ContextText render_dtt(const data::PatientMeta& meta, const data::StatementTable& table);

// Chat messages for the prompt-guided strategy: a cardiology-specialist
// persona constrained to the provided fields, and a field-per-line user
// message. The diagnostic label never appears.
PromptMessages build_prompt(const data::PatientMeta& meta, const data::StatementTable& table);

}  // namespace clic::textgen
