#include "clic/textgen/context_text.hpp"

#include <sstream>

#include "clic/common/errors.hpp"
#include "clic/common/io.hpp"
#include "clic/textgen/bmi.hpp"

namespace clic::textgen {

const char* provenance_name(TextProvenance p) {
    return p == TextProvenance::DataToText ? "dtt" : "llm";
}

TextProvenance provenance_from_name(const std::string& name) {
    if (name == "dtt") return TextProvenance::DataToText;
    if (name == "llm") return TextProvenance::Llm;
    throw ParseError("unknown text provenance '" + name + "'");
}

namespace {

std::string sex_phrase(data::Sex sex) {
    switch (sex) {
        case data::Sex::Male: return "male";
        case data::Sex::Female: return "female";
        default: return "patient of unrecorded sex";
    }
}

std::vector<std::string> describe_codes(const std::vector<std::string>& codes,
                                        const data::StatementTable& table) {
    std::vector<std::string> out;
    for (const auto& code : codes) {
        const data::StatementInfo* info = table.find(code);
        if (info == nullptr || info->description.empty()) {
            log_warning("no description for scp code '" + code + "', skipped in text");
            continue;
        }
        out.push_back(info->description);
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

ContextText render_dtt(const data::PatientMeta& meta, const data::StatementTable& table) {
    std::vector<std::string> sentences;

    {
        std::string s = "The patient is a ";
        if (meta.age.has_value()) s += format_number(*meta.age) + "-year-old ";
        s += sex_phrase(meta.sex) + ".";
        sentences.push_back(std::move(s));
    }

    const auto bmi = compute_bmi(meta.weight, meta.height);
    if (bmi.has_value()) {
        sentences.push_back("The body mass index is " + format_fixed(*bmi, 1) + " kg/m2 (" +
                            bmi_category_name(bmi_category(*bmi)) + ").");
    }

    if (meta.device.has_value() && !meta.device->empty()) {
        sentences.push_back("The ECG was recorded with the " + *meta.device + " device.");
    }

    const auto rhythm = describe_codes(meta.rhythm_codes, table);
    if (!rhythm.empty()) sentences.push_back("Recorded rhythm: " + join(rhythm, "; ") + ".");

    const auto form = describe_codes(meta.form_codes, table);
    if (!form.empty()) sentences.push_back("Signal morphology: " + join(form, "; ") + ".");

    ContextText out;
    out.id = meta.id;
    out.text = join(sentences, " ");
    out.provenance = TextProvenance::DataToText;
    return out;
}

PromptMessages build_prompt(const data::PatientMeta& meta, const data::StatementTable& table) {
    PromptMessages msg;
    msg.system =
        "You are a cardiology specialist. Given acquisition-time metadata for a 12-lead ECG, "
        "write a single paragraph that simulates a concise clinical report of the patient "
        "context. You must use only the information provided and avoid generating false "
        "information; never invent measurements (such as heart rate values) or findings that "
        "are not explicitly present in the metadata.";

    std::ostringstream user;
    user << "Patient metadata:\n";
    if (meta.age.has_value()) user << "age_years: " << format_number(*meta.age) << '\n';
    user << "sex: " << sex_phrase(meta.sex) << '\n';
    if (meta.height.has_value()) user << "height_cm: " << format_number(*meta.height) << '\n';
    if (meta.weight.has_value()) user << "weight_kg: " << format_number(*meta.weight) << '\n';
    const auto bmi = compute_bmi(meta.weight, meta.height);
    if (bmi.has_value()) {
        user << "bmi: " << format_fixed(*bmi, 1) << " ("
             << bmi_category_name(bmi_category(*bmi)) << ")\n";
    }
    if (meta.device.has_value() && !meta.device->empty()) {
        user << "collection_device: " << *meta.device << '\n';
    }
    const auto rhythm = describe_codes(meta.rhythm_codes, table);
    if (!rhythm.empty()) user << "rhythm: " << join(rhythm, "; ") << '\n';
    const auto form = describe_codes(meta.form_codes, table);
    if (!form.empty()) user << "morphology: " << join(form, "; ") << '\n';
    msg.user = user.str();
    return msg;
}

}  // namespace clic::textgen
