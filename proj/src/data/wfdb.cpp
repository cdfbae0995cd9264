#include "clic/data/wfdb.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "clic/common/errors.hpp"
#include "clic/common/io.hpp"

namespace clic::data {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& tok, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || tok.empty()) {
        throw MalformedHeader(std::string("non-numeric ") + what + ": '" + tok + "'");
    }
    return v;
}

long parse_long(const std::string& tok, const char* what) {
    long v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) {
        throw MalformedHeader(std::string("non-numeric ") + what + ": '" + tok + "'");
    }
    return v;
}

// Gain token grammar: gain, optionally "(baseline)", optionally "/units",
// e.g. "1000.0(0)/mV". Returns (gain, baseline if present).
std::pair<double, std::optional<int>> parse_gain_token(const std::string& tok) {
    std::size_t p = 0;
    while (p < tok.size() && tok[p] != '(' && tok[p] != '/') ++p;
    const double gain = parse_double(tok.substr(0, p), "gain");
    std::optional<int> baseline;
    if (p < tok.size() && tok[p] == '(') {
        const std::size_t close = tok.find(')', p);
        if (close == std::string::npos) throw MalformedHeader("unterminated baseline in gain field");
        baseline = static_cast<int>(parse_long(tok.substr(p + 1, close - p - 1), "baseline"));
        p = close + 1;
    }
    if (p < tok.size() && tok[p] != '/') {
        throw MalformedHeader("trailing junk in gain field: '" + tok + "'");
    }
    return {gain, baseline};
}

}  // namespace

SignalSpec parse_header(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::istringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            lines.push_back(line);
        }
    }
    if (lines.empty()) throw MalformedHeader("empty header");

    const auto rec = tokenize(lines[0]);
    if (rec.size() < 4) throw MalformedHeader("record line needs: name n_signals fs n_samples");

    SignalSpec spec;
    spec.record_name = rec[0];
    spec.n_signals = static_cast<int>(parse_long(rec[1], "n_signals"));
    spec.sampling_rate = parse_double(rec[2], "sampling_rate");
    spec.n_samples = static_cast<int>(parse_long(rec[3], "n_samples"));
    if (spec.n_signals <= 0) throw MalformedHeader("n_signals must be positive");
    if (spec.n_samples <= 0) throw MalformedHeader("n_samples must be positive");
    if (spec.sampling_rate <= 0) throw MalformedHeader("sampling_rate must be positive");
    if (lines.size() < static_cast<std::size_t>(spec.n_signals) + 1) {
        throw MalformedHeader("fewer signal lines than n_signals");
    }

    for (int i = 0; i < spec.n_signals; ++i) {
        const auto tok = tokenize(lines[1 + i]);
        if (tok.size() < 3) throw MalformedHeader("signal line needs: file format gain");
        SignalInfo info;
        info.file_name = tok[0];
        info.storage_format = static_cast<int>(parse_long(tok[1], "storage format"));
        if (info.storage_format != 16) {
            throw UnsupportedFormat("storage format " + tok[1] + " not supported (format 16 only)");
        }
        auto [gain, baseline] = parse_gain_token(tok[2]);
        if (gain <= 0) throw MalformedHeader("gain must be positive");
        info.gain = gain;
        if (baseline.has_value()) {
            info.baseline = *baseline;
        } else if (tok.size() >= 5) {
            info.baseline = static_cast<int>(parse_long(tok[4], "adc zero"));
        }
        if (tok.size() >= 9) {
            info.lead_name = tok[8];
            for (std::size_t j = 9; j < tok.size(); ++j) info.lead_name += " " + tok[j];
        } else if (tok.size() >= 4 && tok.size() < 9) {
            // minimal grammar: lead name as last token when the full WFDB
            // field set is not present
            info.lead_name = tok.back();
        }
        spec.signals.push_back(std::move(info));
    }
    return spec;
}

EcgRecord decode_signal(const SignalSpec& spec, const std::vector<std::uint8_t>& bytes) {
    const std::size_t expect =
        2ull * static_cast<std::size_t>(spec.n_signals) * static_cast<std::size_t>(spec.n_samples);
    if (bytes.size() != expect) {
        throw LengthMismatch("dat payload is " + std::to_string(bytes.size()) + " bytes, expected " +
                             std::to_string(expect));
    }
    if (spec.signals.size() != static_cast<std::size_t>(spec.n_signals)) {
        throw MalformedHeader("spec signal list inconsistent with n_signals");
    }

    EcgRecord rec;
    rec.id = spec.record_name;
    rec.n_leads = spec.n_signals;
    rec.n_samples = spec.n_samples;
    rec.sampling_rate = spec.sampling_rate;
    rec.samples.resize(static_cast<std::size_t>(spec.n_signals) * spec.n_samples);

    for (int t = 0; t < spec.n_samples; ++t) {
        for (int s = 0; s < spec.n_signals; ++s) {
            const std::size_t off = 2ull * (static_cast<std::size_t>(t) * spec.n_signals + s);
            const std::uint16_t u = static_cast<std::uint16_t>(bytes[off]) |
                                    static_cast<std::uint16_t>(bytes[off + 1]) << 8;
            const std::int16_t raw = static_cast<std::int16_t>(u);
            if (raw == -32768) {
                throw MissingSample("missing-sample sentinel at signal " + std::to_string(s) +
                                    ", sample " + std::to_string(t));
            }
            const auto& info = spec.signals[s];
            rec.at(s, t) = (static_cast<double>(raw) - info.baseline) / info.gain;
        }
    }
    return rec;
}

std::vector<std::uint8_t> encode_signal(const SignalSpec& spec, const EcgRecord& record) {
    if (record.n_leads != spec.n_signals || record.n_samples != spec.n_samples) {
        throw LengthMismatch("record shape does not match spec");
    }
    std::vector<std::uint8_t> bytes(2ull * spec.n_signals * spec.n_samples);
    for (int t = 0; t < spec.n_samples; ++t) {
        for (int s = 0; s < spec.n_signals; ++s) {
            const auto& info = spec.signals[s];
            const double scaled = record.at(s, t) * info.gain + info.baseline;
            const long long raw = std::llround(scaled);
            if (raw < -32767 || raw > 32767) {
                throw InvalidInput("sample out of range for format 16: " + std::to_string(raw));
            }
            const std::uint16_t u = static_cast<std::uint16_t>(static_cast<std::int16_t>(raw));
            const std::size_t off = 2ull * (static_cast<std::size_t>(t) * spec.n_signals + s);
            bytes[off] = static_cast<std::uint8_t>(u & 0xff);
            bytes[off + 1] = static_cast<std::uint8_t>(u >> 8);
        }
    }
    return bytes;
}

namespace {

std::string format_rate(double fs) {
    char buf[32];
    if (fs == std::floor(fs)) {
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(fs));
    } else {
        std::snprintf(buf, sizeof(buf), "%g", fs);
    }
    return buf;
}

std::int16_t raw_at(const std::vector<std::uint8_t>& bytes, int n_signals, int s, int t) {
    const std::size_t off = 2ull * (static_cast<std::size_t>(t) * n_signals + s);
    return static_cast<std::int16_t>(static_cast<std::uint16_t>(bytes[off]) |
                                     static_cast<std::uint16_t>(bytes[off + 1]) << 8);
}

}  // namespace

std::string render_header(const SignalSpec& spec, const std::vector<std::uint8_t>& dat_bytes) {
    std::ostringstream out;
    out << spec.record_name << ' ' << spec.n_signals << ' ' << format_rate(spec.sampling_rate)
        << ' ' << spec.n_samples << '\n';
    for (int s = 0; s < spec.n_signals; ++s) {
        const auto& info = spec.signals[s];
        // WFDB per-signal checksum: 16-bit sum of raw samples
        std::int32_t sum = 0;
        std::int16_t init = 0;
        if (spec.n_samples > 0) {
            init = raw_at(dat_bytes, spec.n_signals, s, 0);
            for (int t = 0; t < spec.n_samples; ++t) {
                sum = static_cast<std::int16_t>(sum + raw_at(dat_bytes, spec.n_signals, s, t));
            }
        }
        char gain_buf[48];
        if (info.gain == std::floor(info.gain)) {
            std::snprintf(gain_buf, sizeof(gain_buf), "%lld.0(%d)/mV",
                          static_cast<long long>(info.gain), info.baseline);
        } else {
            std::snprintf(gain_buf, sizeof(gain_buf), "%g(%d)/mV", info.gain, info.baseline);
        }
        out << info.file_name << " 16 " << gain_buf << " 16 0 " << init << ' ' << sum << " 0 "
            << (info.lead_name.empty() ? std::string("S") + std::to_string(s) : info.lead_name)
            << '\n';
    }
    return out.str();
}

void write_record(const std::filesystem::path& dir, const SignalSpec& spec,
                  const EcgRecord& record) {
    std::filesystem::create_directories(dir);
    const auto bytes = encode_signal(spec, record);
    write_file(dir / (spec.record_name + ".hea"), render_header(spec, bytes));
    write_binary_file(dir / (spec.record_name + ".dat"), bytes);
}

std::pair<SignalSpec, EcgRecord> read_record(const std::filesystem::path& hea_path) {
    SignalSpec spec = parse_header(read_file(hea_path));
    std::filesystem::path dat = hea_path;
    dat.replace_extension(".dat");
    if (!spec.signals.empty() && !spec.signals[0].file_name.empty()) {
        dat = hea_path.parent_path() / spec.signals[0].file_name;
    }
    EcgRecord rec = decode_signal(spec, read_binary_file(dat));
    return {std::move(spec), std::move(rec)};
}

}  // namespace clic::data
