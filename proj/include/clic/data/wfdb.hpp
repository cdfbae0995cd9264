#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "clic/data/types.hpp"

namespace clic::data {

// Parse a WFDB header (.hea). Only storage format 16 is accepted.
SignalSpec parse_header(const std::string& text);

// Decode a format-16 .dat payload: 16-bit little-endian two's complement,
// one frame per sample instant, signals interleaved within the frame.
// Physical value = (raw - baseline) / gain, in mV. Raw -32768 is the WFDB
// missing-sample sentinel and is rejected.
EcgRecord decode_signal(const SignalSpec& spec, const std::vector<std::uint8_t>& bytes);

// Inverse of decode_signal for round trips and the synthetic writer.
std::vector<std::uint8_t> encode_signal(const SignalSpec& spec, const EcgRecord& record);

std::string render_header(const SignalSpec& spec, const std::vector<std::uint8_t>& dat_bytes);

// Write record_name.hea / record_name.dat under dir.
void write_record(const std::filesystem::path& dir, const SignalSpec& spec,
                  const EcgRecord& record);

// Read .hea and its .dat sibling.
std::pair<SignalSpec, EcgRecord> read_record(const std::filesystem::path& hea_path);

}  // namespace clic::data
