#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace clic {

std::string read_file(const std::filesystem::path& path);
std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
void write_binary_file(const std::filesystem::path& path,
                       const std::vector<std::uint8_t>& bytes);

void log_warning(const std::string& message);

// number formatting shared by text generation and manifests: integers render
// without a decimal point, everything else with one decimal
std::string format_number(double value);
std::string format_fixed(double value, int decimals);

}  // namespace clic
