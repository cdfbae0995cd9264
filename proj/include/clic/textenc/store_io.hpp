#pragma once

#include <filesystem>

#include "clic/textenc/embedding.hpp"

namespace clic::textenc {

// On-disk layout, little-endian:
//   magic  "CLICEMB1"            8 bytes
//   u16    version = 1
//   u32    dim
//   u32    count
//   count records of: u16 id length, id bytes, dim * f32
void write_embedding_file(const EmbeddingStore& store, const std::filesystem::path& path);

// expected_dim < 0 skips the dimension check.
EmbeddingStore load_embedding_file(const std::filesystem::path& path, int expected_dim = -1);

}  // namespace clic::textenc
