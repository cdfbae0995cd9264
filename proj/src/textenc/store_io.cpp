#include "clic/textenc/store_io.hpp"

#include <cstring>

#include "clic/common/errors.hpp"
#include "clic/common/io.hpp"

namespace clic::textenc {

namespace {

constexpr char kMagic[8] = {'C', 'L', 'I', 'C', 'E', 'M', 'B', '1'};
constexpr std::uint16_t kVersion = 1;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    void take(void* dst, std::size_t n) {
        if (pos_ + n > bytes_.size()) throw TruncatedFile("embedding file ends early");
        std::memcpy(dst, bytes_.data() + pos_, n);
        pos_ += n;
    }
    std::uint16_t u16() {
        std::uint8_t b[2];
        take(b, 2);
        return static_cast<std::uint16_t>(b[0] | b[1] << 8);
    }
    std::uint32_t u32() {
        std::uint8_t b[4];
        take(b, 4);
        return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
               static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
    }
    bool exhausted() const { return pos_ == bytes_.size(); }

private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

void write_embedding_file(const EmbeddingStore& store, const std::filesystem::path& path) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 8);
    put_u16(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(store.dim()));
    put_u32(out, static_cast<std::uint32_t>(store.size()));
    for (const auto& id : store.ids()) {
        if (id.size() > UINT16_MAX) throw InvalidInput("record id too long: " + id);
        put_u16(out, static_cast<std::uint16_t>(id.size()));
        out.insert(out.end(), id.begin(), id.end());
        const std::vector<float>& v = *store.find(id);
        const auto* raw = reinterpret_cast<const std::uint8_t*>(v.data());
        out.insert(out.end(), raw, raw + v.size() * sizeof(float));
    }
    write_binary_file(path, out);
}

EmbeddingStore load_embedding_file(const std::filesystem::path& path, int expected_dim) {
    const auto bytes = read_binary_file(path);
    Reader in(bytes);

    char magic[8];
    in.take(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0) {
        throw BadMagic("not an embedding file: " + path.string());
    }
    const std::uint16_t version = in.u16();
    if (version != kVersion) {
        throw VersionMismatch("embedding file version " + std::to_string(version) +
                              ", supported " + std::to_string(kVersion));
    }
    const std::uint32_t dim = in.u32();
    const std::uint32_t count = in.u32();
    if (expected_dim >= 0 && dim != static_cast<std::uint32_t>(expected_dim)) {
        throw DimensionMismatch("embedding file dim " + std::to_string(dim) + ", expected " +
                                std::to_string(expected_dim));
    }

    EmbeddingStore store(static_cast<int>(dim), "precomputed");
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint16_t id_len = in.u16();
        std::string id(id_len, '\0');
        in.take(id.data(), id_len);
        std::vector<float> v(dim);
        in.take(v.data(), static_cast<std::size_t>(dim) * sizeof(float));
        store.put_raw(id, std::move(v));
    }
    if (!in.exhausted()) throw TruncatedFile("trailing bytes after last record");
    return store;
}

}  // namespace clic::textenc
