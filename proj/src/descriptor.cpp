#include "featkit/desc/descriptor.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace featkit {

static_assert(std::endian::native == std::endian::little,
              "container IO assumes a little-endian host");

const char* descriptor_tag(DescriptorKind kind) {
    switch (kind) {
        case DescriptorKind::sift: return "sift";
        case DescriptorKind::surf: return "surf";
        case DescriptorKind::brisk: return "brisk";
        case DescriptorKind::freak: return "freak";
    }
    return "?";
}

DescriptorKind descriptor_from_tag(const std::string& tag) {
    if (tag == "sift") return DescriptorKind::sift;
    if (tag == "surf") return DescriptorKind::surf;
    if (tag == "brisk") return DescriptorKind::brisk;
    if (tag == "freak") return DescriptorKind::freak;
    raise(ErrorCode::invalid_parameter, "unknown descriptor tag '" + tag + "'");
}

bool descriptor_is_binary(DescriptorKind kind) {
    return kind == DescriptorKind::brisk || kind == DescriptorKind::freak;
}

int descriptor_dim(DescriptorKind kind) {
    switch (kind) {
        case DescriptorKind::sift: return 128;
        case DescriptorKind::surf: return 64;
        case DescriptorKind::brisk: return 512;
        case DescriptorKind::freak: return 512;
    }
    return 0;
}

void save_fdsc(const std::string& path, const DescriptorSet& set) {
    if (set.dim != descriptor_dim(set.kind))
        raise(ErrorCode::invalid_parameter, "descriptor set has wrong dim");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        raise(ErrorCode::io, path + ": cannot open for writing");
    out.write("FDSC", 4);
    uint8_t version = 1, kind = static_cast<uint8_t>(set.kind);
    out.write(reinterpret_cast<const char*>(&version), 1);
    out.write(reinterpret_cast<const char*>(&kind), 1);
    uint32_t count = static_cast<uint32_t>(set.size());
    uint16_t dim = static_cast<uint16_t>(set.dim);
    out.write(reinterpret_cast<const char*>(&count), 4);
    out.write(reinterpret_cast<const char*>(&dim), 2);
    if (set.binary())
        out.write(reinterpret_cast<const char*>(set.bdata.data()),
                  static_cast<std::streamsize>(set.bdata.size()));
    else
        out.write(reinterpret_cast<const char*>(set.fdata.data()),
                  static_cast<std::streamsize>(set.fdata.size() * sizeof(float)));
    if (!out)
        raise(ErrorCode::io, path + ": write failed");
}

DescriptorSet load_fdsc(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(ErrorCode::io, path + ": offset 0: cannot open file");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "FDSC", 4) != 0)
        raise(ErrorCode::io, path + ": offset 0: bad magic");
    uint8_t version = 0, kind = 0;
    in.read(reinterpret_cast<char*>(&version), 1);
    in.read(reinterpret_cast<char*>(&kind), 1);
    if (!in || version != 1)
        raise(ErrorCode::io, path + ": offset 4: unsupported version " +
                                 std::to_string(version));
    if (kind > 3)
        raise(ErrorCode::io, path + ": offset 5: unknown descriptor kind " +
                                 std::to_string(kind));
    uint32_t count = 0;
    uint16_t dim = 0;
    in.read(reinterpret_cast<char*>(&count), 4);
    in.read(reinterpret_cast<char*>(&dim), 2);
    if (!in)
        raise(ErrorCode::io, path + ": offset 6: truncated header");

    DescriptorSet set;
    set.kind = static_cast<DescriptorKind>(kind);
    set.dim = dim;
    if (dim != descriptor_dim(set.kind))
        raise(ErrorCode::io, path + ": offset 10: dim " + std::to_string(dim) +
                                 " does not match kind " + descriptor_tag(set.kind));
    size_t payload = static_cast<size_t>(count) * set.bytes_per_row();
    if (set.binary()) {
        set.bdata.resize(payload);
        in.read(reinterpret_cast<char*>(set.bdata.data()),
                static_cast<std::streamsize>(payload));
    } else {
        set.fdata.resize(static_cast<size_t>(count) * dim);
        in.read(reinterpret_cast<char*>(set.fdata.data()),
                static_cast<std::streamsize>(payload));
    }
    if (static_cast<size_t>(in.gcount()) != payload)
        raise(ErrorCode::io,
              path + ": offset 12: truncated payload (expected " +
                  std::to_string(payload) + " bytes)");
    // rows without keypoints: synthesize placeholders to keep alignment
    set.keypoints.resize(count);
    return set;
}

} // namespace featkit
