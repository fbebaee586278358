#pragma once

#include <string>
#include <vector>

#include "featkit/keypoint.hpp"

namespace featkit {

enum class DescriptorKind : uint8_t { sift = 0, surf = 1, brisk = 2, freak = 3 };

const char* descriptor_tag(DescriptorKind kind);
DescriptorKind descriptor_from_tag(const std::string& tag);
bool descriptor_is_binary(DescriptorKind kind);
int descriptor_dim(DescriptorKind kind); // floats, or bits for binary kinds

// Rows of float descriptors (sift, surf) or packed LSB-first bit strings
// (brisk, freak), plus the keypoints they were computed for. Keypoints and
// rows stay index-aligned; multi-orientation keypoints contribute one row
// per orientation.
struct DescriptorSet {
    DescriptorKind kind = DescriptorKind::sift;
    int dim = 0;
    std::vector<float> fdata;
    std::vector<uint8_t> bdata;
    std::vector<Keypoint> keypoints;

    bool binary() const { return descriptor_is_binary(kind); }
    size_t bytes_per_row() const {
        return binary() ? static_cast<size_t>(dim) / 8
                        : static_cast<size_t>(dim) * sizeof(float);
    }
    size_t size() const { return keypoints.size(); }
    const float* frow(size_t i) const { return fdata.data() + i * dim; }
    const uint8_t* brow(size_t i) const {
        return bdata.data() + i * (static_cast<size_t>(dim) / 8);
    }
};

// Container format: magic "FDSC", version byte, kind byte, u32 count and
// u16 dim (little-endian), then rows as float32 LE or packed bits.
// Keypoints are not part of the container.
void save_fdsc(const std::string& path, const DescriptorSet& set);
DescriptorSet load_fdsc(const std::string& path);

} // namespace featkit
