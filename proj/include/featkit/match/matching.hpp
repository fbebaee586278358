#pragma once

#include <string>
#include <vector>

#include "featkit/desc/descriptor.hpp"

namespace featkit {

struct Match {
    uint32_t query;
    uint32_t train;
    float distance;
};

struct TwoNearest {
    uint32_t train1;
    float d1;
    uint32_t train2;
    float d2;
};

// Row distance: Euclidean for float kinds, bitwise Hamming for binary.
// Kinds must agree (incompatible_descriptor otherwise).
float descriptor_distance(const DescriptorSet& a, size_t i,
                          const DescriptorSet& b, size_t j);

// Exhaustive two-nearest-neighbour search for every query row. Distance
// ties break on a content hash of the train row, then the train index, so
// the result is independent of row order. Needs >= 2 train rows.
std::vector<TwoNearest> knn2(const DescriptorSet& query, const DescriptorSet& train);

// Keep the nearest neighbour iff d1 < ratio * d2 (strict).
std::vector<Match> match_ratio(const DescriptorSet& query, const DescriptorSet& train,
                               float ratio = 0.75f);

void save_matches_csv(const std::string& path, const std::vector<Match>& matches);
std::vector<Match> load_matches_csv(const std::string& path);

} // namespace featkit
