#pragma once

// Brute-force reference implementations ("oracles") that the optimized
// library code is checked against, plus small fixture builders. Everything
// here favours obviousness over speed.

#include <cstdint>
#include <utility>
#include <vector>

#include "featkit/desc/descriptor.hpp"
#include "featkit/image.hpp"

namespace testsup {

featkit::GrayImage random_image(int w, int h, uint64_t seed, float lo = 0.f, float hi = 255.f);

// plain double loop over the inclusive pixel rectangle
double box_sum_naive(const featkit::GrayImage& img, int x0, int y0, int x1, int y1);

// Flood-fill threshold sweep: centroids of connected components whose area
// stays exactly constant across a 2*delta+1 level window, both polarities,
// gated to [min_area, max_area]. Independent reference for region
// stability on clean synthetic shapes.
std::vector<std::pair<double, double>> stable_region_centroids(const featkit::GrayImage& img,
                                                               int delta, int min_area,
                                                               int max_area);

// Brute-force corner score on the 16-pixel radius-3 ring: maximum over all
// contiguous arcs of length >= arc_len whose pixels all clear the threshold
// on one side, of sum(|p - c| - t); negative when no arc qualifies.
float fast_score_naive(const featkit::GrayImage& img, int x, int y, float t, int arc_len);

// Full-sort two-nearest-neighbour reference using the contractual tie
// order (distance, row content hash, index).
struct Knn2Row {
    uint32_t train1;
    float d1;
    uint32_t train2;
    float d2;
};
std::vector<Knn2Row> knn2_naive(const featkit::DescriptorSet& query,
                                const featkit::DescriptorSet& train);

// random descriptor sets for matcher tests
featkit::DescriptorSet random_float_set(size_t rows, featkit::DescriptorKind kind, uint64_t seed);
featkit::DescriptorSet random_binary_set(size_t rows, featkit::DescriptorKind kind, uint64_t seed);

} // namespace testsup
