#pragma once

#include <cstdint>
#include <vector>

namespace featkit {

struct PatternPoint {
    float x, y;  // unit-scale offsets from the keypoint
    float sigma; // smoothing sigma at unit scale
};

struct PatternPair {
    uint16_t a, b; // point indices, a < b
    float dist;    // unit-scale distance
};

// Concentric sampling pattern: ring radii {0, 2.9, 4.9, 7.4, 10.8} with
// {1, 10, 14, 15, 20} points, smoothing 1.3 * r * sin(pi/n) per ring
// (0.65 at the center). Comparison bits use the 512 closest pairs under
// the split distance; orientation uses every pair beyond it.
struct BriskPattern {
    std::vector<PatternPoint> points;     // 60
    std::vector<PatternPair> short_pairs; // 512, enumeration order
    std::vector<PatternPair> long_pairs;
    float split_distance;
    float margin; // max |point| + sample window extent, unit scale

    static const BriskPattern& instance();
};

// Retinal pattern: 8 rings (outer to center) of {6,...,6,1} points with
// staggered half-phase between rings, radii shrinking from 2/3 to 0 and
// smoothing proportional to the ring radius. Bits use 512 pairs picked
// from the distance-descending pair list under a usage cap per point
// (cap raised in sweeps until 512 pairs exist); orientation uses 9
// symmetric pairs in each of the 5 outer rings.
struct FreakPattern {
    std::vector<PatternPoint> points;          // 43
    std::vector<PatternPair> pairs;            // 512, selection order
    std::vector<PatternPair> orientation_pairs; // 45
    float margin; // unit scale

    static const FreakPattern& instance();
};

} // namespace featkit
