#pragma once

#include <vector>

#include "featkit/geometry.hpp"
#include "featkit/keypoint.hpp"
#include "featkit/match/matching.hpp"

namespace featkit {

struct ImageSize {
    int width;
    int height;
};

// Map a keypoint through a homography: position by the point map, scale by
// sqrt(|det J|) of the local Jacobian; orientation and response carry
// through unchanged.
Keypoint project_keypoint(const Keypoint& kp, const Homography& h);

struct CorrespondenceParams {
    float eps_pos = 2.5f; // pixels
    float tau = 2.f;      // max scale ratio
    float visibility_margin_factor = 2.f; // interior margin = ceil(f * scale)
};

struct Correspondence {
    uint32_t index_a;
    uint32_t index_b;
    float error; // projected position distance, pixels
};

struct CorrespondenceResult {
    std::vector<Correspondence> pairs; // greedy one-to-one, smallest error first
    uint32_t visible_a;
    uint32_t visible_b;
};

// h maps image A coordinates to image B. A keypoint counts as visible when
// its margin-footprint fits its own image and its projection (with
// projected scale) fits the other.
CorrespondenceResult find_correspondences(const std::vector<Keypoint>& kps_a,
                                          const std::vector<Keypoint>& kps_b,
                                          const Homography& h, ImageSize size_a,
                                          ImageSize size_b,
                                          const CorrespondenceParams& params = {});

// |correspondences| / min(visible_a, visible_b); 0 when nothing is visible.
double repeatability(const std::vector<Keypoint>& kps_a,
                     const std::vector<Keypoint>& kps_b, const Homography& h,
                     ImageSize size_a, ImageSize size_b,
                     const CorrespondenceParams& params = {});

struct MatchScore {
    uint32_t n_matches;
    uint32_t n_correct;
};

// A match is correct when the projected query keypoint lands within
// eps_pos of its matched train keypoint.
MatchScore score_matches(const std::vector<Match>& matches,
                         const std::vector<Keypoint>& query_kps,
                         const std::vector<Keypoint>& train_kps,
                         const Homography& h,
                         const CorrespondenceParams& params = {});

} // namespace featkit
