#pragma once

#include <string>
#include <vector>

#include "featkit/error.hpp"

namespace featkit {

enum class DetectorKind { dog, fast_hessian, mser, brisk };

const char* detector_tag(DetectorKind kind);
DetectorKind detector_from_tag(const std::string& tag);

struct Keypoint {
    float x = 0.f;
    float y = 0.f;
    float scale = 1.f;        // > 0, in input-image pixels
    float orientation = 0.f;  // radians, (-pi, pi]; 0 until assigned
    float response = 0.f;     // >= 0, detector-specific strength
    int octave = 0;           // pyramid octave / scale layer index
    DetectorKind detector = DetectorKind::dog;
};

// Canonical output order: response desc, then y, x, scale asc.
void sort_keypoints(std::vector<Keypoint>& kps);

void save_keypoints_csv(const std::string& path, const std::vector<Keypoint>& kps);
std::vector<Keypoint> load_keypoints_csv(const std::string& path);

} // namespace featkit
