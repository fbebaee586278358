#pragma once

#include <string>
#include <vector>

#include "featkit/geometry.hpp"
#include "featkit/image.hpp"

namespace featkit {

// One synthesized test condition: the transformed image plus the ground
// truth homography mapping reference coordinates into it.
struct Condition {
    std::string family;
    std::string label; // short form used in reports, e.g. "+4ev", "30deg"
    double value;      // numeric parameter behind the label
    GrayImage image;
    Homography h; // reference -> test
};

// Photometric gain steps of 2^(ev/4); geometry untouched.
std::vector<Condition> make_exposure_conditions(const GrayImage& img,
                                                const std::vector<double>& evs);

// Synthetic out-of-plane rotation about the vertical axis through the image
// center: K * R_y(angle) * K^-1 with focal length = image width, re-centered
// so the center pixel is a fixpoint. Canvas keeps the input size.
Homography viewpoint_homography(int width, int height, double degrees);
std::vector<Condition> make_viewpoint_conditions(const GrayImage& img,
                                                 const std::vector<double>& degs);

// In-plane rotation about the center onto a canvas sized to the rotated
// corner bounding box (a 90-degree rotation permutes pixels exactly).
std::vector<Condition> make_rotation_conditions(const GrayImage& img,
                                                const std::vector<double>& degs);

// Uniform rescaling about the origin.
std::vector<Condition> make_scale_conditions(const GrayImage& img,
                                             const std::vector<double>& factors);

std::vector<Condition> make_conditions(const GrayImage& img, const std::string& family,
                                       const std::vector<double>& values);

} // namespace featkit
