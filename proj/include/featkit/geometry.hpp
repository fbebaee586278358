#pragma once

#include <array>
#include <string>
#include <vector>

#include "featkit/image.hpp"

namespace featkit {

struct Point2 {
    double x;
    double y;
};

// Row-major 3x3 planar homography. Maps source coordinates to destination;
// canonical form is scaled so m[8] == 1 where possible.
struct Homography {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Homography identity() { return {}; }
    static Homography translation(double tx, double ty);
    static Homography scaling(double sx, double sy);
    // rotation about a pivot, positive angle rotates +x toward +y
    static Homography rotation(double radians, double cx = 0.0, double cy = 0.0);

    Point2 apply(const Point2& p) const;
    Homography inverse() const;
    Homography composed_with(const Homography& inner) const; // this ∘ inner
    Homography normalized() const;

    // Jacobian of the mapping at p (d(dst)/d(src)), used for scale transfer.
    std::array<double, 4> jacobian(const Point2& p) const;
};

Homography load_homography(const std::string& path);
void save_homography(const std::string& path, const Homography& h);

struct WarpResult {
    GrayImage image;
    // 1 where the inverse-mapped sample fell inside the source, else 0.
    std::vector<uint8_t> valid;

    bool valid_at(int x, int y) const {
        return valid[static_cast<size_t>(y) * image.width() + x] != 0;
    }
};

// Resample src through H (src -> dst) onto a dst_width x dst_height canvas.
WarpResult warp_homography(const GrayImage& src, const Homography& h,
                           int dst_width, int dst_height);

} // namespace featkit
