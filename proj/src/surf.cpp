#include "featkit/desc/surf.hpp"

#include <cmath>

namespace featkit {

std::vector<float> surf_descriptor(const GrayImage& img, const IntegralImage& ii,
                                   const Keypoint& kp, const SurfParams& params) {
    const int grid = params.grid;
    const int samples = params.samples;
    if (grid < 1 || samples < 1 || !(params.weight_sigma > 0.f))
        raise(ErrorCode::invalid_parameter, "bad descriptor parameters");
    if (!(kp.scale > 0.f))
        raise(ErrorCode::invalid_parameter, "keypoint scale must be positive");
    if (ii.width() != img.width() || ii.height() != img.height())
        raise(ErrorCode::invalid_parameter, "integral image size mismatch");

    const float s = kp.scale;
    const int side = grid * samples; // 20 samples across the window
    const float half = side * 0.5f - 0.5f;
    const int hs = std::max(1, static_cast<int>(std::lround(s)));
    const float cos_t = std::cos(kp.orientation);
    const float sin_t = std::sin(kp.orientation);
    const float inv2s2 = 1.f / (2.f * (params.weight_sigma * s) * (params.weight_sigma * s));

    std::vector<float> desc(static_cast<size_t>(grid) * grid * 4, 0.f);
    for (int sy = 0; sy < side; ++sy) {
        for (int sx = 0; sx < side; ++sx) {
            // sample offset in the keypoint frame, scaled to pixels
            float u = (static_cast<float>(sx) - half) * s;
            float v = (static_cast<float>(sy) - half) * s;
            float px = kp.x + cos_t * u - sin_t * v;
            float py = kp.y + sin_t * u + cos_t * v;
            int ix = static_cast<int>(std::lround(px));
            int iy = static_cast<int>(std::lround(py));
            if (ix - hs < 0 || iy - hs < 0 || ix + hs - 1 >= img.width() ||
                iy + hs - 1 >= img.height())
                raise(ErrorCode::out_of_bounds,
                      "Haar filter leaves the image at sample (" +
                          std::to_string(px) + "," + std::to_string(py) + ")");
            // Haar responses: right minus left, bottom minus top, each
            // half hs wide over a 2hs x 2hs footprint
            double left = ii.box_sum(ix - hs, iy - hs, ix - 1, iy + hs - 1);
            double right = ii.box_sum(ix, iy - hs, ix + hs - 1, iy + hs - 1);
            double top = ii.box_sum(ix - hs, iy - hs, ix + hs - 1, iy - 1);
            double bottom = ii.box_sum(ix - hs, iy, ix + hs - 1, iy + hs - 1);
            float dx = static_cast<float>(right - left);
            float dy = static_cast<float>(bottom - top);
            // responses rotated back into the keypoint frame
            float du = cos_t * dx + sin_t * dy;
            float dv = -sin_t * dx + cos_t * dy;
            float w = std::exp(-(u * u + v * v) * inv2s2);
            du *= w;
            dv *= w;
            size_t cell = (static_cast<size_t>(sy / samples) * grid +
                           static_cast<size_t>(sx / samples)) * 4;
            desc[cell + 0] += du;
            desc[cell + 1] += dv;
            desc[cell + 2] += std::abs(du);
            desc[cell + 3] += std::abs(dv);
        }
    }

    double norm2 = 0.0;
    for (float x : desc)
        norm2 += double(x) * x;
    if (norm2 <= 1e-24)
        raise(ErrorCode::degenerate_descriptor, "window has no Haar response");
    float inv = static_cast<float>(1.0 / std::sqrt(norm2));
    for (float& x : desc)
        x *= inv;
    return desc;
}

} // namespace featkit
