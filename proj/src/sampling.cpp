#include "featkit/desc/sampling.hpp"

#include <cmath>

namespace featkit {

float smoothed_sample(const GrayImage& img, float x, float y, float sigma,
                      float truncate) {
    if (!(sigma > 0.f) || !(truncate > 0.f))
        raise(ErrorCode::invalid_parameter, "sampling sigma must be positive");
    float rad = std::ceil(truncate * sigma);
    if (rad < 1.f)
        rad = 1.f;
    int x0 = static_cast<int>(std::floor(x - rad));
    int x1 = static_cast<int>(std::ceil(x + rad));
    int y0 = static_cast<int>(std::floor(y - rad));
    int y1 = static_cast<int>(std::ceil(y + rad));
    if (x0 < 0 || y0 < 0 || x1 >= img.width() || y1 >= img.height())
        raise(ErrorCode::out_of_bounds,
              "sample window at (" + std::to_string(x) + "," + std::to_string(y) +
                  ") sigma " + std::to_string(sigma) + " leaves the image");
    double inv2s2 = 1.0 / (2.0 * double(sigma) * double(sigma));
    double acc = 0.0, wsum = 0.0;
    for (int iy = y0; iy <= y1; ++iy) {
        double dy = iy - double(y);
        const float* row = img.row(iy);
        for (int ix = x0; ix <= x1; ++ix) {
            double dx = ix - double(x);
            double w = std::exp(-(dx * dx + dy * dy) * inv2s2);
            acc += w * row[ix];
            wsum += w;
        }
    }
    return static_cast<float>(acc / wsum);
}

} // namespace featkit
