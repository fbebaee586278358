#include "featkit/image.hpp"

#include <cmath>

namespace featkit {

float GrayImage::bilinear(float x, float y) const {
    if (x < 0.f) x = 0.f;
    if (y < 0.f) y = 0.f;
    float mx = static_cast<float>(width_ - 1);
    float my = static_cast<float>(height_ - 1);
    if (x > mx) x = mx;
    if (y > my) y = my;
    int x0 = static_cast<int>(x);
    int y0 = static_cast<int>(y);
    int x1 = x0 + 1 < width_ ? x0 + 1 : x0;
    int y1 = y0 + 1 < height_ ? y0 + 1 : y0;
    float fx = x - static_cast<float>(x0);
    float fy = y - static_cast<float>(y0);
    float top = at(x0, y0) * (1.f - fx) + at(x1, y0) * fx;
    float bot = at(x0, y1) * (1.f - fx) + at(x1, y1) * fx;
    return top * (1.f - fy) + bot * fy;
}

IntegralImage::IntegralImage(const GrayImage& img)
    : width_(img.width()), height_(img.height()) {
    table_.assign(static_cast<size_t>(width_ + 1) * (height_ + 1), 0.0);
    for (int y = 0; y < height_; ++y) {
        double rowsum = 0.0;
        const float* src = img.row(y);
        double* out = table_.data() + static_cast<size_t>(y + 1) * (width_ + 1);
        const double* above = table_.data() + static_cast<size_t>(y) * (width_ + 1);
        for (int x = 0; x < width_; ++x) {
            rowsum += src[x];
            out[x + 1] = above[x + 1] + rowsum;
        }
    }
}

double IntegralImage::box_sum(int x0, int y0, int x1, int y1) const {
    if (x0 > x1 || y0 > y1 || x0 < 0 || y0 < 0 || x1 >= width_ || y1 >= height_)
        raise(ErrorCode::out_of_bounds,
              "box_sum rectangle [" + std::to_string(x0) + "," + std::to_string(y0) +
                  "]..[" + std::to_string(x1) + "," + std::to_string(y1) +
                  "] outside " + std::to_string(width_) + "x" + std::to_string(height_));
    return tab(x1 + 1, y1 + 1) - tab(x0, y1 + 1) - tab(x1 + 1, y0) + tab(x0, y0);
}

double IntegralImage::box_sum_clipped(int x0, int y0, int x1, int y1) const {
    if (x0 < 0) x0 = 0;
    if (y0 < 0) y0 = 0;
    if (x1 >= width_) x1 = width_ - 1;
    if (y1 >= height_) y1 = height_ - 1;
    if (x0 > x1 || y0 > y1)
        return 0.0;
    return tab(x1 + 1, y1 + 1) - tab(x0, y1 + 1) - tab(x1 + 1, y0) + tab(x0, y0);
}

GradientSample gradient_mag_ori(const GrayImage& img, int x, int y) {
    if (x < 1 || x >= img.width() - 1 || y < 1 || y >= img.height() - 1)
        raise(ErrorCode::out_of_bounds,
              "gradient needs interior pixel, got (" + std::to_string(x) + "," +
                  std::to_string(y) + ") in " + std::to_string(img.width()) + "x" +
                  std::to_string(img.height()));
    float dx = 0.5f * (img.at(x + 1, y) - img.at(x - 1, y));
    float dy = 0.5f * (img.at(x, y + 1) - img.at(x, y - 1));
    GradientSample g;
    g.magnitude = std::sqrt(dx * dx + dy * dy);
    if (dx == 0.f && dy == 0.f) {
        g.orientation = 0.f;
    } else {
        float th = std::atan2(dy, dx);
        // keep the range half-open at -pi
        if (th <= -3.14159274f)
            th = 3.14159274f;
        g.orientation = th;
    }
    return g;
}

GrayImage adjust_exposure(const GrayImage& img, float ev) {
    float gain = std::exp2(ev / 4.f);
    GrayImage out(img.width(), img.height());
    const float* src = img.data();
    float* dst = out.data();
    size_t n = static_cast<size_t>(img.width()) * img.height();
    for (size_t i = 0; i < n; ++i) {
        float v = src[i] * gain;
        if (v < 0.f) v = 0.f;
        if (v > 255.f) v = 255.f;
        dst[i] = v;
    }
    return out;
}

} // namespace featkit
