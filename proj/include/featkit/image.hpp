#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "featkit/error.hpp"

namespace featkit {

// Single-channel float image, row-major, values nominally in [0, 255].
class GrayImage {
public:
    GrayImage() = default;

    GrayImage(int width, int height, float fill = 0.f)
        : width_(width), height_(height) {
        if (width <= 0 || height <= 0)
            raise(ErrorCode::invalid_parameter,
                  "image dimensions must be positive, got " +
                      std::to_string(width) + "x" + std::to_string(height));
        data_.assign(static_cast<size_t>(width) * height, fill);
    }

    GrayImage(int width, int height, std::vector<float> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (width <= 0 || height <= 0)
            raise(ErrorCode::invalid_parameter,
                  "image dimensions must be positive, got " +
                      std::to_string(width) + "x" + std::to_string(height));
        if (data_.size() != static_cast<size_t>(width) * height)
            raise(ErrorCode::invalid_parameter,
                  "image data size does not match dimensions");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return data_.empty(); }

    float at(int x, int y) const { return data_[idx(x, y)]; }
    float& at(int x, int y) { return data_[idx(x, y)]; }

    // Clamp-to-edge access; used by every window that may touch a border.
    float at_clamped(int x, int y) const {
        if (x < 0) x = 0;
        if (x >= width_) x = width_ - 1;
        if (y < 0) y = 0;
        if (y >= height_) y = height_ - 1;
        return data_[idx(x, y)];
    }

    // Bilinear lookup at a continuous position, clamped at the border.
    float bilinear(float x, float y) const;

    const float* row(int y) const { return data_.data() + static_cast<size_t>(y) * width_; }
    float* row(int y) { return data_.data() + static_cast<size_t>(y) * width_; }
    const float* data() const noexcept { return data_.data(); }
    float* data() noexcept { return data_.data(); }

    bool in_bounds(int x, int y) const noexcept {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

private:
    size_t idx(int x, int y) const noexcept {
        return static_cast<size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<float> data_;
};

// Summed-area table with the usual one-pixel zero border folded in, so
// box_sum needs no edge cases. Stored as double to keep large sums exact.
class IntegralImage {
public:
    IntegralImage() = default;
    explicit IntegralImage(const GrayImage& img);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    // Inclusive rectangle [x0,x1] x [y0,y1]; must lie inside the image.
    double box_sum(int x0, int y0, int x1, int y1) const;

    // Same rectangle but clipped to the image first; empty intersection
    // sums to zero. Box-filter responses near borders use this.
    double box_sum_clipped(int x0, int y0, int x1, int y1) const;

private:
    double tab(int x, int y) const {
        return table_[static_cast<size_t>(y) * (width_ + 1) + x];
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> table_;
};

struct GradientSample {
    float magnitude;
    float orientation; // radians in (-pi, pi]
};

// Central-difference gradient magnitude/orientation at an interior pixel.
GradientSample gradient_mag_ori(const GrayImage& img, int x, int y);

// Photometric gain of 2^(ev/4) with output clamped to [0, 255].
GrayImage adjust_exposure(const GrayImage& img, float ev);

} // namespace featkit
