#include "featkit/bench/synthetic.hpp"

#include <cmath>
#include <random>

#include "featkit/pyramid.hpp"

namespace featkit {

namespace {

double unit_real(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double pick(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * unit_real(rng);
}

void add_blob(GrayImage& img, double cx, double cy, double sigma, double amp) {
    int r = static_cast<int>(std::ceil(3.0 * sigma));
    int x0 = std::max(0, static_cast<int>(cx) - r);
    int x1 = std::min(img.width() - 1, static_cast<int>(cx) + r);
    int y0 = std::max(0, static_cast<int>(cy) - r);
    int y1 = std::min(img.height() - 1, static_cast<int>(cy) + r);
    double inv = 1.0 / (2.0 * sigma * sigma);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            img.at(x, y) += static_cast<float>(amp * std::exp(-d2 * inv));
        }
}

void paint_rect(GrayImage& img, int x0, int y0, int w, int h, float value) {
    int x1 = std::min(img.width() - 1, x0 + w - 1);
    int y1 = std::min(img.height() - 1, y0 + h - 1);
    x0 = std::max(0, x0);
    y0 = std::max(0, y0);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            img.at(x, y) = value;
}

void clamp_range(GrayImage& img, float lo, float hi) {
    float* d = img.data();
    size_t n = static_cast<size_t>(img.width()) * img.height();
    for (size_t i = 0; i < n; ++i) {
        if (d[i] < lo) d[i] = lo;
        if (d[i] > hi) d[i] = hi;
    }
}

// scatter jittered squares on a coarse grid inside the central region so
// they never merge; returns the cells in deterministic order
void scatter_squares(GrayImage& img, std::mt19937_64& rng, int grid, int count,
                     double min_frac, double max_frac) {
    const double W = img.width(), H = img.height();
    const double inner = 0.64; // use the central portion only
    const double ox = W * (1.0 - inner) / 2.0, oy = H * (1.0 - inner) / 2.0;
    const double cw = W * inner / grid, ch = H * inner / grid;
    const float tones[4] = {30.f, 60.f, 120.f, 150.f};
    int placed = 0;
    for (int gy = 0; gy < grid && placed < count; ++gy) {
        for (int gx = 0; gx < grid && placed < count; ++gx) {
            if (((gx + gy * grid) * 7 + 3) % 10 < 3)
                continue; // leave some cells empty for variety
            double side = pick(rng, min_frac, max_frac) * std::min(W, H);
            side = std::min(side, 0.8 * std::min(cw, ch));
            double x = ox + gx * cw + pick(rng, 0.05, 0.9) * (cw - side);
            double y = oy + gy * ch + pick(rng, 0.05, 0.9) * (ch - side);
            float tone = tones[rng() % 4];
            paint_rect(img, static_cast<int>(x), static_cast<int>(y),
                       static_cast<int>(side), static_cast<int>(side), tone);
            ++placed;
        }
    }
}

void scatter_blobs(GrayImage& img, std::mt19937_64& rng, int count,
                   double min_sigma_frac, double max_sigma_frac) {
    const double W = img.width(), H = img.height();
    for (int i = 0; i < count; ++i) {
        double cx = pick(rng, 0.2, 0.8) * W;
        double cy = pick(rng, 0.2, 0.8) * H;
        double sigma = pick(rng, min_sigma_frac, max_sigma_frac) * std::min(W, H);
        double amp = pick(rng, 34.0, 58.0) * (i % 2 ? 1.0 : -1.0);
        add_blob(img, cx, cy, sigma, amp);
    }
}

GrayImage finish(GrayImage img) {
    clamp_range(img, 26.f, 150.f);
    // soften aliasing from the hard-edged paint operations
    return gaussian_blur(img, 0.8f);
}

} // namespace

GrayImage synth_blobs(int width, int height, uint64_t seed) {
    std::mt19937_64 rng(seed * 2654435761u + 1);
    GrayImage img(width, height, 86.f);
    scatter_blobs(img, rng, 22, 0.016, 0.055);
    scatter_squares(img, rng, 3, 5, 0.05, 0.1);
    return finish(std::move(img));
}

GrayImage synth_squares(int width, int height, uint64_t seed) {
    std::mt19937_64 rng(seed * 2654435761u + 2);
    GrayImage img(width, height, 92.f);
    scatter_squares(img, rng, 4, 12, 0.05, 0.14);
    scatter_blobs(img, rng, 6, 0.02, 0.05);
    return finish(std::move(img));
}

GrayImage synth_mixed(int width, int height, uint64_t seed) {
    std::mt19937_64 rng(seed * 2654435761u + 3);
    GrayImage img(width, height, 88.f);
    scatter_blobs(img, rng, 12, 0.018, 0.06);
    scatter_squares(img, rng, 4, 9, 0.05, 0.12);
    // one strong bar for edge/orientation structure
    int W = width, H = height;
    paint_rect(img, static_cast<int>(0.3 * W), static_cast<int>(0.72 * H),
               static_cast<int>(0.36 * W), std::max(3, H / 36), 40.f);
    return finish(std::move(img));
}

std::vector<std::pair<std::string, GrayImage>> default_bench_images(int size) {
    std::vector<std::pair<std::string, GrayImage>> out;
    out.emplace_back("blobs", synth_blobs(size, size, 11));
    out.emplace_back("squares", synth_squares(size, size, 12));
    out.emplace_back("mixed", synth_mixed(size, size, 13));
    return out;
}

} // namespace featkit
