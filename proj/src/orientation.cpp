#include "featkit/desc/orientation.hpp"

#include <cmath>
#include <numbers>

namespace featkit {

std::vector<Keypoint> assign_orientation(const GrayImage& img, const Keypoint& kp,
                                         const OrientationParams& params) {
    if (params.bins < 4 || !(params.peak_ratio > 0.f) || params.peak_ratio > 1.f)
        raise(ErrorCode::invalid_parameter, "bad orientation parameters");
    if (!(kp.scale > 0.f))
        raise(ErrorCode::invalid_parameter, "keypoint scale must be positive");

    const float pi = std::numbers::pi_v<float>;
    const int n = params.bins;
    const float bin_width = 2.f * pi / static_cast<float>(n);
    const int cx = static_cast<int>(std::lround(kp.x));
    const int cy = static_cast<int>(std::lround(kp.y));
    const int radius =
        std::max(1, static_cast<int>(std::lround(params.window_factor * kp.scale)));

    // gradient needs one interior pixel all around the window
    if (cx - radius < 1 || cx + radius >= img.width() - 1 || cy - radius < 1 ||
        cy + radius >= img.height() - 1)
        return {};

    const float sigma = params.sigma_factor * kp.scale;
    const float inv2s2 = 1.f / (2.f * sigma * sigma);
    std::vector<double> hist(n, 0.0);
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            float r2 = static_cast<float>(dx * dx + dy * dy);
            if (r2 > static_cast<float>(radius) * radius)
                continue;
            GradientSample g = gradient_mag_ori(img, cx + dx, cy + dy);
            if (g.magnitude == 0.f)
                continue;
            // nearest-center binning; centers at multiples of bin_width
            int b = static_cast<int>(
                        std::floor((g.orientation + pi) / bin_width + 0.5f)) % n;
            hist[b] += static_cast<double>(g.magnitude) * std::exp(-r2 * inv2s2);
        }
    }

    double peak = 0.0;
    for (double v : hist)
        peak = std::max(peak, v);
    if (peak <= 0.0)
        return {};

    std::vector<Keypoint> out;
    const double accept = params.peak_ratio * peak;
    for (int b = 0; b < n; ++b) {
        double h0 = hist[b];
        double hl = hist[(b + n - 1) % n];
        double hr = hist[(b + 1) % n];
        if (h0 < accept || h0 <= hl || h0 < hr)
            continue; // <=/< pair so a two-bin plateau yields one peak
        double denom = hl - 2.0 * h0 + hr;
        double delta = std::abs(denom) < 1e-12 ? 0.0 : 0.5 * (hl - hr) / denom;
        float theta = (-pi + static_cast<float>(b) * bin_width) +
                      static_cast<float>(delta) * bin_width;
        while (theta <= -pi) theta += 2.f * pi;
        while (theta > pi) theta -= 2.f * pi;
        Keypoint oriented = kp;
        oriented.orientation = theta;
        out.push_back(oriented);
    }
    return out;
}

} // namespace featkit
