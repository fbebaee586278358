#include "featkit/desc/sift.hpp"

#include <cmath>
#include <numbers>

namespace featkit {

std::vector<float> sift_descriptor(const GrayImage& img, const Keypoint& kp,
                                   const SiftParams& params) {
    const int d = params.grid;
    const int nb = params.bins;
    if (d < 1 || nb < 2 || !(params.cell_width_factor > 0.f) ||
        !(params.clamp > 0.f) || params.clamp >= 1.f)
        raise(ErrorCode::invalid_parameter, "bad descriptor parameters");
    if (!(kp.scale > 0.f))
        raise(ErrorCode::invalid_parameter, "keypoint scale must be positive");

    const float pi = std::numbers::pi_v<float>;
    const float two_pi = 2.f * pi;
    const float cell_w = params.cell_width_factor * kp.scale;
    const int radius = static_cast<int>(std::lround(
        cell_w * std::sqrt(2.f) * (d + 1) * 0.5f));
    const int cx = static_cast<int>(std::lround(kp.x));
    const int cy = static_cast<int>(std::lround(kp.y));
    if (cx - radius < 1 || cx + radius >= img.width() - 1 || cy - radius < 1 ||
        cy + radius >= img.height() - 1)
        raise(ErrorCode::out_of_bounds,
              "descriptor window (radius " + std::to_string(radius) +
                  ") leaves the image at (" + std::to_string(kp.x) + "," +
                  std::to_string(kp.y) + ")");

    const float cos_t = std::cos(kp.orientation);
    const float sin_t = std::sin(kp.orientation);
    const float sigma = 0.5f * d * cell_w;
    const float inv2s2 = 1.f / (2.f * sigma * sigma);
    const float bins_per_rad = nb / two_pi;

    std::vector<double> hist(static_cast<size_t>(d) * d * nb, 0.0);
    auto scatter = [&](int r, int c, int o, double v) {
        if (r < 0 || r >= d || c < 0 || c >= d)
            return;
        hist[(static_cast<size_t>(r) * d + c) * nb + (o % nb + nb) % nb] += v;
    };

    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            // rotate the offset into the keypoint frame
            float u = cos_t * dx + sin_t * dy;
            float v = -sin_t * dx + cos_t * dy;
            float cbin = u / cell_w + d * 0.5f - 0.5f;
            float rbin = v / cell_w + d * 0.5f - 0.5f;
            if (cbin <= -1.f || cbin >= static_cast<float>(d) || rbin <= -1.f ||
                rbin >= static_cast<float>(d))
                continue;
            GradientSample g = gradient_mag_ori(img, cx + dx, cy + dy);
            if (g.magnitude == 0.f)
                continue;
            float rel = g.orientation - kp.orientation;
            while (rel < 0.f) rel += two_pi;
            while (rel >= two_pi) rel -= two_pi;
            float obin = rel * bins_per_rad;
            double w = g.magnitude * std::exp(-(u * u + v * v) * inv2s2);

            int r0 = static_cast<int>(std::floor(rbin));
            int c0 = static_cast<int>(std::floor(cbin));
            int o0 = static_cast<int>(std::floor(obin));
            float fr = rbin - r0, fc = cbin - c0, fo = obin - o0;
            for (int ir = 0; ir <= 1; ++ir) {
                double wr = w * (ir ? fr : 1.f - fr);
                for (int ic = 0; ic <= 1; ++ic) {
                    double wc = wr * (ic ? fc : 1.f - fc);
                    for (int io = 0; io <= 1; ++io)
                        scatter(r0 + ir, c0 + ic, o0 + io,
                                wc * (io ? fo : 1.f - fo));
                }
            }
        }
    }

    std::vector<float> desc(hist.size());
    for (size_t i = 0; i < hist.size(); ++i)
        desc[i] = static_cast<float>(hist[i]);

    // normalize and clamp to a joint fixpoint: unit norm with no entry
    // above the clamp value
    const float limit = params.clamp + 1e-7f;
    for (int iter = 0; iter < 64; ++iter) {
        double norm2 = 0.0;
        for (float x : desc)
            norm2 += double(x) * x;
        if (norm2 <= 1e-24)
            raise(ErrorCode::degenerate_descriptor,
                  "descriptor window has no gradient mass");
        float inv = static_cast<float>(1.0 / std::sqrt(norm2));
        float maxv = 0.f;
        for (float& x : desc) {
            x *= inv;
            maxv = std::max(maxv, x);
        }
        if (maxv <= limit)
            return desc;
        for (float& x : desc)
            x = std::min(x, params.clamp);
    }
    raise(ErrorCode::degenerate_descriptor,
          "descriptor support too concentrated to normalize under clamp");
}

} // namespace featkit
