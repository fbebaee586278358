#include "featkit/detect/brisk.hpp"

#include <cmath>

namespace featkit {

namespace {

constexpr int kRing[16][2] = {
    {0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0},  {3, 1},  {2, 2},  {1, 3},
    {0, 3},  {-1, 3}, {-2, 2}, {-3, 1}, {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3}};

struct Layer {
    GrayImage image;
    GrayImage score;
    // pixel -> original-image coordinates: orig = a * x + b
    double ax, bx, ay, by;
    int index;
};

GrayImage resize_bilinear(const GrayImage& src, int dw, int dh) {
    GrayImage out(dw, dh);
    double fx = static_cast<double>(src.width()) / dw;
    double fy = static_cast<double>(src.height()) / dh;
    for (int y = 0; y < dh; ++y) {
        float sy = static_cast<float>((y + 0.5) * fy - 0.5);
        for (int x = 0; x < dw; ++x) {
            float sx = static_cast<float>((x + 0.5) * fx - 0.5);
            out.at(x, y) = src.bilinear(sx, sy);
        }
    }
    return out;
}

GrayImage halfsample(const GrayImage& src) {
    int dw = src.width() / 2, dh = src.height() / 2;
    GrayImage out(dw, dh);
    for (int y = 0; y < dh; ++y) {
        const float* r0 = src.row(2 * y);
        const float* r1 = src.row(2 * y + 1);
        float* dst = out.row(y);
        for (int x = 0; x < dw; ++x)
            dst[x] = 0.25f * (r0[2 * x] + r0[2 * x + 1] + r1[2 * x] + r1[2 * x + 1]);
    }
    return out;
}

// best sum of positive (diff - t) terms over a contiguous run of >= need
float best_arc(const float diff[16], int need) {
    float best = 0.f;
    int i = 0;
    while (i < 16) {
        if (diff[i] <= 0.f) {
            ++i;
            continue;
        }
        int len = 0;
        float sum = 0.f;
        while (len < 16 && diff[(i + len) & 15] > 0.f) {
            sum += diff[(i + len) & 15];
            ++len;
        }
        if (len >= need && sum > best)
            best = sum;
        // skip the whole run; a run crossing index 0 gets its full wrapped
        // count when the scan reaches its true start
        i += len;
        if (len == 16)
            break;
    }
    return best;
}

float parabola_offset(float sm, float s0, float sp) {
    float denom = sm - 2.f * s0 + sp;
    if (std::abs(denom) < 1e-12f)
        return 0.f;
    float d = 0.5f * (sm - sp) / denom;
    if (d > 0.5f) d = 0.5f;
    if (d < -0.5f) d = -0.5f;
    return d;
}

} // namespace

float fast_score(const GrayImage& img, int x, int y, float threshold,
                 int arc_length) {
    float c = img.at(x, y);
    float bright[16], dark[16];
    for (int i = 0; i < 16; ++i) {
        float p = img.at(x + kRing[i][0], y + kRing[i][1]);
        bright[i] = p - c - threshold;
        dark[i] = c - p - threshold;
    }
    float sb = best_arc(bright, arc_length);
    float sd = best_arc(dark, arc_length);
    return sb > sd ? sb : sd;
}

std::vector<Keypoint> detect_brisk(const GrayImage& img,
                                   const BriskDetectorParams& params) {
    if (params.layers < 1 || !(params.threshold > 0.f) ||
        params.arc_length < 1 || params.arc_length > 16)
        raise(ErrorCode::invalid_parameter, "bad FAST parameters");

    // layer stack at ratio sqrt(2): even layers by repeated halving, odd
    // layers by a single 1/sqrt(2) resize of the layer two below
    std::vector<Layer> layers;
    for (int j = 0; j < params.layers; ++j) {
        Layer L;
        L.index = j;
        if (j == 0) {
            L.image = img;
            L.ax = L.ay = 1.0;
            L.bx = L.by = 0.0;
        } else if (j == 1) {
            int dw = static_cast<int>(std::lround(img.width() / std::sqrt(2.0)));
            int dh = static_cast<int>(std::lround(img.height() / std::sqrt(2.0)));
            if (std::min(dw, dh) < params.min_dimension)
                break;
            L.image = resize_bilinear(img, dw, dh);
            L.ax = static_cast<double>(img.width()) / dw;
            L.ay = static_cast<double>(img.height()) / dh;
            L.bx = 0.5 * L.ax - 0.5;
            L.by = 0.5 * L.ay - 0.5;
        } else {
            const Layer& src = layers[j - 2];
            if (std::min(src.image.width(), src.image.height()) / 2 <
                params.min_dimension)
                break;
            L.image = halfsample(src.image);
            L.ax = src.ax * 2.0;
            L.ay = src.ay * 2.0;
            L.bx = src.ax * 0.5 + src.bx;
            L.by = src.ay * 0.5 + src.by;
        }
        if (std::min(L.image.width(), L.image.height()) < params.min_dimension)
            break;
        L.score = GrayImage(L.image.width(), L.image.height(), 0.f);
        for (int y = 3; y + 3 < L.image.height(); ++y)
            for (int x = 3; x + 3 < L.image.width(); ++x)
                L.score.at(x, y) =
                    fast_score(L.image, x, y, params.threshold, params.arc_length);
        layers.push_back(std::move(L));
    }
    if (layers.empty())
        raise(ErrorCode::invalid_parameter, "image smaller than the minimum layer");

    std::vector<Keypoint> out;
    for (size_t j = 0; j < layers.size(); ++j) {
        const Layer& L = layers[j];
        const Layer* below = j > 0 ? &layers[j - 1] : nullptr;
        const Layer* above = j + 1 < layers.size() ? &layers[j + 1] : nullptr;
        auto project = [](const Layer& from, const Layer& to, float x, float y,
                          float& tx, float& ty) {
            tx = static_cast<float>((from.ax * x + from.bx - to.bx) / to.ax);
            ty = static_cast<float>((from.ay * y + from.by - to.by) / to.ay);
        };
        for (int y = 3; y + 3 < L.image.height(); ++y) {
            for (int x = 3; x + 3 < L.image.width(); ++x) {
                float s0 = L.score.at(x, y);
                if (s0 <= 0.f)
                    continue;
                bool peak = true;
                for (int dy = -1; dy <= 1 && peak; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (!dx && !dy)
                            continue;
                        if (L.score.at(x + dx, y + dy) >= s0) {
                            peak = false;
                            break;
                        }
                    }
                if (!peak)
                    continue;

                float s_below = -1.f, s_above = -1.f;
                if (below) {
                    float bx, by;
                    project(L, *below, static_cast<float>(x), static_cast<float>(y), bx, by);
                    s_below = below->score.bilinear(bx, by);
                    if (s_below >= s0)
                        continue;
                }
                if (above) {
                    float axp, ayp;
                    project(L, *above, static_cast<float>(x), static_cast<float>(y), axp, ayp);
                    s_above = above->score.bilinear(axp, ayp);
                    if (s_above >= s0)
                        continue;
                }

                float dx = parabola_offset(L.score.at(x - 1, y), s0, L.score.at(x + 1, y));
                float dy = parabola_offset(L.score.at(x, y - 1), s0, L.score.at(x, y + 1));
                float ds = 0.f;
                if (below && above)
                    ds = parabola_offset(s_below, s0, s_above);

                Keypoint kp;
                kp.x = static_cast<float>(L.ax * (x + dx) + L.bx);
                kp.y = static_cast<float>(L.ay * (y + dy) + L.by);
                if (kp.x < 0.f || kp.x > static_cast<float>(img.width() - 1) ||
                    kp.y < 0.f || kp.y > static_cast<float>(img.height() - 1))
                    continue;
                kp.scale = std::exp2((static_cast<float>(j) + ds) * 0.5f);
                kp.response = s0;
                kp.octave = static_cast<int>(j);
                kp.detector = DetectorKind::brisk;
                out.push_back(kp);
            }
        }
    }
    sort_keypoints(out);
    return out;
}

} // namespace featkit
