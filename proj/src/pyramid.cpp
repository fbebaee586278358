#include "featkit/pyramid.hpp"

#include <cmath>

#include "featkit/kernels/kernels.hpp"

namespace featkit {

namespace {

std::vector<float> gaussian_taps(float sigma) {
    int radius = std::max(1, static_cast<int>(std::ceil(3.f * sigma)));
    std::vector<float> taps(2 * radius + 1);
    double inv2s2 = 1.0 / (2.0 * double(sigma) * double(sigma));
    double sum = 0.0;
    for (int t = -radius; t <= radius; ++t) {
        double v = std::exp(-double(t) * double(t) * inv2s2);
        taps[t + radius] = static_cast<float>(v);
        sum += v;
    }
    float inv = static_cast<float>(1.0 / sum);
    for (float& v : taps)
        v *= inv;
    return taps;
}

GrayImage subsample_half(const GrayImage& img) {
    int w = (img.width() + 1) / 2;
    int h = (img.height() + 1) / 2;
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        const float* src = img.row(2 * y);
        float* dst = out.row(y);
        for (int x = 0; x < w; ++x)
            dst[x] = src[2 * x];
    }
    return out;
}

} // namespace

GrayImage gaussian_blur(const GrayImage& img, float sigma) {
    if (!(sigma > 0.f))
        raise(ErrorCode::invalid_parameter,
              "blur sigma must be positive, got " + std::to_string(sigma));
    if (img.empty())
        raise(ErrorCode::invalid_parameter, "blur on empty image");
    std::vector<float> taps = gaussian_taps(sigma);
    int radius = (static_cast<int>(taps.size()) - 1) / 2;
    const auto& k = kernels::ops();

    // horizontal pass
    GrayImage tmp(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        k.conv_row(img.row(y), static_cast<size_t>(img.width()), taps.data(),
                   radius, tmp.row(y));

    // vertical pass as weighted row accumulation (clamped rows)
    GrayImage out(img.width(), img.height(), 0.f);
    int last = img.height() - 1;
    for (int y = 0; y <= last; ++y) {
        float* dst = out.row(y);
        for (int t = -radius; t <= radius; ++t) {
            int yy = y + t;
            if (yy < 0) yy = 0;
            if (yy > last) yy = last;
            k.axpy(taps[t + radius], tmp.row(yy), dst,
                   static_cast<size_t>(img.width()));
        }
    }
    return out;
}

GaussianPyramid build_gaussian_pyramid(const GrayImage& img,
                                       const PyramidParams& params) {
    if (params.octaves < 1 || params.intervals < 1)
        raise(ErrorCode::invalid_parameter,
              "pyramid needs octaves >= 1 and intervals >= 1");
    if (!(params.base_sigma > 0.f) || params.assumed_blur < 0.f)
        raise(ErrorCode::invalid_parameter, "pyramid sigma parameters invalid");
    if (params.base_sigma <= params.assumed_blur)
        raise(ErrorCode::invalid_parameter,
              "base sigma must exceed the assumed input blur");
    if (std::min(img.width(), img.height()) < params.min_dimension)
        raise(ErrorCode::invalid_parameter,
              "image smaller than the minimum pyramid level");

    GaussianPyramid pyr;
    pyr.params = params;
    pyr.k = std::exp2(1.f / static_cast<float>(params.intervals));
    int nlevels = params.intervals + 3;

    GrayImage base = img;
    // blur carried by the octave base, in octave-local pixels
    float base_blur = params.assumed_blur;
    for (int o = 0; o < params.octaves; ++o) {
        if (std::min(base.width(), base.height()) < params.min_dimension)
            break;
        PyramidOctave oct;
        oct.pixel_step = 1 << o;
        oct.levels.reserve(nlevels);
        oct.sigmas.reserve(nlevels);
        for (int l = 0; l < nlevels; ++l) {
            float sigma_local = params.base_sigma * std::pow(pyr.k, static_cast<float>(l));
            float inc2 = sigma_local * sigma_local - base_blur * base_blur;
            if (inc2 <= 1e-8f)
                oct.levels.push_back(base);
            else
                oct.levels.push_back(gaussian_blur(base, std::sqrt(inc2)));
            oct.sigmas.push_back(sigma_local * static_cast<float>(oct.pixel_step));
        }
        // next octave: take the level at twice the base sigma
        base = subsample_half(oct.levels[params.intervals]);
        base_blur = params.base_sigma;
        pyr.octaves.push_back(std::move(oct));
    }
    return pyr;
}

DogPyramid difference_of_gaussians(const GaussianPyramid& pyr) {
    if (pyr.octaves.empty())
        raise(ErrorCode::invalid_parameter, "empty pyramid");
    DogPyramid dog;
    dog.params = pyr.params;
    dog.k = pyr.k;
    dog.octaves.reserve(pyr.octaves.size());
    for (const auto& oct : pyr.octaves) {
        PyramidOctave d;
        d.pixel_step = oct.pixel_step;
        for (size_t l = 0; l + 1 < oct.levels.size(); ++l) {
            const GrayImage& lo = oct.levels[l];
            const GrayImage& hi = oct.levels[l + 1];
            GrayImage diff(lo.width(), lo.height());
            const float* a = lo.data();
            const float* b = hi.data();
            float* dst = diff.data();
            size_t n = static_cast<size_t>(lo.width()) * lo.height();
            for (size_t i = 0; i < n; ++i)
                dst[i] = b[i] - a[i];
            d.levels.push_back(std::move(diff));
            d.sigmas.push_back(oct.sigmas[l]);
        }
        dog.octaves.push_back(std::move(d));
    }
    return dog;
}

} // namespace featkit
