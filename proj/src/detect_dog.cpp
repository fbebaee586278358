#include "featkit/detect/dog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace featkit {

namespace {

struct Cube {
    // 3x3x3 neighbourhood around (x, y) across levels l-1, l, l+1
    const GrayImage* lv[3];
    int x, y;

    float at(int dl, int dy, int dx) const {
        return lv[dl + 1]->at(x + dx, y + dy);
    }
};

bool solve3(const double a[9], const double b[3], double out[3]) {
    double adj[9] = {
        a[4] * a[8] - a[5] * a[7], a[2] * a[7] - a[1] * a[8], a[1] * a[5] - a[2] * a[4],
        a[5] * a[6] - a[3] * a[8], a[0] * a[8] - a[2] * a[6], a[2] * a[3] - a[0] * a[5],
        a[3] * a[7] - a[4] * a[6], a[1] * a[6] - a[0] * a[7], a[0] * a[4] - a[1] * a[3]};
    double det = a[0] * adj[0] + a[1] * adj[3] + a[2] * adj[6];
    if (std::abs(det) < 1e-20)
        return false;
    for (int i = 0; i < 3; ++i)
        out[i] = (adj[i * 3] * b[0] + adj[i * 3 + 1] * b[1] + adj[i * 3 + 2] * b[2]) / det;
    return true;
}

} // namespace

std::vector<Keypoint> detect_dog(const GrayImage& img, const DogParams& params) {
    if (!(params.contrast_threshold > 0.f) || !(params.edge_ratio >= 1.f))
        raise(ErrorCode::invalid_parameter, "bad DoG thresholds");

    // too small for even one octave: nothing to detect, not an error
    if (std::min(img.width(), img.height()) < params.pyramid.min_dimension) {
        std::fprintf(stderr, "detect_dog: %dx%d image below the %d px minimum, no keypoints\n",
                     img.width(), img.height(), params.pyramid.min_dimension);
        return {};
    }

    // work on [0,1] so the contrast threshold is intensity-scale free
    GrayImage norm(img.width(), img.height());
    {
        const float* s = img.data();
        float* d = norm.data();
        size_t n = static_cast<size_t>(img.width()) * img.height();
        for (size_t i = 0; i < n; ++i)
            d[i] = s[i] * (1.f / 255.f);
    }

    GaussianPyramid pyr = build_gaussian_pyramid(norm, params.pyramid);
    DogPyramid dog = difference_of_gaussians(pyr);

    const float prefilter = 0.5f * params.contrast_threshold;
    const float r = params.edge_ratio;
    const float edge_limit = (r + 1.f) * (r + 1.f) / r;

    std::vector<Keypoint> out;
    for (size_t o = 0; o < dog.octaves.size(); ++o) {
        const auto& oct = dog.octaves[o];
        const int nl = static_cast<int>(oct.levels.size());
        const int w = oct.levels[0].width();
        const int h = oct.levels[0].height();
        for (int l = 1; l + 1 < nl; ++l) {
            const GrayImage& below = oct.levels[l - 1];
            const GrayImage& here = oct.levels[l];
            const GrayImage& above = oct.levels[l + 1];
            for (int y = 1; y + 1 < h; ++y) {
                for (int x = 1; x + 1 < w; ++x) {
                    float v = here.at(x, y);
                    if (std::abs(v) < prefilter)
                        continue;
                    // strict extremum over the 26 neighbours
                    bool is_max = v > 0.f, is_min = v < 0.f;
                    for (int dl = -1; dl <= 1 && (is_max || is_min); ++dl) {
                        const GrayImage& L = dl < 0 ? below : (dl > 0 ? above : here);
                        for (int dy = -1; dy <= 1; ++dy) {
                            for (int dx = -1; dx <= 1; ++dx) {
                                if (dl == 0 && dy == 0 && dx == 0)
                                    continue;
                                float nv = L.at(x + dx, y + dy);
                                if (nv >= v) is_max = false;
                                if (nv <= v) is_min = false;
                            }
                        }
                    }
                    if (!is_max && !is_min)
                        continue;

                    // Newton refinement in (x, y, scale); re-seat the sample
                    // point when the step leaves the pixel
                    int cx = x, cy = y, cl = l;
                    double off[3] = {0, 0, 0};
                    double g[3];
                    bool ok = false;
                    for (int attempt = 0; attempt < params.max_refine_steps; ++attempt) {
                        Cube c{{&oct.levels[cl - 1], &oct.levels[cl], &oct.levels[cl + 1]},
                               cx, cy};
                        g[0] = 0.5 * (c.at(0, 0, 1) - c.at(0, 0, -1));
                        g[1] = 0.5 * (c.at(0, 1, 0) - c.at(0, -1, 0));
                        g[2] = 0.5 * (c.at(1, 0, 0) - c.at(-1, 0, 0));
                        double ctr = c.at(0, 0, 0);
                        double hxx = c.at(0, 0, 1) + c.at(0, 0, -1) - 2 * ctr;
                        double hyy = c.at(0, 1, 0) + c.at(0, -1, 0) - 2 * ctr;
                        double hss = c.at(1, 0, 0) + c.at(-1, 0, 0) - 2 * ctr;
                        double hxy = 0.25 * (c.at(0, 1, 1) - c.at(0, 1, -1) -
                                             c.at(0, -1, 1) + c.at(0, -1, -1));
                        double hxs = 0.25 * (c.at(1, 0, 1) - c.at(1, 0, -1) -
                                             c.at(-1, 0, 1) + c.at(-1, 0, -1));
                        double hys = 0.25 * (c.at(1, 1, 0) - c.at(1, -1, 0) -
                                             c.at(-1, 1, 0) + c.at(-1, -1, 0));
                        double H[9] = {hxx, hxy, hxs, hxy, hyy, hys, hxs, hys, hss};
                        double rhs[3] = {-g[0], -g[1], -g[2]};
                        if (!solve3(H, rhs, off))
                            break;
                        if (std::abs(off[0]) <= 0.5 && std::abs(off[1]) <= 0.5 &&
                            std::abs(off[2]) <= 0.5) {
                            ok = true;
                            break;
                        }
                        int nx = cx, ny = cy, nL = cl;
                        if (off[0] > 0.5) ++nx; else if (off[0] < -0.5) --nx;
                        if (off[1] > 0.5) ++ny; else if (off[1] < -0.5) --ny;
                        if (off[2] > 0.5) ++nL; else if (off[2] < -0.5) --nL;
                        if (nx < 1 || nx + 1 >= w || ny < 1 || ny + 1 >= h ||
                            nL < 1 || nL + 1 >= nl)
                            break;
                        cx = nx; cy = ny; cl = nL;
                    }
                    if (!ok)
                        continue;

                    const GrayImage& D = oct.levels[cl];
                    double refined = D.at(cx, cy) +
                                     0.5 * (g[0] * off[0] + g[1] * off[1] + g[2] * off[2]);
                    if (std::abs(refined) < params.contrast_threshold)
                        continue;

                    // reject edge-like responses via the 2x2 spatial Hessian
                    double dxx = D.at(cx + 1, cy) + D.at(cx - 1, cy) - 2.0 * D.at(cx, cy);
                    double dyy = D.at(cx, cy + 1) + D.at(cx, cy - 1) - 2.0 * D.at(cx, cy);
                    double dxy = 0.25 * (D.at(cx + 1, cy + 1) - D.at(cx - 1, cy + 1) -
                                         D.at(cx + 1, cy - 1) + D.at(cx - 1, cy - 1));
                    double tr = dxx + dyy;
                    double det = dxx * dyy - dxy * dxy;
                    if (det <= 0.0 || tr * tr / det > edge_limit)
                        continue;

                    int step = oct.pixel_step;
                    Keypoint kp;
                    kp.x = static_cast<float>((cx + off[0]) * step);
                    kp.y = static_cast<float>((cy + off[1]) * step);
                    if (kp.x < 0.f || kp.x > static_cast<float>(img.width() - 1) ||
                        kp.y < 0.f || kp.y > static_cast<float>(img.height() - 1))
                        continue;
                    kp.scale = oct.sigmas[cl] *
                               std::pow(dog.k, static_cast<float>(off[2]));
                    kp.response = static_cast<float>(std::abs(refined));
                    kp.octave = static_cast<int>(o);
                    kp.detector = DetectorKind::dog;
                    out.push_back(kp);
                }
            }
        }
    }
    sort_keypoints(out);
    return out;
}

} // namespace featkit
