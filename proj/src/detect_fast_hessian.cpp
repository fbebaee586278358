#include "featkit/detect/fast_hessian.hpp"

#include <cmath>

namespace featkit {

namespace {

// inclusive box over [x, x+w-1] x [y, y+h-1]
double box(const IntegralImage& ii, int x, int y, int w, int h) {
    return ii.box_sum(x, y, x + w - 1, y + h - 1);
}

struct ResponseMap {
    int filter_size;
    int step;
    int grid_w, grid_h;
    std::vector<float> values;

    float at(int gx, int gy) const {
        return values[static_cast<size_t>(gy) * grid_w + gx];
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

HessianResponse hessian_response(const IntegralImage& ii, int x, int y,
                                 int filter_size, float lobe_weight) {
    const int L = filter_size;
    if (L < 9 || L % 6 != 3)
        raise(ErrorCode::invalid_parameter,
              "filter size must be 9 + 6k, got " + std::to_string(L));
    const int lobe = L / 3;
    const int border = (L - 1) / 2;
    if (x - border < 0 || y - border < 0 || x + border >= ii.width() ||
        y + border >= ii.height())
        raise(ErrorCode::out_of_bounds,
              "filter of size " + std::to_string(L) + " does not fit at (" +
                  std::to_string(x) + "," + std::to_string(y) + ")");

    double dxx = box(ii, x - border, y - lobe + 1, L, 2 * lobe - 1) -
                 3.0 * box(ii, x - lobe / 2, y - lobe + 1, lobe, 2 * lobe - 1);
    double dyy = box(ii, x - lobe + 1, y - border, 2 * lobe - 1, L) -
                 3.0 * box(ii, x - lobe + 1, y - lobe / 2, 2 * lobe - 1, lobe);
    double dxy = box(ii, x + 1, y - lobe, lobe, lobe) +
                 box(ii, x - lobe, y + 1, lobe, lobe) -
                 box(ii, x - lobe, y - lobe, lobe, lobe) -
                 box(ii, x + 1, y + 1, lobe, lobe);

    double inv_area = 1.0 / (double(L) * double(L));
    HessianResponse r;
    r.dxx = dxx * inv_area;
    r.dyy = dyy * inv_area;
    r.dxy = dxy * inv_area;
    r.det = hessian_determinant(r.dxx, r.dyy, r.dxy, lobe_weight);
    return r;
}

std::vector<Keypoint> detect_fast_hessian(const GrayImage& img,
                                          const FastHessianParams& params) {
    if (params.octaves < 1 || params.levels < 3)
        raise(ErrorCode::invalid_parameter,
              "fast-hessian needs octaves >= 1 and levels >= 3");
    if (!(params.threshold > 0.f))
        raise(ErrorCode::invalid_parameter, "threshold must be positive");

    GrayImage norm(img.width(), img.height());
    {
        const float* s = img.data();
        float* d = norm.data();
        size_t n = static_cast<size_t>(img.width()) * img.height();
        for (size_t i = 0; i < n; ++i)
            d[i] = s[i] * (1.f / 255.f);
    }
    IntegralImage ii(norm);

    std::vector<Keypoint> out;
    int base_size = 9;
    for (int o = 0; o < params.octaves; ++o) {
        const int step = 1 << o;
        const int size_step = 6 * step;
        const int grid_w = img.width() / step;
        const int grid_h = img.height() / step;
        if (grid_w < 3 || grid_h < 3)
            break;

        std::vector<ResponseMap> maps;
        maps.reserve(params.levels);
        bool any = false;
        for (int i = 0; i < params.levels; ++i) {
            ResponseMap m;
            m.filter_size = base_size + i * size_step;
            m.step = step;
            m.grid_w = grid_w;
            m.grid_h = grid_h;
            m.values.assign(static_cast<size_t>(grid_w) * grid_h, 0.f);
            const int border = (m.filter_size - 1) / 2;
            for (int gy = 0; gy < grid_h; ++gy) {
                int y = gy * step;
                if (y < border || y + border >= img.height())
                    continue;
                for (int gx = 0; gx < grid_w; ++gx) {
                    int x = gx * step;
                    if (x < border || x + border >= img.width())
                        continue;
                    m.values[static_cast<size_t>(gy) * grid_w + gx] =
                        static_cast<float>(
                            hessian_response(ii, x, y, m.filter_size,
                                             params.lobe_weight).det);
                    any = true;
                }
            }
            maps.push_back(std::move(m));
        }
        if (!any)
            break;

        for (int l = 1; l + 1 < static_cast<int>(maps.size()); ++l) {
            const ResponseMap& b = maps[l - 1];
            const ResponseMap& m = maps[l];
            const ResponseMap& t = maps[l + 1];
            for (int gy = 1; gy + 1 < grid_h; ++gy) {
                for (int gx = 1; gx + 1 < grid_w; ++gx) {
                    float v = m.at(gx, gy);
                    if (v <= params.threshold)
                        continue;
                    bool peak = true;
                    for (int dy = -1; dy <= 1 && peak; ++dy)
                        for (int dx = -1; dx <= 1; ++dx) {
                            if (t.at(gx + dx, gy + dy) >= v ||
                                b.at(gx + dx, gy + dy) >= v ||
                                ((dx || dy) && m.at(gx + dx, gy + dy) >= v)) {
                                peak = false;
                                break;
                            }
                        }
                    if (!peak)
                        continue;

                    int cx = gx, cy = gy, cl = l;
                    double off[3] = {0, 0, 0};
                    double g[3] = {0, 0, 0};
                    bool ok = false;
                    for (int attempt = 0; attempt < params.max_refine_steps; ++attempt) {
                        const ResponseMap& lo = maps[cl - 1];
                        const ResponseMap& mid = maps[cl];
                        const ResponseMap& hi = maps[cl + 1];
                        auto V = [&](int dl, int dy, int dx) -> double {
                            const ResponseMap& mm = dl < 0 ? lo : (dl > 0 ? hi : mid);
                            return mm.at(cx + dx, cy + dy);
                        };
                        g[0] = 0.5 * (V(0, 0, 1) - V(0, 0, -1));
                        g[1] = 0.5 * (V(0, 1, 0) - V(0, -1, 0));
                        g[2] = 0.5 * (V(1, 0, 0) - V(-1, 0, 0));
                        double ctr = V(0, 0, 0);
                        double H[9];
                        H[0] = V(0, 0, 1) + V(0, 0, -1) - 2 * ctr;
                        H[4] = V(0, 1, 0) + V(0, -1, 0) - 2 * ctr;
                        H[8] = V(1, 0, 0) + V(-1, 0, 0) - 2 * ctr;
                        H[1] = H[3] = 0.25 * (V(0, 1, 1) - V(0, 1, -1) - V(0, -1, 1) + V(0, -1, -1));
                        H[2] = H[6] = 0.25 * (V(1, 0, 1) - V(1, 0, -1) - V(-1, 0, 1) + V(-1, 0, -1));
                        H[5] = H[7] = 0.25 * (V(1, 1, 0) - V(1, -1, 0) - V(-1, 1, 0) + V(-1, -1, 0));
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
                        if (nx < 1 || nx + 1 >= grid_w || ny < 1 || ny + 1 >= grid_h ||
                            nL < 1 || nL + 1 >= static_cast<int>(maps.size()))
                            break;
                        cx = nx; cy = ny; cl = nL;
                    }
                    if (!ok)
                        continue;

                    double refined = maps[cl].at(cx, cy) +
                                     0.5 * (g[0] * off[0] + g[1] * off[1] + g[2] * off[2]);
                    if (refined <= params.threshold)
                        continue;

                    Keypoint kp;
                    kp.x = static_cast<float>((cx + off[0]) * step);
                    kp.y = static_cast<float>((cy + off[1]) * step);
                    if (kp.x < 0.f || kp.x > static_cast<float>(img.width() - 1) ||
                        kp.y < 0.f || kp.y > static_cast<float>(img.height() - 1))
                        continue;
                    double size = maps[cl].filter_size + off[2] * size_step;
                    kp.scale = static_cast<float>(1.2 * size / 9.0);
                    kp.response = static_cast<float>(refined);
                    kp.octave = o;
                    kp.detector = DetectorKind::fast_hessian;
                    out.push_back(kp);
                }
            }
        }
        base_size += size_step; // next octave starts one spacing further out
    }
    sort_keypoints(out);
    return out;
}

} // namespace featkit
