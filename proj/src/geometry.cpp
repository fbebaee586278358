#include "featkit/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace featkit {

namespace {

constexpr double kTinyDenominator = 1e-12;

std::array<double, 9> multiply(const std::array<double, 9>& a,
                               const std::array<double, 9>& b) {
    std::array<double, 9> r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r[i * 3 + j] = a[i * 3] * b[j] + a[i * 3 + 1] * b[3 + j] +
                           a[i * 3 + 2] * b[6 + j];
    return r;
}

} // namespace

Homography Homography::translation(double tx, double ty) {
    Homography h;
    h.m = {1, 0, tx, 0, 1, ty, 0, 0, 1};
    return h;
}

Homography Homography::scaling(double sx, double sy) {
    if (sx == 0.0 || sy == 0.0)
        raise(ErrorCode::invalid_parameter, "scale factors must be nonzero");
    Homography h;
    h.m = {sx, 0, 0, 0, sy, 0, 0, 0, 1};
    return h;
}

Homography Homography::rotation(double radians, double cx, double cy) {
    double c = std::cos(radians), s = std::sin(radians);
    Homography h;
    h.m = {c, -s, cx - c * cx + s * cy,
           s,  c, cy - s * cx - c * cy,
           0,  0, 1};
    return h;
}

Point2 Homography::apply(const Point2& p) const {
    double w = m[6] * p.x + m[7] * p.y + m[8];
    if (std::abs(w) < kTinyDenominator)
        raise(ErrorCode::projection_error,
              "point (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                  ") maps to infinity");
    double x = (m[0] * p.x + m[1] * p.y + m[2]) / w;
    double y = (m[3] * p.x + m[4] * p.y + m[5]) / w;
    return {x, y};
}

Homography Homography::inverse() const {
    const auto& a = m;
    std::array<double, 9> adj = {
        a[4] * a[8] - a[5] * a[7], a[2] * a[7] - a[1] * a[8], a[1] * a[5] - a[2] * a[4],
        a[5] * a[6] - a[3] * a[8], a[0] * a[8] - a[2] * a[6], a[2] * a[3] - a[0] * a[5],
        a[3] * a[7] - a[4] * a[6], a[1] * a[6] - a[0] * a[7], a[0] * a[4] - a[1] * a[3]};
    double det = a[0] * adj[0] + a[1] * adj[3] + a[2] * adj[6];
    if (std::abs(det) < kTinyDenominator)
        raise(ErrorCode::projection_error, "homography is singular");
    Homography inv;
    for (int i = 0; i < 9; ++i)
        inv.m[i] = adj[i] / det;
    return inv.normalized();
}

Homography Homography::composed_with(const Homography& inner) const {
    Homography r;
    r.m = multiply(m, inner.m);
    return r.normalized();
}

Homography Homography::normalized() const {
    Homography r = *this;
    if (std::abs(r.m[8]) > kTinyDenominator) {
        double s = 1.0 / r.m[8];
        for (double& v : r.m)
            v *= s;
    }
    return r;
}

std::array<double, 4> Homography::jacobian(const Point2& p) const {
    double w = m[6] * p.x + m[7] * p.y + m[8];
    if (std::abs(w) < kTinyDenominator)
        raise(ErrorCode::projection_error, "jacobian undefined at infinity");
    double u = m[0] * p.x + m[1] * p.y + m[2];
    double v = m[3] * p.x + m[4] * p.y + m[5];
    double iw = 1.0 / w, iw2 = iw * iw;
    // d(u/w)/dx, d(u/w)/dy, d(v/w)/dx, d(v/w)/dy
    return {m[0] * iw - u * m[6] * iw2, m[1] * iw - u * m[7] * iw2,
            m[3] * iw - v * m[6] * iw2, m[4] * iw - v * m[7] * iw2};
}

Homography load_homography(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        raise(ErrorCode::io, path + ": cannot open homography file");
    Homography h;
    for (int i = 0; i < 9; ++i) {
        if (!(in >> h.m[i]))
            raise(ErrorCode::io,
                  path + ": expected 9 numbers, failed at entry " + std::to_string(i));
    }
    return h;
}

void save_homography(const std::string& path, const Homography& h) {
    std::ofstream out(path);
    if (!out)
        raise(ErrorCode::io, path + ": cannot open for writing");
    char buf[64];
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            std::snprintf(buf, sizeof buf, "%.9f", h.m[r * 3 + c]);
            out << buf << (c == 2 ? '\n' : ' ');
        }
    }
    if (!out)
        raise(ErrorCode::io, path + ": write failed");
}

WarpResult warp_homography(const GrayImage& src, const Homography& h,
                           int dst_width, int dst_height) {
    if (dst_width <= 0 || dst_height <= 0)
        raise(ErrorCode::invalid_parameter, "warp canvas must be positive");
    Homography inv = h.inverse();
    WarpResult r{GrayImage(dst_width, dst_height, 0.f),
                 std::vector<uint8_t>(static_cast<size_t>(dst_width) * dst_height, 0)};
    const double w1 = src.width() - 1.0, h1 = src.height() - 1.0;
    for (int y = 0; y < dst_height; ++y) {
        for (int x = 0; x < dst_width; ++x) {
            double sw = inv.m[6] * x + inv.m[7] * y + inv.m[8];
            if (std::abs(sw) < kTinyDenominator)
                continue;
            double sx = (inv.m[0] * x + inv.m[1] * y + inv.m[2]) / sw;
            double sy = (inv.m[3] * x + inv.m[4] * y + inv.m[5]) / sw;
            // numerical inversion can push exact-border hits a few ulps
            // outside the source; snap those back instead of dropping pixels
            constexpr double kEdgeSnap = 1e-9;
            if (sx < 0.0 && sx > -kEdgeSnap) sx = 0.0;
            if (sy < 0.0 && sy > -kEdgeSnap) sy = 0.0;
            if (sx > w1 && sx < w1 + kEdgeSnap) sx = w1;
            if (sy > h1 && sy < h1 + kEdgeSnap) sy = h1;
            if (sx < 0.0 || sy < 0.0 || sx > w1 || sy > h1)
                continue;
            r.image.at(x, y) = src.bilinear(static_cast<float>(sx),
                                            static_cast<float>(sy));
            r.valid[static_cast<size_t>(y) * dst_width + x] = 1;
        }
    }
    return r;
}

} // namespace featkit
