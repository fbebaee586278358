#include "featkit/bench/conditions.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace featkit {

namespace {

std::string format_value(double v, const char* suffix, bool forced_sign = false) {
    char buf[48];
    if (forced_sign)
        std::snprintf(buf, sizeof buf, "%+g%s", v, suffix);
    else
        std::snprintf(buf, sizeof buf, "%g%s", v, suffix);
    return buf;
}

} // namespace

std::vector<Condition> make_exposure_conditions(const GrayImage& img,
                                                const std::vector<double>& evs) {
    std::vector<Condition> out;
    for (double ev : evs) {
        Condition c;
        c.family = "exposure";
        c.label = format_value(ev, "ev", true);
        c.value = ev;
        c.image = adjust_exposure(img, static_cast<float>(ev));
        c.h = Homography::identity();
        out.push_back(std::move(c));
    }
    return out;
}

Homography viewpoint_homography(int width, int height, double degrees) {
    if (width < 2 || height < 2)
        raise(ErrorCode::invalid_parameter, "image too small for a viewpoint warp");
    double rad = degrees * std::numbers::pi / 180.0;
    double f = static_cast<double>(width);
    double cx = (width - 1) / 2.0;
    double cy = (height - 1) / 2.0;
    double cr = std::cos(rad), sr = std::sin(rad);

    Homography K;
    K.m = {f, 0, cx, 0, f, cy, 0, 0, 1};
    Homography Kinv;
    Kinv.m = {1 / f, 0, -cx / f, 0, 1 / f, -cy / f, 0, 0, 1};
    Homography R;
    R.m = {cr, 0, sr, 0, 1, 0, -sr, 0, cr};

    Homography H = K.composed_with(R).composed_with(Kinv);
    // pin the center point back onto itself
    Point2 moved = H.apply({cx, cy});
    Homography T = Homography::translation(cx - moved.x, cy - moved.y);
    return T.composed_with(H).normalized();
}

std::vector<Condition> make_viewpoint_conditions(const GrayImage& img,
                                                 const std::vector<double>& degs) {
    std::vector<Condition> out;
    for (double deg : degs) {
        Condition c;
        c.family = "viewpoint";
        c.label = format_value(deg, "deg");
        c.value = deg;
        c.h = viewpoint_homography(img.width(), img.height(), deg);
        c.image = warp_homography(img, c.h, img.width(), img.height()).image;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Condition> make_rotation_conditions(const GrayImage& img,
                                                const std::vector<double>& degs) {
    std::vector<Condition> out;
    for (double deg : degs) {
        double rad = deg * std::numbers::pi / 180.0;
        double cx = (img.width() - 1) / 2.0;
        double cy = (img.height() - 1) / 2.0;
        Homography R = Homography::rotation(rad, cx, cy);
        // bounding box of the rotated corner pixel centers
        double minx = 1e30, miny = 1e30, maxx = -1e30, maxy = -1e30;
        const double xs[2] = {0.0, static_cast<double>(img.width() - 1)};
        const double ys[2] = {0.0, static_cast<double>(img.height() - 1)};
        for (double x : xs)
            for (double y : ys) {
                Point2 p = R.apply({x, y});
                minx = std::min(minx, p.x);
                maxx = std::max(maxx, p.x);
                miny = std::min(miny, p.y);
                maxy = std::max(maxy, p.y);
            }
        Homography H = Homography::translation(-minx, -miny).composed_with(R);
        int w = static_cast<int>(std::lround(maxx - minx)) + 1;
        int h = static_cast<int>(std::lround(maxy - miny)) + 1;

        Condition c;
        c.family = "rotation";
        c.label = format_value(deg, "deg");
        c.value = deg;
        c.h = H;
        c.image = warp_homography(img, H, w, h).image;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Condition> make_scale_conditions(const GrayImage& img,
                                             const std::vector<double>& factors) {
    std::vector<Condition> out;
    for (double f : factors) {
        if (!(f > 0.0))
            raise(ErrorCode::invalid_parameter, "scale factor must be positive");
        int w = std::max(1, static_cast<int>(std::lround(img.width() * f)));
        int h = std::max(1, static_cast<int>(std::lround(img.height() * f)));
        Condition c;
        c.family = "scale";
        c.label = format_value(f, "x");
        c.value = f;
        c.h = Homography::scaling(f, f);
        c.image = warp_homography(img, c.h, w, h).image;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Condition> make_conditions(const GrayImage& img, const std::string& family,
                                       const std::vector<double>& values) {
    if (family == "exposure")
        return make_exposure_conditions(img, values);
    if (family == "viewpoint")
        return make_viewpoint_conditions(img, values);
    if (family == "rotation")
        return make_rotation_conditions(img, values);
    if (family == "scale")
        return make_scale_conditions(img, values);
    raise(ErrorCode::invalid_parameter, "unknown condition family '" + family + "'");
}

} // namespace featkit
