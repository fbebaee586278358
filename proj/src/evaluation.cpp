#include "featkit/eval/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace featkit {

namespace {

bool interior(float x, float y, float scale, ImageSize size, float factor) {
    float m = std::ceil(factor * scale);
    return x >= m && y >= m && x <= static_cast<float>(size.width - 1) - m &&
           y <= static_cast<float>(size.height - 1) - m;
}

} // namespace

Keypoint project_keypoint(const Keypoint& kp, const Homography& h) {
    Point2 p = h.apply({kp.x, kp.y});
    auto J = h.jacobian({kp.x, kp.y});
    double detj = std::abs(J[0] * J[3] - J[1] * J[2]);
    if (detj < 1e-12)
        raise(ErrorCode::projection_error, "keypoint projects to a degenerate patch");
    Keypoint out = kp;
    out.x = static_cast<float>(p.x);
    out.y = static_cast<float>(p.y);
    out.scale = kp.scale * static_cast<float>(std::sqrt(detj));
    return out;
}

CorrespondenceResult find_correspondences(const std::vector<Keypoint>& kps_a,
                                          const std::vector<Keypoint>& kps_b,
                                          const Homography& h, ImageSize size_a,
                                          ImageSize size_b,
                                          const CorrespondenceParams& params) {
    if (!(params.eps_pos > 0.f) || !(params.tau >= 1.f))
        raise(ErrorCode::invalid_parameter, "need eps_pos > 0 and tau >= 1");
    Homography hinv = h.inverse();
    const float f = params.visibility_margin_factor;

    // project A into B once; visibility needs both footprints inside
    std::vector<Keypoint> proj_a(kps_a.size());
    std::vector<char> vis_a(kps_a.size(), 0);
    uint32_t visible_a = 0;
    for (size_t i = 0; i < kps_a.size(); ++i) {
        if (!interior(kps_a[i].x, kps_a[i].y, kps_a[i].scale, size_a, f))
            continue;
        try {
            proj_a[i] = project_keypoint(kps_a[i], h);
        } catch (const Error&) {
            continue;
        }
        if (!interior(proj_a[i].x, proj_a[i].y, proj_a[i].scale, size_b, f))
            continue;
        vis_a[i] = 1;
        ++visible_a;
    }
    std::vector<char> vis_b(kps_b.size(), 0);
    uint32_t visible_b = 0;
    for (size_t j = 0; j < kps_b.size(); ++j) {
        if (!interior(kps_b[j].x, kps_b[j].y, kps_b[j].scale, size_b, f))
            continue;
        try {
            Keypoint back = project_keypoint(kps_b[j], hinv);
            if (!interior(back.x, back.y, back.scale, size_a, f))
                continue;
        } catch (const Error&) {
            continue;
        }
        vis_b[j] = 1;
        ++visible_b;
    }

    std::vector<Correspondence> cand;
    for (size_t i = 0; i < kps_a.size(); ++i) {
        if (!vis_a[i])
            continue;
        for (size_t j = 0; j < kps_b.size(); ++j) {
            if (!vis_b[j])
                continue;
            float dx = proj_a[i].x - kps_b[j].x;
            float dy = proj_a[i].y - kps_b[j].y;
            float err = std::sqrt(dx * dx + dy * dy);
            if (err > params.eps_pos)
                continue;
            float hi = std::max(proj_a[i].scale, kps_b[j].scale);
            float lo = std::min(proj_a[i].scale, kps_b[j].scale);
            if (hi > params.tau * lo)
                continue;
            cand.push_back({static_cast<uint32_t>(i), static_cast<uint32_t>(j), err});
        }
    }
    std::sort(cand.begin(), cand.end(), [](const Correspondence& x, const Correspondence& y) {
        if (x.error != y.error) return x.error < y.error;
        if (x.index_a != y.index_a) return x.index_a < y.index_a;
        return x.index_b < y.index_b;
    });

    CorrespondenceResult result;
    result.visible_a = visible_a;
    result.visible_b = visible_b;
    std::vector<char> used_a(kps_a.size(), 0), used_b(kps_b.size(), 0);
    for (const auto& c : cand) {
        if (used_a[c.index_a] || used_b[c.index_b])
            continue;
        used_a[c.index_a] = 1;
        used_b[c.index_b] = 1;
        result.pairs.push_back(c);
    }
    return result;
}

double repeatability(const std::vector<Keypoint>& kps_a,
                     const std::vector<Keypoint>& kps_b, const Homography& h,
                     ImageSize size_a, ImageSize size_b,
                     const CorrespondenceParams& params) {
    CorrespondenceResult r =
        find_correspondences(kps_a, kps_b, h, size_a, size_b, params);
    uint32_t denom = std::min(r.visible_a, r.visible_b);
    if (denom == 0)
        return 0.0;
    return static_cast<double>(r.pairs.size()) / static_cast<double>(denom);
}

MatchScore score_matches(const std::vector<Match>& matches,
                         const std::vector<Keypoint>& query_kps,
                         const std::vector<Keypoint>& train_kps,
                         const Homography& h,
                         const CorrespondenceParams& params) {
    MatchScore score{static_cast<uint32_t>(matches.size()), 0};
    for (const auto& m : matches) {
        if (m.query >= query_kps.size() || m.train >= train_kps.size())
            raise(ErrorCode::out_of_bounds, "match indexes a missing keypoint");
        Keypoint proj;
        try {
            proj = project_keypoint(query_kps[m.query], h);
        } catch (const Error&) {
            continue; // projects to infinity: not correct, keep counting
        }
        const Keypoint& t = train_kps[m.train];
        float dx = proj.x - t.x;
        float dy = proj.y - t.y;
        if (std::sqrt(dx * dx + dy * dy) > params.eps_pos)
            continue;
        ++score.n_correct;
    }
    return score;
}

} // namespace featkit
