#include "featkit/desc/patterns.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>

namespace featkit {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<PatternPair> all_pairs(const std::vector<PatternPoint>& pts) {
    std::vector<PatternPair> pairs;
    pairs.reserve(pts.size() * (pts.size() - 1) / 2);
    for (size_t a = 0; a + 1 < pts.size(); ++a) {
        for (size_t b = a + 1; b < pts.size(); ++b) {
            float dx = pts[b].x - pts[a].x;
            float dy = pts[b].y - pts[a].y;
            pairs.push_back({static_cast<uint16_t>(a), static_cast<uint16_t>(b),
                             std::sqrt(dx * dx + dy * dy)});
        }
    }
    return pairs;
}

} // namespace

const BriskPattern& BriskPattern::instance() {
    static const BriskPattern pattern = [] {
        BriskPattern p;
        const double radii[5] = {0.0, 2.9, 4.9, 7.4, 10.8};
        const int counts[5] = {1, 10, 14, 15, 20};
        const double sigma_scale = 1.3;
        for (int ring = 0; ring < 5; ++ring) {
            double sigma = ring == 0
                               ? sigma_scale * 0.5
                               : sigma_scale * radii[ring] * std::sin(kPi / counts[ring]);
            for (int i = 0; i < counts[ring]; ++i) {
                double a = 2.0 * kPi * i / counts[ring];
                p.points.push_back({static_cast<float>(radii[ring] * std::cos(a)),
                                    static_cast<float>(radii[ring] * std::sin(a)),
                                    static_cast<float>(sigma)});
            }
        }
        assert(p.points.size() == 60);

        p.split_distance = 13.67f;
        std::vector<PatternPair> pairs = all_pairs(p.points);
        std::vector<PatternPair> shorts;
        for (const auto& pr : pairs) {
            if (pr.dist > p.split_distance)
                p.long_pairs.push_back(pr);
            else
                shorts.push_back(pr);
        }
        // bits use the 512 closest pairs; keep enumeration order for the
        // bit layout so it is independent of the distance sort
        std::stable_sort(shorts.begin(), shorts.end(),
                         [](const PatternPair& x, const PatternPair& y) {
                             if (x.dist != y.dist) return x.dist < y.dist;
                             if (x.a != y.a) return x.a < y.a;
                             return x.b < y.b;
                         });
        assert(shorts.size() >= 512);
        shorts.resize(512);
        std::sort(shorts.begin(), shorts.end(),
                  [](const PatternPair& x, const PatternPair& y) {
                      if (x.a != y.a) return x.a < y.a;
                      return x.b < y.b;
                  });
        p.short_pairs = std::move(shorts);

        float m = 0.f;
        for (const auto& pt : p.points) {
            float r = std::sqrt(pt.x * pt.x + pt.y * pt.y) + 3.f * pt.sigma;
            m = std::max(m, r);
        }
        p.margin = m;
        return p;
    }();
    return pattern;
}

const FreakPattern& FreakPattern::instance() {
    static const FreakPattern pattern = [] {
        FreakPattern p;
        const int n_per_ring[8] = {6, 6, 6, 6, 6, 6, 6, 1};
        const double big_r = 2.0 / 3.0;
        const double small_r = 2.0 / 24.0;
        const double unit = (big_r - small_r) / 21.0;
        const double radii[8] = {big_r,
                                 big_r - 6 * unit,
                                 big_r - 11 * unit,
                                 big_r - 15 * unit,
                                 big_r - 18 * unit,
                                 big_r - 20 * unit,
                                 small_r,
                                 0.0};
        // receptive field sigma follows the ring radius; the center point
        // reuses the innermost ring's
        double sigmas[8];
        for (int i = 0; i < 7; ++i)
            sigmas[i] = radii[i] / 2.0;
        sigmas[7] = radii[6] / 2.0;

        // overall extent chosen so margin stays ~16x the keypoint scale
        const double extent = 12.0;
        for (int ring = 0; ring < 8; ++ring) {
            int n = n_per_ring[ring];
            double beta = kPi / 6.0 * (ring % 2); // stagger alternate rings
            for (int i = 0; i < n; ++i) {
                double a = 2.0 * kPi * i / n + beta;
                p.points.push_back(
                    {static_cast<float>(extent * radii[ring] * std::cos(a)),
                     static_cast<float>(extent * radii[ring] * std::sin(a)),
                     static_cast<float>(extent * sigmas[ring])});
            }
        }
        assert(p.points.size() == 43);

        // orientation: diametric and skip-one pairs in the 5 outer rings
        const int local[9][2] = {{0, 3}, {1, 4}, {2, 5}, {0, 2}, {1, 3},
                                 {2, 4}, {3, 5}, {4, 0}, {5, 1}};
        for (int ring = 0; ring < 5; ++ring) {
            for (const auto& lp : local) {
                int a = ring * 6 + lp[0];
                int b = ring * 6 + lp[1];
                if (a > b)
                    std::swap(a, b);
                float dx = p.points[b].x - p.points[a].x;
                float dy = p.points[b].y - p.points[a].y;
                p.orientation_pairs.push_back({static_cast<uint16_t>(a),
                                               static_cast<uint16_t>(b),
                                               std::sqrt(dx * dx + dy * dy)});
            }
        }
        assert(p.orientation_pairs.size() == 45);

        // comparison pairs: widest first, per-point usage capped; the cap
        // grows sweep by sweep because 43 points cannot host 512 pairs at
        // 12 uses each
        std::vector<PatternPair> pairs = all_pairs(p.points);
        std::stable_sort(pairs.begin(), pairs.end(),
                         [](const PatternPair& x, const PatternPair& y) {
                             if (x.dist != y.dist) return x.dist > y.dist;
                             if (x.a != y.a) return x.a < y.a;
                             return x.b < y.b;
                         });
        std::vector<int> used(p.points.size(), 0);
        std::vector<char> taken(pairs.size(), 0);
        int cap = 12;
        while (p.pairs.size() < 512) {
            for (size_t i = 0; i < pairs.size() && p.pairs.size() < 512; ++i) {
                if (taken[i])
                    continue;
                const auto& pr = pairs[i];
                if (used[pr.a] >= cap || used[pr.b] >= cap)
                    continue;
                taken[i] = 1;
                ++used[pr.a];
                ++used[pr.b];
                p.pairs.push_back(pr);
            }
            cap += 12;
        }

        float m = 0.f;
        for (const auto& pt : p.points) {
            float r = std::sqrt(pt.x * pt.x + pt.y * pt.y) + 2.f * pt.sigma;
            m = std::max(m, r);
        }
        p.margin = m;
        return p;
    }();
    return pattern;
}

} // namespace featkit
