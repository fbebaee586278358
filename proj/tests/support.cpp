#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <set>

#include "featkit/match/matching.hpp"

using namespace featkit;

namespace testsup {

GrayImage random_image(int w, int h, uint64_t seed, float lo, float hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> dist(lo, hi);
    GrayImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            img.at(x, y) = dist(rng);
    return img;
}

double box_sum_naive(const GrayImage& img, int x0, int y0, int x1, int y1) {
    double sum = 0.0;
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            sum += img.at(x, y);
    return sum;
}

namespace {

struct LevelLabels {
    std::vector<int32_t> label; // -1 above threshold
    std::vector<int> area;      // by label id
};

// connected components (4-neighbour) of {quantized <= t}
LevelLabels label_level(const std::vector<uint8_t>& q, int w, int h, int t) {
    LevelLabels L;
    L.label.assign(q.size(), -1);
    int next = 0;
    std::deque<int> queue;
    for (size_t start = 0; start < q.size(); ++start) {
        if (q[start] > t || L.label[start] != -1)
            continue;
        int id = next++;
        int count = 0;
        queue.push_back(static_cast<int>(start));
        L.label[start] = id;
        while (!queue.empty()) {
            int p = queue.front();
            queue.pop_front();
            ++count;
            int x = p % w, y = p / w;
            const int nx[4] = {x - 1, x + 1, x, x};
            const int ny[4] = {y, y, y - 1, y + 1};
            for (int k = 0; k < 4; ++k) {
                if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h)
                    continue;
                int np = ny[k] * w + nx[k];
                if (q[np] <= t && L.label[np] == -1) {
                    L.label[np] = id;
                    queue.push_back(np);
                }
            }
        }
        L.area.push_back(count);
    }
    return L;
}

void sweep_polarity(const std::vector<uint8_t>& q, int w, int h, int delta, int min_area,
                    int max_area, std::vector<std::pair<double, double>>& out) {
    std::vector<LevelLabels> levels(256);
    for (int t = 0; t < 256; ++t)
        levels[t] = label_level(q, w, h, t);

    std::set<std::pair<int, int>> emitted; // (rep pixel, area) of stable regions
    for (int t = delta; t + delta < 256; ++t) {
        const LevelLabels& L = levels[t];
        std::vector<int> rep(L.area.size(), -1);
        for (size_t p = 0; p < L.label.size(); ++p)
            if (L.label[p] >= 0 && rep[L.label[p]] < 0)
                rep[L.label[p]] = static_cast<int>(p);
        for (size_t c = 0; c < L.area.size(); ++c) {
            int a = L.area[c];
            if (a < min_area || a > max_area)
                continue;
            int p = rep[c];
            if (q[p] > t - delta)
                continue; // did not exist delta levels below
            int32_t lo = levels[t - delta].label[p];
            int32_t hi = levels[t + delta].label[p];
            if (levels[t - delta].area[lo] != a || levels[t + delta].area[hi] != a)
                continue; // area moved: not stable
            if (!emitted.insert({p, a}).second)
                continue;
            double sx = 0, sy = 0;
            for (size_t i = 0; i < L.label.size(); ++i)
                if (L.label[i] == static_cast<int32_t>(c)) {
                    sx += static_cast<double>(i % w);
                    sy += static_cast<double>(i / w);
                }
            out.emplace_back(sx / a, sy / a);
        }
    }
}

} // namespace

std::vector<std::pair<double, double>> stable_region_centroids(const GrayImage& img, int delta,
                                                               int min_area, int max_area) {
    const int w = img.width(), h = img.height();
    std::vector<uint8_t> q(static_cast<size_t>(w) * h), qi(q.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            float v = std::min(255.f, std::max(0.f, img.at(x, y)));
            q[static_cast<size_t>(y) * w + x] = static_cast<uint8_t>(std::lround(v));
        }
    for (size_t i = 0; i < q.size(); ++i)
        qi[i] = static_cast<uint8_t>(255 - q[i]);

    std::vector<std::pair<double, double>> out;
    sweep_polarity(q, w, h, delta, min_area, max_area, out);
    sweep_polarity(qi, w, h, delta, min_area, max_area, out);
    return out;
}

float fast_score_naive(const GrayImage& img, int x, int y, float t, int arc_len) {
    static const int ring[16][2] = {{0, -3}, {1, -3},  {2, -2},  {3, -1},  {3, 0},   {3, 1},
                                    {2, 2},  {1, 3},   {0, 3},   {-1, 3},  {-2, 2},  {-3, 1},
                                    {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3}};
    float c = img.at(x, y);
    double best = -1.0;
    for (int polarity = 0; polarity < 2; ++polarity) {
        for (int start = 0; start < 16; ++start) {
            for (int len = arc_len; len <= 16; ++len) {
                double sum = 0.0;
                bool ok = true;
                for (int i = 0; i < len && ok; ++i) {
                    float p = img.at(x + ring[(start + i) & 15][0], y + ring[(start + i) & 15][1]);
                    float term = polarity == 0 ? p - c - t : c - p - t;
                    if (term > 0.f)
                        sum += term;
                    else
                        ok = false;
                }
                if (ok)
                    best = std::max(best, sum);
            }
        }
    }
    return static_cast<float>(best);
}

namespace {

uint64_t fnv1a(const uint8_t* data, size_t n) {
    uint64_t h = 1469598103934665603ull;
    for (size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

std::vector<Knn2Row> knn2_naive(const DescriptorSet& query, const DescriptorSet& train) {
    std::vector<Knn2Row> out;
    for (size_t i = 0; i < query.size(); ++i) {
        struct Cand {
            float d;
            uint64_t hash;
            uint32_t idx;
        };
        std::vector<Cand> cands;
        for (size_t j = 0; j < train.size(); ++j) {
            const uint8_t* bytes = train.binary()
                                       ? train.brow(j)
                                       : reinterpret_cast<const uint8_t*>(train.frow(j));
            cands.push_back({descriptor_distance(query, i, train, j),
                             fnv1a(bytes, train.bytes_per_row()), static_cast<uint32_t>(j)});
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.d != b.d)
                return a.d < b.d;
            if (a.hash != b.hash)
                return a.hash < b.hash;
            return a.idx < b.idx;
        });
        out.push_back({cands[0].idx, cands[0].d, cands[1].idx, cands[1].d});
    }
    return out;
}

DescriptorSet random_float_set(size_t rows, DescriptorKind kind, uint64_t seed) {
    DescriptorSet set;
    set.kind = kind;
    set.dim = descriptor_dim(kind);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> dist(0.f, 1.f);
    set.fdata.resize(rows * static_cast<size_t>(set.dim));
    for (float& v : set.fdata)
        v = dist(rng);
    set.keypoints.resize(rows);
    return set;
}

DescriptorSet random_binary_set(size_t rows, DescriptorKind kind, uint64_t seed) {
    DescriptorSet set;
    set.kind = kind;
    set.dim = descriptor_dim(kind);
    std::mt19937_64 rng(seed);
    set.bdata.resize(rows * set.bytes_per_row());
    for (uint8_t& b : set.bdata)
        b = static_cast<uint8_t>(rng() & 0xff);
    set.keypoints.resize(rows);
    return set;
}

} // namespace testsup
