#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <set>
#include <vector>

#include "doctest.h"
#include "support.hpp"

#include "featkit/bench/synthetic.hpp"
#include "featkit/desc/describe.hpp"
#include "featkit/desc/patterns.hpp"
#include "featkit/detect/dog.hpp"
#include "featkit/geometry.hpp"
#include "featkit/match/matching.hpp"

using namespace featkit;

namespace {

constexpr double kPi = std::numbers::pi;

GrayImage textured(int w, int h, uint64_t seed) {
    return gaussian_blur(testsup::random_image(w, h, seed, 0.f, 255.f), 1.5f);
}

GrayImage ramp_x(int w, int h, float base, float slope) {
    GrayImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            img.at(x, y) = base + slope * static_cast<float>(x);
    return img;
}

GrayImage ramp_y(int w, int h, float base, float slope) {
    GrayImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            img.at(x, y) = base + slope * static_cast<float>(y);
    return img;
}

Keypoint centered_kp(const GrayImage& img, float scale, float orientation = 0.f) {
    Keypoint kp;
    kp.x = static_cast<float>(img.width() - 1) / 2.f;
    kp.y = static_cast<float>(img.height() - 1) / 2.f;
    kp.scale = scale;
    kp.orientation = orientation;
    return kp;
}

double l2_dist(const std::vector<float>& a, const std::vector<float>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

int hamming(const std::array<uint8_t, 64>& a, const std::array<uint8_t, 64>& b) {
    int d = 0;
    for (size_t i = 0; i < 64; ++i) {
        uint8_t x = a[i] ^ b[i];
        while (x) {
            d += x & 1;
            x >>= 1;
        }
    }
    return d;
}

int get_bit(const std::array<uint8_t, 64>& bits, int k) {
    return (bits[static_cast<size_t>(k) / 8] >> (k % 8)) & 1;
}

float wrap_angle(float a) {
    while (a > static_cast<float>(kPi))
        a -= 2.f * static_cast<float>(kPi);
    while (a <= -static_cast<float>(kPi))
        a += 2.f * static_cast<float>(kPi);
    return a;
}

} // namespace

// -------------------------------------------------------------- patterns

TEST_CASE("brisk pattern geometry") {
    const BriskPattern& p = BriskPattern::instance();
    REQUIRE(p.points.size() == 60);
    REQUIRE(p.short_pairs.size() == 512);
    CHECK(p.long_pairs.size() > 0);
    CHECK(p.margin > 10.8f);

    std::set<uint32_t> shorts;
    float short_max = 0.f;
    for (const PatternPair& pr : p.short_pairs) {
        CHECK(pr.a < pr.b);
        CHECK(pr.b < 60);
        shorts.insert(uint32_t(pr.a) << 16 | pr.b);
        short_max = std::max(short_max, pr.dist);
    }
    CHECK(shorts.size() == 512); // no duplicate pairs
    float long_min = 1e9f;
    for (const PatternPair& pr : p.long_pairs) {
        CHECK(pr.a < pr.b);
        CHECK(pr.b < 60);
        CHECK(shorts.count(uint32_t(pr.a) << 16 | pr.b) == 0); // disjoint
        long_min = std::min(long_min, pr.dist);
    }
    CHECK(short_max <= p.split_distance);
    CHECK(long_min > p.split_distance);
    // center point present
    CHECK(p.points[0].x == 0.f);
    CHECK(p.points[0].y == 0.f);
    for (const PatternPoint& pt : p.points)
        CHECK(pt.sigma > 0.f);
}

TEST_CASE("freak pattern geometry") {
    const FreakPattern& p = FreakPattern::instance();
    REQUIRE(p.points.size() == 43);
    REQUIRE(p.pairs.size() == 512);
    REQUIRE(p.orientation_pairs.size() == 45);
    CHECK(p.margin > 0.f);

    std::set<uint32_t> seen;
    for (const PatternPair& pr : p.pairs) {
        CHECK(pr.a < pr.b);
        CHECK(pr.b < 43);
        seen.insert(uint32_t(pr.a) << 16 | pr.b);
    }
    CHECK(seen.size() == 512);
    // coarse-to-fine: the first comparison bit uses the widest pair and the
    // head of the list is clearly wider than the tail
    for (const PatternPair& pr : p.pairs)
        CHECK(p.pairs[0].dist >= pr.dist);
    double head = 0.0, tail = 0.0;
    for (int i = 0; i < 50; ++i) {
        head += p.pairs[i].dist;
        tail += p.pairs[511 - i].dist;
    }
    CHECK(head > tail);
    // receptive field size grows with eccentricity
    CHECK(p.points[0].sigma > p.points[42].sigma);
}

// ----------------------------------------------------------- orientation

TEST_CASE("orientation: axis-aligned ramps land on the axis angles") {
    GrayImage gx = ramp_x(64, 64, 10.f, 1.5f);
    Keypoint kp = centered_kp(gx, 3.f);
    std::vector<Keypoint> out = assign_orientation(gx, kp);
    REQUIRE(out.size() == 1);
    CHECK(std::abs(wrap_angle(out[0].orientation)) <= 5.0 * kPi / 180.0);

    GrayImage gy = ramp_y(64, 64, 10.f, 1.5f);
    out = assign_orientation(gy, centered_kp(gy, 3.f));
    REQUIRE(out.size() == 1);
    CHECK(std::abs(out[0].orientation - kPi / 2) <= 5.0 * kPi / 180.0);
}

TEST_CASE("orientation: constant patch and border windows yield nothing") {
    GrayImage flat(64, 64, 80.f);
    CHECK(assign_orientation(flat, centered_kp(flat, 3.f)).empty());

    GrayImage tex = textured(64, 64, 31);
    Keypoint edge;
    edge.x = 2.f;
    edge.y = 32.f;
    edge.scale = 3.f;
    CHECK(assign_orientation(tex, edge).empty());
}

TEST_CASE("orientation: every returned copy differs only in orientation") {
    GrayImage tex = textured(96, 96, 32);
    Keypoint kp = centered_kp(tex, 2.5f);
    kp.response = 7.f;
    std::vector<Keypoint> out = assign_orientation(tex, kp);
    REQUIRE(!out.empty());
    for (const Keypoint& o : out) {
        CHECK(o.x == kp.x);
        CHECK(o.y == kp.y);
        CHECK(o.scale == kp.scale);
        CHECK(o.response == kp.response);
        CHECK(o.orientation > -kPi - 1e-6);
        CHECK(o.orientation <= kPi + 1e-6);
    }
}

// ------------------------------------------------------------------ SIFT

TEST_CASE("sift: norm, clamp, and shape on textured input") {
    GrayImage tex = textured(128, 128, 33);
    std::vector<Keypoint> oriented = assign_orientation(tex, centered_kp(tex, 3.f));
    REQUIRE(!oriented.empty());
    std::vector<float> d = sift_descriptor(tex, oriented[0]);
    REQUIRE(d.size() == 128);
    double norm2 = 0.0;
    for (float v : d) {
        CHECK(v >= 0.f);
        CHECK(v <= 0.2f + 1e-6f);
        norm2 += double(v) * v;
    }
    CHECK(std::sqrt(norm2) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("sift: degenerate and out-of-bounds windows raise") {
    GrayImage flat(64, 64, 50.f);
    CHECK_THROWS_AS(sift_descriptor(flat, centered_kp(flat, 2.f)), Error);
    try {
        sift_descriptor(flat, centered_kp(flat, 2.f));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::degenerate_descriptor);
    }

    GrayImage tex = textured(64, 64, 34);
    Keypoint border;
    border.x = 3.f;
    border.y = 3.f;
    border.scale = 3.f;
    try {
        sift_descriptor(tex, border);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::out_of_bounds);
    }
}

TEST_CASE("sift: 30 degree rotation keeps the descriptor close") {
    GrayImage a = textured(128, 128, 35);
    const double angle = kPi / 6.0;
    WarpResult rot = warp_homography(a, Homography::rotation(angle, 63.5, 63.5), 128, 128);

    std::vector<Keypoint> oa = assign_orientation(a, centered_kp(a, 3.f));
    REQUIRE(!oa.empty());
    Keypoint kb = oa[0];
    kb.orientation = wrap_angle(oa[0].orientation + static_cast<float>(angle));

    std::vector<float> da = sift_descriptor(a, oa[0]);
    std::vector<float> db = sift_descriptor(rot.image, kb);
    CHECK(l2_dist(da, db) < 0.35);
}

// ------------------------------------------------------------------ SURF

TEST_CASE("surf: pure ramps produce the expected subregion structure") {
    GrayImage gx = ramp_x(128, 128, 5.f, 1.f);
    IntegralImage ii(gx);
    Keypoint kp = centered_kp(gx, 2.f);
    std::vector<float> d = surf_descriptor(gx, ii, kp);
    REQUIRE(d.size() == 64);
    double norm2 = 0.0;
    for (int cell = 0; cell < 16; ++cell) {
        CHECK(d[cell * 4 + 0] > 0.f);             // sum dx positive everywhere
        CHECK(d[cell * 4 + 0] == d[cell * 4 + 2]); // sum dx == sum |dx| exactly
        CHECK(d[cell * 4 + 1] == 0.f);             // no dy response at all
        CHECK(d[cell * 4 + 3] == 0.f);
    }
    for (float v : d)
        norm2 += double(v) * v;
    CHECK(std::sqrt(norm2) == doctest::Approx(1.0).epsilon(1e-6));

    GrayImage gy = ramp_y(128, 128, 5.f, 1.f);
    IntegralImage iiy(gy);
    d = surf_descriptor(gy, iiy, centered_kp(gy, 2.f));
    for (int cell = 0; cell < 16; ++cell) {
        CHECK(d[cell * 4 + 0] == 0.f);
        CHECK(d[cell * 4 + 1] > 0.f);
        CHECK(d[cell * 4 + 1] == d[cell * 4 + 3]);
        CHECK(d[cell * 4 + 2] == 0.f);
    }
}

TEST_CASE("surf: horizontal mirror negates dx sums across mirrored cells") {
    // The 2s x 2s Haar footprint is centred half a pixel left of its sample,
    // so the mirror of a sample grid anchored at x lands on W - x (not
    // W - 1 - x); with integer-valued sample offsets both sides then read
    // exactly mirrored footprints.
    const int W = 101;
    GrayImage img = textured(W, 101, 36);
    GrayImage mir(W, 101);
    for (int y = 0; y < 101; ++y)
        for (int x = 0; x < W; ++x)
            mir.at(x, y) = img.at(W - 1 - x, y);

    Keypoint kp;
    kp.x = 50.f;
    kp.y = 50.f;
    kp.scale = 2.f;
    Keypoint km = kp;
    km.x = static_cast<float>(W) - kp.x;

    IntegralImage ii(img), iim(mir);
    std::vector<float> d = surf_descriptor(img, ii, kp);
    std::vector<float> dm = surf_descriptor(mir, iim, km);
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) {
            int c = (j * 4 + i) * 4;
            int cm = (j * 4 + (3 - i)) * 4;
            CHECK(std::abs(dm[cm + 0] + d[c + 0]) < 1e-5); // sum dx negated
            CHECK(std::abs(dm[cm + 1] - d[c + 1]) < 1e-5); // sum dy kept
            CHECK(std::abs(dm[cm + 2] - d[c + 2]) < 1e-5); // |dx| kept
            CHECK(std::abs(dm[cm + 3] - d[c + 3]) < 1e-5);
        }
    }
}

TEST_CASE("surf: degenerate and out-of-bounds windows raise") {
    GrayImage flat(64, 64, 10.f);
    IntegralImage ii(flat);
    try {
        surf_descriptor(flat, ii, centered_kp(flat, 1.5f));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::degenerate_descriptor);
    }

    GrayImage tex = textured(64, 64, 37);
    IntegralImage iit(tex);
    Keypoint border;
    border.x = 4.f;
    border.y = 30.f;
    border.scale = 2.f;
    try {
        surf_descriptor(tex, iit, border);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::out_of_bounds);
    }
}

// ---------------------------------------------------------------- binary

TEST_CASE("binary: constant image gives zero orientation and zero bits") {
    GrayImage flat(128, 128, 90.f);
    Keypoint kp = centered_kp(flat, 2.f);
    for (auto desc : {brisk_descriptor, freak_descriptor}) {
        BinaryResult r = desc(flat, kp, {});
        CHECK(r.alpha == 0.f);
        for (uint8_t byte : r.bits)
            CHECK(byte == 0);
    }
}

TEST_CASE("binary: ramp image bits follow the pattern geometry") {
    // On I = base + slope*x the smoothed sample at p is base + slope*p.x,
    // the aggregate gradient points along +x (the ring sets are symmetric
    // about the x axis), so bit k is simply x_b > x_a for pair k.
    GrayImage img = ramp_x(160, 160, 20.f, 0.8f);
    Keypoint kp = centered_kp(img, 2.f);

    BinaryResult rb = brisk_descriptor(img, kp, {});
    CHECK(std::abs(rb.alpha) < 1e-3f);
    const BriskPattern& bp = BriskPattern::instance();
    int checked = 0, ones = 0;
    for (int k = 0; k < 512; ++k) {
        const PatternPair& pr = bp.short_pairs[static_cast<size_t>(k)];
        float dx = bp.points[pr.b].x - bp.points[pr.a].x;
        if (std::abs(dx) < 0.15f)
            continue; // too close to a tie to predict through smoothing
        ++checked;
        int expect = dx > 0.f ? 1 : 0;
        ones += expect;
        CHECK(get_bit(rb.bits, k) == expect);
    }
    CHECK(checked > 300);
    CHECK(ones > 50);
    CHECK(ones < checked - 50);

    BinaryResult rf = freak_descriptor(img, kp, {});
    CHECK(std::abs(rf.alpha) < 1e-3f);
    const FreakPattern& fp = FreakPattern::instance();
    checked = 0;
    for (int k = 0; k < 512; ++k) {
        const PatternPair& pr = fp.pairs[static_cast<size_t>(k)];
        float dx = fp.points[pr.b].x - fp.points[pr.a].x;
        if (std::abs(dx) < 0.15f)
            continue;
        ++checked;
        CHECK(get_bit(rf.bits, k) == (dx > 0.f ? 1 : 0));
    }
    CHECK(checked > 300);
}

TEST_CASE("binary: doubling the gain flips no bit") {
    GrayImage img = textured(160, 160, 38);
    GrayImage twice(160, 160);
    for (int y = 0; y < 160; ++y)
        for (int x = 0; x < 160; ++x)
            twice.at(x, y) = 2.f * img.at(x, y); // pre-clamp float domain
    for (float scale : {1.5f, 2.f, 3.f}) {
        Keypoint kp = centered_kp(img, scale);
        BinaryResult a = brisk_descriptor(img, kp, {});
        BinaryResult b = brisk_descriptor(twice, kp, {});
        CHECK(a.alpha == b.alpha);
        CHECK(a.bits == b.bits);
        BinaryResult fa = freak_descriptor(img, kp, {});
        BinaryResult fb = freak_descriptor(twice, kp, {});
        CHECK(fa.alpha == fb.alpha);
        CHECK(fa.bits == fb.bits);
    }
}

TEST_CASE("binary: determinism and bounds") {
    GrayImage img = textured(160, 160, 39);
    Keypoint kp = centered_kp(img, 2.f);
    BinaryResult a1 = brisk_descriptor(img, kp, {});
    BinaryResult a2 = brisk_descriptor(img, kp, {});
    CHECK(a1.bits == a2.bits);
    CHECK(hamming(a1.bits, a2.bits) == 0);

    Keypoint border;
    border.x = 5.f;
    border.y = 80.f;
    border.scale = 2.f;
    try {
        brisk_descriptor(img, border, {});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::out_of_bounds);
    }
    try {
        freak_descriptor(img, border, {});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::out_of_bounds);
    }
}

TEST_CASE("freak: 45 degree rotation stays closer than an unrelated patch") {
    GrayImage a = textured(160, 160, 40);
    WarpResult rot = warp_homography(a, Homography::rotation(kPi / 4, 79.5, 79.5), 160, 160);
    GrayImage other = textured(160, 160, 41);

    Keypoint kp = centered_kp(a, 2.f);
    BinaryResult da = freak_descriptor(a, kp, {});
    BinaryResult db = freak_descriptor(rot.image, kp, {});
    BinaryResult dc = freak_descriptor(other, kp, {});
    CHECK(hamming(da.bits, db.bits) < hamming(da.bits, dc.bits));
}

TEST_CASE("rotation self-match beats the random-patch median") {
    // For 15/30/45 degree rotations the descriptor of the rotated patch
    // must be nearer than the median of 50 unrelated textures.
    GrayImage a = textured(160, 160, 42);
    Keypoint kp = centered_kp(a, 2.5f);

    std::vector<GrayImage> rando;
    for (uint64_t s = 100; s < 150; ++s)
        rando.push_back(textured(160, 160, s));

    for (double deg : {15.0, 30.0, 45.0}) {
        double angle = deg * kPi / 180.0;
        WarpResult rot = warp_homography(a, Homography::rotation(angle, 79.5, 79.5), 160, 160);

        // SIFT
        std::vector<Keypoint> oa = assign_orientation(a, kp);
        REQUIRE(!oa.empty());
        Keypoint kb = oa[0];
        kb.orientation = wrap_angle(oa[0].orientation + static_cast<float>(angle));
        std::vector<float> sa = sift_descriptor(a, oa[0]);
        std::vector<float> sb = sift_descriptor(rot.image, kb);
        std::vector<double> dists;
        for (const GrayImage& r : rando) {
            std::vector<Keypoint> orr = assign_orientation(r, kp);
            if (orr.empty())
                continue;
            dists.push_back(l2_dist(sa, sift_descriptor(r, orr[0])));
        }
        REQUIRE(dists.size() >= 40);
        std::sort(dists.begin(), dists.end());
        CHECK(l2_dist(sa, sb) < dists[dists.size() / 2]);

        // BRISK and FREAK handle orientation internally
        for (auto desc : {brisk_descriptor, freak_descriptor}) {
            BinaryResult ba = desc(a, kp, {});
            BinaryResult bb = desc(rot.image, kp, {});
            std::vector<int> hd;
            for (const GrayImage& r : rando)
                hd.push_back(hamming(ba.bits, desc(r, kp, {}).bits));
            std::sort(hd.begin(), hd.end());
            CHECK(hamming(ba.bits, bb.bits) < hd[hd.size() / 2]);
        }
    }
}

// ------------------------------------------------------------- set level

TEST_CASE("describe: rows stay aligned with keypoints, all four kinds") {
    // structured content: blurred noise has too little contrast for default DoG
    GrayImage img = synth_mixed(256, 256, 43);
    std::vector<Keypoint> kps = detect_dog(img);
    REQUIRE(kps.size() >= 3);

    for (DescriptorKind kind : {DescriptorKind::sift, DescriptorKind::surf,
                                DescriptorKind::brisk, DescriptorKind::freak}) {
        DescriptorSet set = describe(img, kps, kind);
        CHECK(set.kind == kind);
        CHECK(set.dim == descriptor_dim(kind));
        if (set.binary()) {
            CHECK(set.bdata.size() == set.size() * set.bytes_per_row());
            CHECK(set.fdata.empty());
        } else {
            CHECK(set.fdata.size() == set.size() * static_cast<size_t>(set.dim));
            CHECK(set.bdata.empty());
            for (size_t i = 0; i < set.size(); ++i) {
                double n2 = 0.0;
                for (int j = 0; j < set.dim; ++j)
                    n2 += double(set.frow(i)[j]) * set.frow(i)[j];
                CHECK(std::sqrt(n2) == doctest::Approx(1.0).epsilon(1e-5));
            }
        }
        // every emitted keypoint comes from the input list (orientation aside)
        for (const Keypoint& kp : set.keypoints) {
            bool from_input = false;
            for (const Keypoint& in : kps)
                if (in.x == kp.x && in.y == kp.y && in.scale == kp.scale)
                    from_input = true;
            CHECK(from_input);
        }
    }
}

TEST_CASE("describe: border keypoints are dropped, not fatal") {
    GrayImage img = textured(96, 96, 44);
    std::vector<Keypoint> kps;
    Keypoint kp;
    kp.x = 1.f;
    kp.y = 1.f;
    kp.scale = 3.f;
    kps.push_back(kp); // hopeless support window
    kp = centered_kp(img, 2.f);
    kps.push_back(kp);
    DescriptorSet set = describe(img, kps, DescriptorKind::sift);
    CHECK(set.size() >= 1);
    for (const Keypoint& out : set.keypoints)
        CHECK(out.x != 1.f);
}

TEST_CASE("fdsc container round trip") {
    namespace fs = std::filesystem;
    for (DescriptorKind kind : {DescriptorKind::sift, DescriptorKind::surf}) {
        DescriptorSet set = testsup::random_float_set(7, kind, 45);
        auto path = (fs::temp_directory_path() / "t.fdsc").string();
        save_fdsc(path, set);
        DescriptorSet back = load_fdsc(path);
        CHECK(back.kind == kind);
        CHECK(back.dim == set.dim);
        CHECK(back.fdata == set.fdata);
        CHECK(back.keypoints.size() == 7);
        fs::remove(path);
    }
    for (DescriptorKind kind : {DescriptorKind::brisk, DescriptorKind::freak}) {
        DescriptorSet set = testsup::random_binary_set(9, kind, 46);
        auto path = (fs::temp_directory_path() / "t.fdsc").string();
        save_fdsc(path, set);
        DescriptorSet back = load_fdsc(path);
        CHECK(back.kind == kind);
        CHECK(back.dim == 512);
        CHECK(back.bdata == set.bdata);
        CHECK(back.keypoints.size() == 9);
        fs::remove(path);
    }
}

TEST_CASE("fdsc container rejects damage with file offsets") {
    namespace fs = std::filesystem;
    auto path = (fs::temp_directory_path() / "bad.fdsc").string();

    CHECK_THROWS_AS(load_fdsc((fs::temp_directory_path() / "absent.fdsc").string()), Error);

    {
        std::vector<char> junk = {'N', 'O', 'P', 'E', 0, 0};
        FILE* f = std::fopen(path.c_str(), "wb");
        std::fwrite(junk.data(), 1, junk.size(), f);
        std::fclose(f);
    }
    try {
        load_fdsc(path);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::io);
        CHECK(doctest::String(e.what()) == doctest::Contains("offset"));
    }

    // truncated payload: valid header promising more rows than present
    DescriptorSet set = testsup::random_float_set(4, DescriptorKind::surf, 47);
    save_fdsc(path, set);
    fs::resize_file(path, fs::file_size(path) - 16);
    try {
        load_fdsc(path);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::io);
    }
    fs::remove(path);
}
