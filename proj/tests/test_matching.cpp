#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "doctest.h"
#include "support.hpp"

#include "featkit/match/matching.hpp"

using namespace featkit;

namespace {

// sift-kind set whose rows are the given prefixes, zero-padded to 128
DescriptorSet float_set(const std::vector<std::vector<float>>& rows) {
    DescriptorSet set;
    set.kind = DescriptorKind::sift;
    set.dim = 128;
    set.fdata.assign(rows.size() * 128, 0.f);
    for (size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), set.fdata.begin() + i * 128);
    set.keypoints.resize(rows.size());
    return set;
}

DescriptorSet binary_rows(const std::vector<std::vector<uint8_t>>& rows) {
    DescriptorSet set;
    set.kind = DescriptorKind::brisk;
    set.dim = 512;
    set.bdata.assign(rows.size() * 64, 0);
    for (size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), set.bdata.begin() + i * 64);
    set.keypoints.resize(rows.size());
    return set;
}

} // namespace

// --------------------------------------------------------------- distance

TEST_CASE("distance: hand values") {
    // 3-4-5 in the first two float components
    DescriptorSet a = float_set({{3.f, 4.f}});
    DescriptorSet b = float_set({{0.f, 0.f}});
    CHECK(descriptor_distance(a, 0, b, 0) == doctest::Approx(5.0).epsilon(1e-6));

    // identical bit rows and complementary bit rows
    std::vector<uint8_t> zeros(64, 0), ones(64, 0xFF);
    DescriptorSet bits = binary_rows({zeros, ones, zeros});
    CHECK(descriptor_distance(bits, 0, bits, 2) == 0.f);
    CHECK(descriptor_distance(bits, 0, bits, 1) == 512.f);
}

TEST_CASE("distance: kind mismatch is rejected") {
    DescriptorSet sift = testsup::random_float_set(2, DescriptorKind::sift, 1);
    DescriptorSet surf = testsup::random_float_set(2, DescriptorKind::surf, 2);
    DescriptorSet brisk = testsup::random_binary_set(2, DescriptorKind::brisk, 3);
    DescriptorSet freak = testsup::random_binary_set(2, DescriptorKind::freak, 4);
    for (auto [x, y] : {std::pair<const DescriptorSet*, const DescriptorSet*>{&sift, &surf},
                        {&sift, &brisk},
                        {&brisk, &freak}}) {
        try {
            descriptor_distance(*x, 0, *y, 0);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::incompatible_descriptor);
        }
    }
}

TEST_CASE("distance: metric axioms on random triples") {
    DescriptorSet f = testsup::random_float_set(30, DescriptorKind::surf, 5);
    DescriptorSet b = testsup::random_binary_set(30, DescriptorKind::freak, 6);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<size_t> pick(0, 29);
    for (int t = 0; t < 200; ++t) {
        size_t i = pick(rng), j = pick(rng), k = pick(rng);
        CHECK(descriptor_distance(f, i, f, i) == 0.f);
        CHECK(descriptor_distance(f, i, f, j) == descriptor_distance(f, j, f, i));
        double lhs = descriptor_distance(f, i, f, k);
        double rhs = double(descriptor_distance(f, i, f, j)) + descriptor_distance(f, j, f, k);
        CHECK(lhs <= rhs + 1e-9);

        CHECK(descriptor_distance(b, i, b, i) == 0.f);
        CHECK(descriptor_distance(b, i, b, j) == descriptor_distance(b, j, b, i));
        CHECK(descriptor_distance(b, i, b, k) <=
              descriptor_distance(b, i, b, j) + descriptor_distance(b, j, b, k));
    }
}

// ------------------------------------------------------------------- knn2

TEST_CASE("knn2: hand-checkable one-dimensional layout") {
    DescriptorSet q = float_set({{0.f}});
    DescriptorSet t = float_set({{1.f}, {3.f}, {7.f}});
    std::vector<TwoNearest> nn = knn2(q, t);
    REQUIRE(nn.size() == 1);
    CHECK(nn[0].train1 == 0);
    CHECK(nn[0].d1 == doctest::Approx(1.0));
    CHECK(nn[0].train2 == 1);
    CHECK(nn[0].d2 == doctest::Approx(3.0));
}

TEST_CASE("knn2: exact hit gives distance zero") {
    DescriptorSet t = testsup::random_float_set(10, DescriptorKind::sift, 8);
    DescriptorSet q = float_set({{}});
    std::copy(t.frow(4), t.frow(4) + 128, q.fdata.begin());
    std::vector<TwoNearest> nn = knn2(q, t);
    REQUIRE(nn.size() == 1);
    CHECK(nn[0].train1 == 4);
    CHECK(nn[0].d1 == 0.f);
    CHECK(nn[0].d2 >= nn[0].d1);
    CHECK(nn[0].train2 != nn[0].train1);
}

TEST_CASE("knn2: fewer than two train rows is an error") {
    DescriptorSet q = testsup::random_float_set(3, DescriptorKind::surf, 9);
    DescriptorSet t1 = testsup::random_float_set(1, DescriptorKind::surf, 10);
    try {
        knn2(q, t1);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::insufficient_train_set);
    }
    DescriptorSet t0 = testsup::random_float_set(0, DescriptorKind::surf, 11);
    CHECK_THROWS_AS(knn2(q, t0), Error);
}

TEST_CASE("knn2: matches the full-sort oracle on 200x200 random sets") {
    DescriptorSet qf = testsup::random_float_set(200, DescriptorKind::sift, 12);
    DescriptorSet tf = testsup::random_float_set(200, DescriptorKind::sift, 13);
    std::vector<TwoNearest> got = knn2(qf, tf);
    std::vector<testsup::Knn2Row> want = testsup::knn2_naive(qf, tf);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].train1 == want[i].train1);
        CHECK(got[i].d1 == want[i].d1);
        CHECK(got[i].train2 == want[i].train2);
        CHECK(got[i].d2 == want[i].d2);
    }

    DescriptorSet qb = testsup::random_binary_set(200, DescriptorKind::freak, 14);
    DescriptorSet tb = testsup::random_binary_set(200, DescriptorKind::freak, 15);
    got = knn2(qb, tb);
    want = testsup::knn2_naive(qb, tb);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].train1 == want[i].train1);
        CHECK(got[i].d1 == want[i].d1);
        CHECK(got[i].train2 == want[i].train2);
        CHECK(got[i].d2 == want[i].d2);
    }
}

TEST_CASE("knn2: equidistant rows resolve by content, not by order") {
    DescriptorSet q = float_set({{0.f}});
    std::vector<float> r1{5.f, 0.f}, r2{0.f, 5.f}, r3{9.f, 9.f};
    DescriptorSet t_ab = float_set({r1, r2, r3});
    DescriptorSet t_ba = float_set({r2, r1, r3});
    std::vector<TwoNearest> ab = knn2(q, t_ab);
    std::vector<TwoNearest> ba = knn2(q, t_ba);
    REQUIRE(ab.size() == 1);
    REQUIRE(ba.size() == 1);
    CHECK(ab[0].d1 == 5.f);
    CHECK(ab[0].d2 == 5.f);
    // the same physical row wins in both orderings
    CHECK(std::equal(t_ab.frow(ab[0].train1), t_ab.frow(ab[0].train1) + 128,
                     t_ba.frow(ba[0].train1)));
    CHECK(std::equal(t_ab.frow(ab[0].train2), t_ab.frow(ab[0].train2) + 128,
                     t_ba.frow(ba[0].train2)));
}

TEST_CASE("knn2: shuffling the train set permutes indices consistently") {
    DescriptorSet q = testsup::random_float_set(40, DescriptorKind::surf, 16);
    DescriptorSet t = testsup::random_float_set(60, DescriptorKind::surf, 17);

    std::vector<size_t> perm(60);
    for (size_t i = 0; i < 60; ++i)
        perm[i] = i;
    std::mt19937_64 rng(18);
    std::shuffle(perm.begin(), perm.end(), rng);
    DescriptorSet ts = t;
    for (size_t i = 0; i < 60; ++i)
        std::copy(t.frow(perm[i]), t.frow(perm[i]) + 64, ts.fdata.begin() + i * 64);

    std::vector<TwoNearest> base = knn2(q, t);
    std::vector<TwoNearest> shuf = knn2(q, ts);
    for (size_t i = 0; i < base.size(); ++i) {
        CHECK(perm[shuf[i].train1] == base[i].train1);
        CHECK(perm[shuf[i].train2] == base[i].train2);
        CHECK(shuf[i].d1 == base[i].d1);
        CHECK(shuf[i].d2 == base[i].d2);
    }
}

// ------------------------------------------------------------ ratio test

TEST_CASE("ratio filter: the 10/16/15 against 20 arithmetic") {
    DescriptorSet q = float_set({{0.f}});
    auto run = [&](float d1, float d2) {
        DescriptorSet t = float_set({{d1, 0.f}, {0.f, d2}});
        return match_ratio(q, t, 0.75f);
    };
    std::vector<Match> kept = run(10.f, 20.f);
    REQUIRE(kept.size() == 1); // 10 < 0.75 * 20
    CHECK(kept[0].query == 0);
    CHECK(kept[0].train == 0);
    CHECK(kept[0].distance == 10.f);
    CHECK(run(16.f, 20.f).empty()); // 16 >= 15
    CHECK(run(15.f, 20.f).empty()); // boundary is excluded
}

TEST_CASE("ratio filter: parameter domain") {
    DescriptorSet q = testsup::random_float_set(3, DescriptorKind::sift, 19);
    DescriptorSet t = testsup::random_float_set(5, DescriptorKind::sift, 20);
    for (float bad : {0.f, -0.5f, 1.f, 1.5f}) {
        try {
            match_ratio(q, t, bad);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::invalid_parameter);
        }
    }
}

TEST_CASE("ratio filter: monotone in the ratio and subset of knn winners") {
    DescriptorSet q = testsup::random_float_set(80, DescriptorKind::sift, 21);
    DescriptorSet t = testsup::random_float_set(80, DescriptorKind::sift, 22);
    std::vector<TwoNearest> nn = knn2(q, t);
    std::vector<Match> loose = match_ratio(q, t, 0.9f);
    std::vector<Match> tight = match_ratio(q, t, 0.6f);
    CHECK(tight.size() <= loose.size());
    for (const Match& m : tight) {
        bool in_loose = false;
        for (const Match& l : loose)
            if (l.query == m.query && l.train == m.train)
                in_loose = true;
        CHECK(in_loose);
        CHECK(nn[m.query].train1 == m.train);
        CHECK(nn[m.query].d1 == m.distance);
    }
    // at most one match per query, ordered by query index
    for (size_t i = 1; i < loose.size(); ++i)
        CHECK(loose[i - 1].query < loose[i].query);
}

TEST_CASE("matches csv round trip") {
    namespace fs = std::filesystem;
    std::vector<Match> ms = {{0, 7, 1.25f}, {3, 2, 0.f}, {9, 9, 512.f}};
    auto path = (fs::temp_directory_path() / "matches.csv").string();
    save_matches_csv(path, ms);
    std::vector<Match> back = load_matches_csv(path);
    REQUIRE(back.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(back[i].query == ms[i].query);
        CHECK(back[i].train == ms[i].train);
        CHECK(back[i].distance == doctest::Approx(ms[i].distance));
    }
    fs::remove(path);
}
