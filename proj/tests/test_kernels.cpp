#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "support.hpp"

#include "featkit/kernels/kernels.hpp"

using namespace featkit;

namespace {

// run a check against every available implementation set
template <typename F> void for_each_ops(F f) {
    f(kernels::scalar_ops());
    if (kernels::avx2_available())
        f(kernels::avx2_ops());
}

} // namespace

TEST_CASE("l2_sq agrees with a double-precision reference") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<float> dist(-2.f, 2.f);
    for (size_t n : {1, 3, 8, 17, 64, 100, 128}) {
        std::vector<float> a(n), b(n);
        for (size_t i = 0; i < n; ++i) {
            a[i] = dist(rng);
            b[i] = dist(rng);
        }
        double expect = 0.0;
        for (size_t i = 0; i < n; ++i)
            expect += (static_cast<double>(a[i]) - b[i]) * (static_cast<double>(a[i]) - b[i]);
        for_each_ops([&](const kernels::Ops& ops) {
            INFO("ops = ", ops.name, " n = ", n);
            CHECK(ops.l2_sq(a.data(), b.data(), n) ==
                  doctest::Approx(expect).epsilon(1e-4));
        });
    }
}

TEST_CASE("hamming agrees with bit counting") {
    std::mt19937_64 rng(2);
    for (size_t n : {1, 7, 8, 16, 33, 64, 87}) {
        std::vector<uint8_t> a(n), b(n);
        for (size_t i = 0; i < n; ++i) {
            a[i] = static_cast<uint8_t>(rng());
            b[i] = static_cast<uint8_t>(rng());
        }
        uint32_t expect = 0;
        for (size_t i = 0; i < n; ++i) {
            uint8_t x = a[i] ^ b[i];
            while (x) {
                expect += x & 1;
                x >>= 1;
            }
        }
        for_each_ops([&](const kernels::Ops& ops) {
            INFO("ops = ", ops.name, " n = ", n);
            CHECK(ops.hamming(a.data(), b.data(), n) == expect);
        });
    }
}

TEST_CASE("hamming of identical rows is zero, of complements is 8n") {
    std::vector<uint8_t> a(64, 0xA5), b(64, 0x5A);
    for_each_ops([&](const kernels::Ops& ops) {
        CHECK(ops.hamming(a.data(), a.data(), a.size()) == 0);
        CHECK(ops.hamming(a.data(), b.data(), a.size()) == 8 * 64);
    });
}

TEST_CASE("conv_row matches a naive clamped correlation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<float> dist(-1.f, 1.f);
    for (size_t n : {4, 9, 31, 64, 129}) {
        for (int radius : {1, 2, 5}) {
            std::vector<float> src(n), taps(2 * radius + 1);
            for (auto& v : src)
                v = dist(rng);
            for (auto& v : taps)
                v = dist(rng);
            std::vector<float> expect(n, 0.f);
            for (size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    long j = static_cast<long>(i) + k;
                    if (j < 0)
                        j = 0;
                    if (j >= static_cast<long>(n))
                        j = static_cast<long>(n) - 1;
                    acc += static_cast<double>(taps[k + radius]) * src[j];
                }
                expect[i] = static_cast<float>(acc);
            }
            for_each_ops([&](const kernels::Ops& ops) {
                std::vector<float> dst(n, -99.f);
                ops.conv_row(src.data(), n, taps.data(), radius, dst.data());
                for (size_t i = 0; i < n; ++i) {
                    INFO("ops = ", ops.name, " n = ", n, " radius = ", radius, " i = ", i);
                    CHECK(dst[i] == doctest::Approx(expect[i]).epsilon(1e-4));
                }
            });
        }
    }
}

TEST_CASE("axpy accumulates") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<float> dist(-1.f, 1.f);
    for (size_t n : {1, 5, 16, 40, 128}) {
        std::vector<float> x(n), y0(n);
        for (size_t i = 0; i < n; ++i) {
            x[i] = dist(rng);
            y0[i] = dist(rng);
        }
        const float a = 0.37f;
        for_each_ops([&](const kernels::Ops& ops) {
            std::vector<float> y = y0;
            ops.axpy(a, x.data(), y.data(), n);
            for (size_t i = 0; i < n; ++i) {
                INFO("ops = ", ops.name, " n = ", n, " i = ", i);
                CHECK(y[i] == doctest::Approx(y0[i] + a * x[i]).epsilon(1e-5));
            }
        });
    }
}

TEST_CASE("scalar and vector variants agree on large random batches") {
    if (!kernels::avx2_available())
        return; // nothing to compare on this host
    const auto& s = kernels::scalar_ops();
    const auto& v = kernels::avx2_ops();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<float> dist(-3.f, 3.f);
    for (int trial = 0; trial < 20; ++trial) {
        size_t n = 64 + rng() % 200;
        std::vector<float> a(n), b(n);
        std::vector<uint8_t> ba(n), bb(n);
        for (size_t i = 0; i < n; ++i) {
            a[i] = dist(rng);
            b[i] = dist(rng);
            ba[i] = static_cast<uint8_t>(rng());
            bb[i] = static_cast<uint8_t>(rng());
        }
        CHECK(s.l2_sq(a.data(), b.data(), n) ==
              doctest::Approx(v.l2_sq(a.data(), b.data(), n)).epsilon(1e-4));
        CHECK(s.hamming(ba.data(), bb.data(), n) == v.hamming(ba.data(), bb.data(), n));
    }
}

TEST_CASE("active ops set is one of the variants") {
    const auto& active = kernels::ops();
    CHECK((active.name == std::string("scalar") || active.name == std::string("avx2")));
}
