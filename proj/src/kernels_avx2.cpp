#include "featkit/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <bit>
#include <cstring>

namespace featkit::kernels {

namespace {

__attribute__((target("avx2,fma")))
float l2_sq_avx2(const float* a, const float* b, size_t n) {
    __m256 acc0 = _mm256_setzero_ps();
    __m256 acc1 = _mm256_setzero_ps();
    size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        __m256 d0 = _mm256_sub_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i));
        __m256 d1 = _mm256_sub_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8));
        acc0 = _mm256_fmadd_ps(d0, d0, acc0);
        acc1 = _mm256_fmadd_ps(d1, d1, acc1);
    }
    for (; i + 8 <= n; i += 8) {
        __m256 d = _mm256_sub_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i));
        acc0 = _mm256_fmadd_ps(d, d, acc0);
    }
    acc0 = _mm256_add_ps(acc0, acc1);
    __m128 lo = _mm256_castps256_ps128(acc0);
    __m128 hi = _mm256_extractf128_ps(acc0, 1);
    lo = _mm_add_ps(lo, hi);
    lo = _mm_hadd_ps(lo, lo);
    lo = _mm_hadd_ps(lo, lo);
    float acc = _mm_cvtss_f32(lo);
    for (; i < n; ++i) {
        float d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

__attribute__((target("avx2")))
uint32_t hamming_avx2(const uint8_t* a, const uint8_t* b, size_t n) {
    // nibble-LUT popcount, 32 bytes per step
    const __m256i lut = _mm256_setr_epi8(
        0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
        0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    __m256i acc = _mm256_setzero_si256();
    size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i x = _mm256_xor_si256(va, vb);
        __m256i lo = _mm256_and_si256(x, low_mask);
        __m256i hi = _mm256_and_si256(_mm256_srli_epi16(x, 4), low_mask);
        __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo),
                                      _mm256_shuffle_epi8(lut, hi));
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(cnt, _mm256_setzero_si256()));
    }
    alignas(32) uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    uint32_t total = static_cast<uint32_t>(lanes[0] + lanes[1] + lanes[2] + lanes[3]);
    for (; i < n; ++i)
        total += static_cast<uint32_t>(std::popcount(static_cast<unsigned>(a[i] ^ b[i])));
    return total;
}

__attribute__((target("avx2,fma")))
void conv_row_avx2(const float* src, size_t n, const float* taps, int radius,
                   float* dst) {
    const long last = static_cast<long>(n) - 1;
    const int width = 2 * radius + 1;
    long x = 0;
    // clamped borders stay scalar
    auto scalar_at = [&](long px) {
        float acc = 0.f;
        for (int t = -radius; t <= radius; ++t) {
            long xx = px + t;
            if (xx < 0) xx = 0;
            if (xx > last) xx = last;
            acc += taps[t + radius] * src[xx];
        }
        dst[px] = acc;
    };
    long interior_end = static_cast<long>(n) - radius;
    for (; x < radius && x <= last; ++x)
        scalar_at(x);
    for (; x + 8 <= interior_end; x += 8) {
        __m256 acc = _mm256_setzero_ps();
        const float* base = src + x - radius;
        for (int t = 0; t < width; ++t)
            acc = _mm256_fmadd_ps(_mm256_set1_ps(taps[t]),
                                  _mm256_loadu_ps(base + t), acc);
        _mm256_storeu_ps(dst + x, acc);
    }
    for (; x < interior_end; ++x) {
        float acc = 0.f;
        const float* base = src + x - radius;
        for (int t = 0; t < width; ++t)
            acc += taps[t] * base[t];
        dst[x] = acc;
    }
    for (; x <= last; ++x)
        scalar_at(x);
}

__attribute__((target("avx2,fma")))
void axpy_avx2(float a, const float* x, float* y, size_t n) {
    __m256 va = _mm256_set1_ps(a);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 vy = _mm256_loadu_ps(y + i);
        vy = _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), vy);
        _mm256_storeu_ps(y + i, vy);
    }
    for (; i < n; ++i)
        y[i] += a * x[i];
}

} // namespace

bool avx2_available() {
    static const bool ok = __builtin_cpu_supports("avx2") &&
                           __builtin_cpu_supports("fma");
    return ok;
}

const Ops& avx2_ops() {
    static const Ops ops{l2_sq_avx2, hamming_avx2, conv_row_avx2, axpy_avx2,
                         "avx2"};
    return ops;
}

} // namespace featkit::kernels

#else // non-x86: dispatch falls back to scalar

namespace featkit::kernels {

bool avx2_available() { return false; }

const Ops& avx2_ops() { return scalar_ops(); }

} // namespace featkit::kernels

#endif
