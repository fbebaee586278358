#include "featkit/kernels/kernels.hpp"

#include <bit>
#include <cstdlib>
#include <cstring>

namespace featkit::kernels {

namespace {

float l2_sq_scalar(const float* a, const float* b, size_t n) {
    float acc = 0.f;
    for (size_t i = 0; i < n; ++i) {
        float d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

uint32_t hamming_scalar(const uint8_t* a, const uint8_t* b, size_t n) {
    uint32_t acc = 0;
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        uint64_t wa, wb;
        std::memcpy(&wa, a + i, 8);
        std::memcpy(&wb, b + i, 8);
        acc += static_cast<uint32_t>(std::popcount(wa ^ wb));
    }
    for (; i < n; ++i)
        acc += static_cast<uint32_t>(std::popcount(static_cast<unsigned>(a[i] ^ b[i])));
    return acc;
}

void conv_row_scalar(const float* src, size_t n, const float* taps, int radius,
                     float* dst) {
    const long last = static_cast<long>(n) - 1;
    for (long x = 0; x <= last; ++x) {
        float acc = 0.f;
        for (int t = -radius; t <= radius; ++t) {
            long xx = x + t;
            if (xx < 0) xx = 0;
            if (xx > last) xx = last;
            acc += taps[t + radius] * src[xx];
        }
        dst[x] = acc;
    }
}

void axpy_scalar(float a, const float* x, float* y, size_t n) {
    for (size_t i = 0; i < n; ++i)
        y[i] += a * x[i];
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops{l2_sq_scalar, hamming_scalar, conv_row_scalar,
                         axpy_scalar, "scalar"};
    return ops;
}

const Ops& ops() {
    static const Ops& chosen = []() -> const Ops& {
        const char* force = std::getenv("FEATKIT_FORCE_SCALAR");
        if (force && force[0] == '1')
            return scalar_ops();
        if (avx2_available())
            return avx2_ops();
        return scalar_ops();
    }();
    return chosen;
}

} // namespace featkit::kernels
