#pragma once

#include <cstddef>
#include <cstdint>

// Hot inner loops (descriptor distances, separable convolution) exist in a
// scalar reference version plus an AVX2 variant; the active set is picked
// once at startup from CPUID. The scalar set stays reachable so tests can
// check the variants agree.

namespace featkit::kernels {

struct Ops {
    // sum of squared differences over n floats
    float (*l2_sq)(const float* a, const float* b, size_t n);
    // popcount of bytewise XOR over n bytes
    uint32_t (*hamming)(const uint8_t* a, const uint8_t* b, size_t n);
    // 1-D correlation with a (2*radius+1)-tap kernel, clamp-to-edge borders
    void (*conv_row)(const float* src, size_t n, const float* taps, int radius,
                     float* dst);
    // y := y + a*x
    void (*axpy)(float a, const float* x, float* y, size_t n);
    const char* name;
};

const Ops& scalar_ops();
const Ops& avx2_ops(); // valid only if avx2_available()
bool avx2_available();

// Active implementation set; honours FEATKIT_FORCE_SCALAR=1 in the
// environment for debugging.
const Ops& ops();

} // namespace featkit::kernels
