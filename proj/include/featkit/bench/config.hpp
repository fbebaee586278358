#pragma once

#include <string>
#include <vector>

#include "featkit/detect/brisk.hpp"
#include "featkit/detect/dog.hpp"
#include "featkit/detect/fast_hessian.hpp"
#include "featkit/detect/mser.hpp"

namespace featkit {

// Everything a benchmark run depends on. Defaults reproduce the standard
// desk run: the built-in synthetic image trio, exposure/viewpoint/rotation/
// scale condition families, the full 4x4 detector/descriptor grid, three
// resolutions, knn2 matching with ratio 0.75.
struct BenchmarkConfig {
    // source images: (name, path); empty -> built-in trio at bench_size
    std::vector<std::pair<std::string, std::string>> images;
    int bench_size = 256;

    std::vector<std::string> families = {"exposure", "viewpoint", "rotation", "scale"};
    std::vector<double> exposure_evs = {-7, -4, 4, 7};
    std::vector<double> viewpoint_degs = {-60, -40, -20, 20, 40, 60};
    std::vector<double> rotation_degs = {15, 30, 45, 90};
    std::vector<double> scale_factors = {0.5, 0.71, 1.41, 2.0};
    std::vector<double> resolutions = {1.0, 0.5, 0.25};

    std::vector<std::string> detectors = {"dog", "fast_hessian", "mser", "brisk"};
    std::vector<std::string> descriptors = {"sift", "surf", "brisk", "freak"};

    double ratio = 0.75;
    double eps_pos = 2.5;
    double tau = 2.0;
    int threads = 0;         // 0 -> FEATBENCH_THREADS env, else 1
    int max_keypoints = 500; // strongest kept per image; 0 -> unlimited

    // detector knobs; thresholds loosened from the library defaults so the
    // darkest exposure variants still fire
    DogParams dog;
    FastHessianParams fast_hessian;
    MserParams mser;
    BriskDetectorParams brisk;

    // ALOI ingestion; skipped while root is empty
    std::string aloi_root;
    std::vector<std::string> aloi_families = {"aloi_illum_dir", "aloi_illum_color",
                                              "aloi_view", "aloi_stereo"};
    std::vector<std::string> aloi_objects;

    BenchmarkConfig();

    // fails with invalid_parameter on out-of-range values or unknown tags
    void validate() const;

    // canonical key=value rendering; also the basis of the config digest
    std::string canonical_text() const;
    uint64_t digest() const;

    // effective worker count after the env override and the 0 default
    int effective_threads() const;
};

// Parses .json (strict JSON) or .toml (flat key = value lines, [section]
// tables one level deep, arrays, strings, numbers, booleans, # comments).
// Unknown keys are rejected. The parsed file overrides defaults field-wise.
BenchmarkConfig load_benchmark_config(const std::string& path);

} // namespace featkit
