#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "featkit/bench/config.hpp"

namespace featkit {

// One (family, parameter, detector, descriptor, resolution) grid cell.
// `parameter` is "<image>:<label>" for synthetic families and
// "<object>:<code>" for ALOI pairs. Repeatability is absent for pairs
// without ground-truth geometry and for failed cells.
struct CellResult {
    std::string family;
    std::string parameter;
    std::string detector;
    std::string descriptor;
    double resolution = 1.0;
    uint32_t n_kp_ref = 0;
    uint32_t n_kp_test = 0;
    uint32_t n_correspondences = 0;
    bool has_repeatability = false;
    double repeatability = 0.0;
    uint32_t n_matches = 0;
    uint32_t n_correct = 0;
    bool failed = false;
    std::string note; // failure reason, empty otherwise
    double wall_ms = 0.0;
};

struct BenchmarkReport {
    std::vector<CellResult> cells; // sorted by the cell key
    uint64_t config_digest = 0;
    int threads_used = 1;
    double total_wall_ms = 0.0;
    size_t failed_cells() const;
    // more than half the grid failing makes the whole run a failure
    bool run_failed() const;
};

// Runs the full grid. Synthetic conditions are generated up front; cells
// execute on a pool of cfg.effective_threads() workers; output ordering is
// fixed by the cell key, so results are independent of scheduling. A cell
// whose pipeline throws is recorded as failed and the run continues.
BenchmarkReport run_benchmark(const BenchmarkConfig& cfg);

} // namespace featkit
