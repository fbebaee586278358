#pragma once

#include <string>
#include <vector>

#include "featkit/bench/benchmark.hpp"

namespace featkit {

// Exact results.csv rendering (header fixed by contract, one row per cell,
// deterministic formatting; runtime_ms stays empty so reruns are
// byte-identical — timings live in run_meta.json).
std::string results_csv(const BenchmarkReport& report);

// Writes results.csv, run_meta.json, and the per-family SVG charts into
// out_dir (created if missing); returns the file names written.
// Per family: <family>_repeatability.svg when any cell carries
// repeatability and <family>_matches.svg when any cell does not; failed
// cells appear in neither. Charts are self-contained (inline styling only).
std::vector<std::string> write_report(const BenchmarkReport& report, const std::string& out_dir);

} // namespace featkit
