#include "featkit/bench/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <thread>
#include <tuple>

#include "featkit/bench/aloi.hpp"
#include "featkit/bench/conditions.hpp"
#include "featkit/bench/synthetic.hpp"
#include "featkit/desc/describe.hpp"
#include "featkit/detect/brisk.hpp"
#include "featkit/detect/dog.hpp"
#include "featkit/detect/fast_hessian.hpp"
#include "featkit/detect/mser.hpp"
#include "featkit/eval/evaluation.hpp"
#include "featkit/image_io.hpp"
#include "featkit/match/matching.hpp"

namespace featkit {

namespace {

using Clock = std::chrono::steady_clock;
using ImagePtr = std::shared_ptr<const GrayImage>;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct TestCase {
    std::string parameter; // "<image>:<label>" or "<object>:<code>"
    ImagePtr image;        // preloaded, or ...
    std::string path;      // ... loaded on demand
    bool has_h = false;
    Homography h; // reference -> test, full resolution
};

// One reference image with all its test conditions; expanded per
// (resolution, detector) into work units so the reference side is detected
// and described once per unit instead of once per condition.
struct PairGroup {
    std::string family;
    ImagePtr ref;
    std::string ref_path;
    std::vector<TestCase> tests;
};

struct WorkUnit {
    const PairGroup* group;
    double resolution;
    std::string detector;
    size_t cell_base; // first of tests.size() * n_descriptors consecutive cells
};

GrayImage resize_to(const GrayImage& img, double r) {
    int w = std::max(1, static_cast<int>(std::lround(img.width() * r)));
    int h = std::max(1, static_cast<int>(std::lround(img.height() * r)));
    return warp_homography(img, Homography::scaling(r, r), w, h).image;
}

std::vector<Keypoint> run_detector(const GrayImage& img, const std::string& tag,
                                   const BenchmarkConfig& cfg) {
    std::vector<Keypoint> kps;
    if (tag == "dog")
        kps = detect_dog(img, cfg.dog);
    else if (tag == "fast_hessian")
        kps = detect_fast_hessian(img, cfg.fast_hessian);
    else if (tag == "mser")
        kps = detect_mser(img, cfg.mser);
    else
        kps = detect_brisk(img, cfg.brisk);
    sort_keypoints(kps);
    if (cfg.max_keypoints > 0 && kps.size() > static_cast<size_t>(cfg.max_keypoints))
        kps.resize(static_cast<size_t>(cfg.max_keypoints));
    return kps;
}

void fail_cells(std::vector<CellResult>& cells, size_t base, size_t count,
                const std::string& why) {
    for (size_t i = 0; i < count; ++i) {
        cells[base + i].failed = true;
        cells[base + i].note = why;
    }
}

void process_unit(const BenchmarkConfig& cfg, const WorkUnit& unit,
                  std::vector<CellResult>& cells) {
    const PairGroup& g = *unit.group;
    const size_t n_desc = cfg.descriptors.size();
    const size_t n_cells = g.tests.size() * n_desc;
    const double r = unit.resolution;

    CorrespondenceParams cp;
    cp.eps_pos = static_cast<float>(cfg.eps_pos);
    cp.tau = static_cast<float>(cfg.tau);

    // reference side, shared by every condition in the unit
    GrayImage ref;
    std::vector<Keypoint> ref_kps;
    double ref_ms = 0.0;
    try {
        Clock::time_point t0 = Clock::now();
        GrayImage full = g.ref ? *g.ref : load_image(g.ref_path);
        ref = r == 1.0 ? std::move(full) : resize_to(full, r);
        ref_kps = run_detector(ref, unit.detector, cfg);
        ref_ms = ms_since(t0);
    } catch (const Error& e) {
        fail_cells(cells, unit.cell_base, n_cells, e.what());
        return;
    }

    std::vector<DescriptorSet> ref_desc(n_desc);
    std::vector<std::string> ref_desc_err(n_desc);
    std::vector<double> ref_desc_ms(n_desc, 0.0);
    for (size_t di = 0; di < n_desc; ++di) {
        try {
            Clock::time_point t0 = Clock::now();
            ref_desc[di] = describe(ref, ref_kps, descriptor_from_tag(cfg.descriptors[di]));
            ref_desc_ms[di] = ms_since(t0);
        } catch (const Error& e) {
            ref_desc_err[di] = e.what();
        }
    }

    const double ref_share = ref_ms / static_cast<double>(n_cells);
    for (size_t ti = 0; ti < g.tests.size(); ++ti) {
        const TestCase& tc = g.tests[ti];
        const size_t row_base = unit.cell_base + ti * n_desc;

        GrayImage test;
        std::vector<Keypoint> test_kps;
        Homography h_res;
        double test_ms = 0.0;
        try {
            Clock::time_point t0 = Clock::now();
            GrayImage full = tc.image ? *tc.image : load_image(tc.path);
            test = r == 1.0 ? std::move(full) : resize_to(full, r);
            test_kps = run_detector(test, unit.detector, cfg);
            if (tc.has_h) {
                Homography s = Homography::scaling(r, r);
                Homography s_inv = Homography::scaling(1.0 / r, 1.0 / r);
                h_res = s.composed_with(tc.h).composed_with(s_inv).normalized();
            }
            test_ms = ms_since(t0);
        } catch (const Error& e) {
            fail_cells(cells, row_base, n_desc, e.what());
            continue;
        }

        uint32_t n_corr = 0;
        double rep = 0.0;
        if (tc.has_h) {
            CorrespondenceResult corr = find_correspondences(
                ref_kps, test_kps, h_res, {ref.width(), ref.height()},
                {test.width(), test.height()}, cp);
            n_corr = static_cast<uint32_t>(corr.pairs.size());
            uint32_t denom = std::min(corr.visible_a, corr.visible_b);
            rep = denom ? static_cast<double>(n_corr) / denom : 0.0;
        }

        for (size_t di = 0; di < n_desc; ++di) {
            CellResult& cell = cells[row_base + di];
            if (!ref_desc_err[di].empty()) {
                cell.failed = true;
                cell.note = ref_desc_err[di];
                continue;
            }
            Clock::time_point t0 = Clock::now();
            try {
                DescriptorSet test_desc =
                    describe(test, test_kps, descriptor_from_tag(cfg.descriptors[di]));

                cell.n_kp_ref = static_cast<uint32_t>(ref_kps.size());
                cell.n_kp_test = static_cast<uint32_t>(test_kps.size());
                cell.n_correspondences = n_corr;
                cell.has_repeatability = tc.has_h;
                cell.repeatability = rep;

                // the ratio test needs two train neighbours; fewer
                // descriptors legitimately yield zero matches
                if (ref_desc[di].size() >= 1 && test_desc.size() >= 2) {
                    std::vector<Match> matches = match_ratio(ref_desc[di], test_desc,
                                                             static_cast<float>(cfg.ratio));
                    cell.n_matches = static_cast<uint32_t>(matches.size());
                    if (tc.has_h) {
                        MatchScore s = score_matches(matches, ref_desc[di].keypoints,
                                                     test_desc.keypoints, h_res, cp);
                        cell.n_correct = s.n_correct;
                    }
                }
            } catch (const Error& e) {
                cell.failed = true;
                cell.note = e.what();
            }
            cell.wall_ms = ms_since(t0) + ref_share + test_ms / n_desc +
                           ref_desc_ms[di] / g.tests.size();
        }
    }
}

} // namespace

size_t BenchmarkReport::failed_cells() const {
    return static_cast<size_t>(
        std::count_if(cells.begin(), cells.end(), [](const CellResult& c) { return c.failed; }));
}

bool BenchmarkReport::run_failed() const {
    return !cells.empty() && failed_cells() * 2 > cells.size();
}

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg) {
    cfg.validate();
    Clock::time_point t_run = Clock::now();

    // assemble the reference/test groups, synthetic families first
    std::vector<std::pair<std::string, ImagePtr>> bases;
    if (cfg.images.empty()) {
        for (auto& [name, img] : default_bench_images(cfg.bench_size))
            bases.emplace_back(name, std::make_shared<GrayImage>(std::move(img)));
    } else {
        for (const auto& [name, path] : cfg.images)
            bases.emplace_back(name, std::make_shared<GrayImage>(load_image(path)));
    }

    std::vector<std::unique_ptr<PairGroup>> groups;
    for (const auto& [name, base] : bases) {
        for (const std::string& family : cfg.families) {
            const std::vector<double>* values = nullptr;
            if (family == "exposure")
                values = &cfg.exposure_evs;
            else if (family == "viewpoint")
                values = &cfg.viewpoint_degs;
            else if (family == "rotation")
                values = &cfg.rotation_degs;
            else
                values = &cfg.scale_factors;
            auto group = std::make_unique<PairGroup>();
            group->family = family;
            group->ref = base;
            for (Condition& c : make_conditions(*base, family, *values)) {
                TestCase tc;
                tc.parameter = name + ":" + c.label;
                tc.image = std::make_shared<GrayImage>(std::move(c.image));
                tc.has_h = true;
                tc.h = c.h;
                group->tests.push_back(std::move(tc));
            }
            groups.push_back(std::move(group));
        }
    }

    if (!cfg.aloi_root.empty()) {
        for (const std::string& family : cfg.aloi_families) {
            // group the pairs of a family by their reference image
            std::map<std::string, PairGroup*> by_ref;
            for (const AloiPair& p : load_aloi_subset(cfg.aloi_root, family, cfg.aloi_objects)) {
                PairGroup*& slot = by_ref[p.ref_path];
                if (!slot) {
                    auto group = std::make_unique<PairGroup>();
                    group->family = family;
                    group->ref_path = p.ref_path;
                    slot = group.get();
                    groups.push_back(std::move(group));
                }
                TestCase tc;
                tc.parameter = p.object_id + ":" + p.condition;
                tc.path = p.test_path;
                tc.has_h = p.identity_h;
                tc.h = Homography::identity();
                slot->tests.push_back(std::move(tc));
            }
        }
    }

    // lay out cells and work units
    BenchmarkReport report;
    report.config_digest = cfg.digest();
    std::vector<WorkUnit> units;
    for (const auto& group : groups)
        for (double r : cfg.resolutions)
            for (const std::string& det : cfg.detectors) {
                units.push_back({group.get(), r, det, report.cells.size()});
                for (const TestCase& tc : group->tests)
                    for (const std::string& desc : cfg.descriptors) {
                        CellResult cell;
                        cell.family = group->family;
                        cell.parameter = tc.parameter;
                        cell.detector = det;
                        cell.descriptor = desc;
                        cell.resolution = r;
                        report.cells.push_back(std::move(cell));
                    }
            }

    const int threads = std::min<int>(cfg.effective_threads(), std::max<size_t>(units.size(), 1));
    report.threads_used = threads;
    if (threads <= 1) {
        for (const WorkUnit& u : units)
            process_unit(cfg, u, report.cells);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= units.size())
                    return;
                process_unit(cfg, units[i], report.cells);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    std::sort(report.cells.begin(), report.cells.end(),
              [](const CellResult& a, const CellResult& b) {
                  return std::tie(a.family, a.parameter, a.detector, a.descriptor, a.resolution) <
                         std::tie(b.family, b.parameter, b.detector, b.descriptor, b.resolution);
              });
    report.total_wall_ms = ms_since(t_run);
    return report;
}

} // namespace featkit
