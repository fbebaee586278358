// featbench: command-line front end for the feature toolkit.
//
// Subcommands: detect, describe, match, eval, synth, bench.
// Exit codes: 0 success, 1 run-level failure, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "featkit/bench/benchmark.hpp"
#include "featkit/bench/conditions.hpp"
#include "featkit/bench/config.hpp"
#include "featkit/bench/report.hpp"
#include "featkit/desc/describe.hpp"
#include "featkit/detect/brisk.hpp"
#include "featkit/detect/dog.hpp"
#include "featkit/detect/fast_hessian.hpp"
#include "featkit/detect/mser.hpp"
#include "featkit/eval/evaluation.hpp"
#include "featkit/image_io.hpp"
#include "featkit/match/matching.hpp"

namespace fs = std::filesystem;
using namespace featkit;

namespace {

std::vector<Keypoint> detect_with(const GrayImage& img, const std::string& tag,
                                  const BenchmarkConfig& params) {
    std::vector<Keypoint> kps;
    if (tag == "dog")
        kps = detect_dog(img, params.dog);
    else if (tag == "fast_hessian")
        kps = detect_fast_hessian(img, params.fast_hessian);
    else if (tag == "mser")
        kps = detect_mser(img, params.mser);
    else if (tag == "brisk")
        kps = detect_brisk(img, params.brisk);
    else
        raise(ErrorCode::invalid_parameter, "unknown detector '" + tag + "'");
    sort_keypoints(kps);
    return kps;
}

// detector knobs may come from a benchmark-style config file
BenchmarkConfig load_params(const std::string& path) {
    if (path.empty())
        return BenchmarkConfig();
    return load_benchmark_config(path);
}

struct Args {
    std::string image, image_b, detector, descriptor, out, params;
    std::string desc_a, desc_b, homography, family, config;
    double ratio = 0.75;
};

int run_detect(const Args& a) {
    GrayImage img = load_image(a.image);
    std::vector<Keypoint> kps = detect_with(img, a.detector, load_params(a.params));
    std::cout << "n_keypoints=" << kps.size() << "\n";
    if (!a.out.empty())
        save_keypoints_csv(a.out, kps);
    return 0;
}

int run_describe(const Args& a) {
    GrayImage img = load_image(a.image);
    std::vector<Keypoint> kps = detect_with(img, a.detector, load_params(a.params));
    DescriptorSet set = describe(img, kps, descriptor_from_tag(a.descriptor));
    std::cout << "n_keypoints=" << kps.size() << "\n"
              << "n_descriptors=" << set.size() << "\n"
              << "dim=" << descriptor_dim(set.kind) << "\n";
    if (!a.out.empty())
        save_fdsc(a.out, set);
    return 0;
}

int run_match(const Args& a) {
    DescriptorSet qa = load_fdsc(a.desc_a);
    DescriptorSet tb = load_fdsc(a.desc_b);
    std::vector<Match> matches = match_ratio(qa, tb, static_cast<float>(a.ratio));
    std::cout << "n_query=" << qa.size() << "\n"
              << "n_train=" << tb.size() << "\n"
              << "n_matches=" << matches.size() << "\n";
    if (!a.out.empty())
        save_matches_csv(a.out, matches);
    return 0;
}

int run_eval(const Args& a) {
    GrayImage img_a = load_image(a.image);
    GrayImage img_b = load_image(a.image_b);
    Homography h = load_homography(a.homography);
    BenchmarkConfig params = load_params(a.params);
    std::vector<Keypoint> kps_a = detect_with(img_a, a.detector, params);
    std::vector<Keypoint> kps_b = detect_with(img_b, a.detector, params);

    CorrespondenceResult corr =
        find_correspondences(kps_a, kps_b, h, {img_a.width(), img_a.height()},
                             {img_b.width(), img_b.height()});
    uint32_t denom = std::min(corr.visible_a, corr.visible_b);
    double rep = denom ? static_cast<double>(corr.pairs.size()) / denom : 0.0;
    std::cout << "n_kp_a=" << kps_a.size() << "\n"
              << "n_kp_b=" << kps_b.size() << "\n"
              << "visible_a=" << corr.visible_a << "\n"
              << "visible_b=" << corr.visible_b << "\n"
              << "n_correspondences=" << corr.pairs.size() << "\n";
    std::printf("repeatability=%.6g\n", rep);

    if (!a.descriptor.empty()) {
        DescriptorKind kind = descriptor_from_tag(a.descriptor);
        DescriptorSet da = describe(img_a, kps_a, kind);
        DescriptorSet db = describe(img_b, kps_b, kind);
        uint32_t n_matches = 0, n_correct = 0;
        if (da.size() >= 1 && db.size() >= 2) {
            std::vector<Match> matches = match_ratio(da, db, static_cast<float>(a.ratio));
            MatchScore s = score_matches(matches, da.keypoints, db.keypoints, h);
            n_matches = s.n_matches;
            n_correct = s.n_correct;
        }
        std::cout << "n_matches=" << n_matches << "\n"
                  << "n_correct=" << n_correct << "\n";
    }
    return 0;
}

int run_synth(const Args& a) {
    GrayImage img = load_image(a.image);
    BenchmarkConfig defaults;
    const std::vector<double>* values = nullptr;
    if (a.family == "exposure")
        values = &defaults.exposure_evs;
    else if (a.family == "viewpoint")
        values = &defaults.viewpoint_degs;
    else if (a.family == "rotation")
        values = &defaults.rotation_degs;
    else if (a.family == "scale")
        values = &defaults.scale_factors;
    else
        raise(ErrorCode::invalid_parameter, "unknown condition family '" + a.family + "'");

    fs::create_directories(a.out);
    for (const Condition& c : make_conditions(img, a.family, *values)) {
        fs::path img_path = fs::path(a.out) / (c.label + ".pgm");
        fs::path h_path = fs::path(a.out) / (c.label + ".h.txt");
        save_pgm(img_path.string(), c.image);
        save_homography(h_path.string(), c.h);
        std::cout << c.label << " -> " << img_path.string() << "\n";
    }
    return 0;
}

int run_bench(const Args& a) {
    BenchmarkConfig cfg = a.config.empty() ? BenchmarkConfig() : load_benchmark_config(a.config);
    BenchmarkReport report = run_benchmark(cfg);
    std::vector<std::string> files = write_report(report, a.out);
    std::cout << "cells=" << report.cells.size() << "\n"
              << "failed_cells=" << report.failed_cells() << "\n";
    std::printf("total_wall_ms=%.1f\n", report.total_wall_ms);
    for (const std::string& f : files)
        std::cout << "wrote " << (fs::path(a.out) / f).string() << "\n";
    if (report.run_failed()) {
        std::cerr << "error: more than half of the grid cells failed\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"feature detector/descriptor benchmark toolkit"};
    app.require_subcommand(1);
    Args a;

    CLI::App* detect = app.add_subcommand("detect", "detect keypoints in an image");
    detect->add_option("image", a.image, "input image (pgm/png)")->required();
    detect->add_option("--detector", a.detector, "dog|fast_hessian|mser|brisk")->required();
    detect->add_option("--params", a.params, "benchmark-style config supplying detector knobs");
    detect->add_option("--out", a.out, "write keypoints CSV here");

    CLI::App* describe_cmd = app.add_subcommand("describe", "detect and describe an image");
    describe_cmd->add_option("image", a.image, "input image")->required();
    describe_cmd->add_option("--detector", a.detector, "dog|fast_hessian|mser|brisk")->required();
    describe_cmd->add_option("--descriptor", a.descriptor, "sift|surf|brisk|freak")->required();
    describe_cmd->add_option("--params", a.params, "benchmark-style config");
    describe_cmd->add_option("--out", a.out, "write descriptor set (.fdsc) here");

    CLI::App* match = app.add_subcommand("match", "ratio-test match two descriptor files");
    match->add_option("descA", a.desc_a, "query descriptor file")->required();
    match->add_option("descB", a.desc_b, "train descriptor file")->required();
    match->add_option("--ratio", a.ratio, "nearest/second-nearest acceptance ratio");
    match->add_option("--out", a.out, "write matches CSV here");

    CLI::App* eval = app.add_subcommand("eval", "repeatability between two related images");
    eval->add_option("imgA", a.image, "reference image")->required();
    eval->add_option("imgB", a.image_b, "test image")->required();
    eval->add_option("--homography", a.homography, "3x3 ground truth, A to B")->required();
    eval->add_option("--detector", a.detector, "dog|fast_hessian|mser|brisk")->required();
    eval->add_option("--descriptor", a.descriptor, "also match and score descriptors");
    eval->add_option("--params", a.params, "benchmark-style config");
    eval->add_option("--ratio", a.ratio, "matching ratio");

    CLI::App* synth = app.add_subcommand("synth", "emit a synthetic condition series");
    synth->add_option("image", a.image, "input image")->required();
    synth->add_option("--family", a.family, "exposure|viewpoint|rotation|scale")->required();
    synth->add_option("--out", a.out, "output directory")->required();

    CLI::App* bench = app.add_subcommand("bench", "run the full benchmark grid");
    bench->add_option("--config", a.config, "TOML or JSON benchmark config");
    bench->add_option("--out", a.out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (detect->parsed())
            return run_detect(a);
        if (describe_cmd->parsed())
            return run_describe(a);
        if (match->parsed())
            return run_match(a);
        if (eval->parsed())
            return run_eval(a);
        if (synth->parsed())
            return run_synth(a);
        return run_bench(a);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
