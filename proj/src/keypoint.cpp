#include "featkit/keypoint.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace featkit {

const char* detector_tag(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::dog: return "dog";
        case DetectorKind::fast_hessian: return "fast_hessian";
        case DetectorKind::mser: return "mser";
        case DetectorKind::brisk: return "brisk";
    }
    return "?";
}

DetectorKind detector_from_tag(const std::string& tag) {
    if (tag == "dog") return DetectorKind::dog;
    if (tag == "fast_hessian") return DetectorKind::fast_hessian;
    if (tag == "mser") return DetectorKind::mser;
    if (tag == "brisk") return DetectorKind::brisk;
    raise(ErrorCode::invalid_parameter, "unknown detector tag '" + tag + "'");
}

void sort_keypoints(std::vector<Keypoint>& kps) {
    std::stable_sort(kps.begin(), kps.end(), [](const Keypoint& a, const Keypoint& b) {
        if (a.response != b.response) return a.response > b.response;
        if (a.y != b.y) return a.y < b.y;
        if (a.x != b.x) return a.x < b.x;
        return a.scale < b.scale;
    });
}

void save_keypoints_csv(const std::string& path, const std::vector<Keypoint>& kps) {
    std::ofstream out(path);
    if (!out)
        raise(ErrorCode::io, path + ": cannot open for writing");
    out << "x,y,scale,orientation,response,octave,detector\n";
    char buf[160];
    for (const auto& kp : kps) {
        std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.6g,%d,%s\n",
                      kp.x, kp.y, kp.scale, kp.orientation, kp.response,
                      kp.octave, detector_tag(kp.detector));
        out << buf;
    }
    if (!out)
        raise(ErrorCode::io, path + ": write failed");
}

std::vector<Keypoint> load_keypoints_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        raise(ErrorCode::io, path + ": cannot open keypoint csv");
    std::string line;
    if (!std::getline(in, line) ||
        line != "x,y,scale,orientation,response,octave,detector")
        raise(ErrorCode::io, path + ": bad keypoint csv header");
    std::vector<Keypoint> kps;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() != 7)
            raise(ErrorCode::io, path + ": line " + std::to_string(lineno) +
                                     ": expected 7 fields");
        try {
            Keypoint kp;
            kp.x = std::stof(fields[0]);
            kp.y = std::stof(fields[1]);
            kp.scale = std::stof(fields[2]);
            kp.orientation = std::stof(fields[3]);
            kp.response = std::stof(fields[4]);
            kp.octave = std::stoi(fields[5]);
            kp.detector = detector_from_tag(fields[6]);
            kps.push_back(kp);
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            raise(ErrorCode::io, path + ": line " + std::to_string(lineno) +
                                     ": " + e.what());
        }
    }
    return kps;
}

} // namespace featkit
