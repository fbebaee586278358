#include "featkit/bench/aloi.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "featkit/error.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace featkit {

namespace {

// Resolve root/<obj>/<obj>_<code> against the supported image extensions;
// empty string when no candidate exists.
std::string find_image(const fs::path& root, const std::string& obj, const std::string& code) {
    for (const char* ext : {".png", ".pgm"}) {
        fs::path p = root / obj / (obj + "_" + code + ext);
        std::error_code ec;
        if (fs::is_regular_file(p, ec))
            return p.string();
    }
    return {};
}

void skip_note(const std::string& obj, const std::string& code) {
    std::cerr << "aloi: skipping " << obj << "_" << code << " (file not found)\n";
}

bool append_pair(std::vector<AloiPair>& out, const fs::path& root, const std::string& family,
                 const std::string& obj, const std::string& ref_code,
                 const std::string& test_code, bool identity_h) {
    std::string ref = find_image(root, obj, ref_code);
    std::string test = find_image(root, obj, test_code);
    if (ref.empty()) {
        skip_note(obj, ref_code);
        return false;
    }
    if (test.empty()) {
        skip_note(obj, test_code);
        return false;
    }
    out.push_back({family, obj, test_code, ref, test, identity_h});
    return true;
}

std::vector<std::string> list_objects(const fs::path& root) {
    std::vector<std::string> objs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory())
            objs.push_back(entry.path().filename().string());
    std::sort(objs.begin(), objs.end());
    return objs;
}

// Angles of every <obj>_r<number> file present, ascending, zero excluded.
std::vector<int> list_view_angles(const fs::path& root, const std::string& obj) {
    std::vector<int> angles;
    std::error_code ec;
    fs::path dir = root / obj;
    if (!fs::is_directory(dir, ec))
        return angles;
    const std::string prefix = obj + "_r";
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string stem = entry.path().stem().string();
        if (stem.size() <= prefix.size() || stem.compare(0, prefix.size(), prefix) != 0)
            continue;
        std::string rest = stem.substr(prefix.size());
        if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos)
            continue;
        int angle = std::stoi(rest);
        if (angle != 0)
            angles.push_back(angle);
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
    return angles;
}

std::vector<AloiPair> load_from_manifest(const fs::path& root, const fs::path& manifest,
                                         const std::string& family,
                                         const std::vector<std::string>& object_ids) {
    std::ifstream in(manifest);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        raise(ErrorCode::io, manifest.string() + ": " + e.what());
    }
    if (!doc.is_array())
        raise(ErrorCode::io, manifest.string() + ": manifest must be a JSON array");

    struct Entry {
        std::string path, code;
    };
    // (object, role) -> entries, insertion order preserved per object
    std::map<std::string, Entry> refs;
    std::map<std::string, std::vector<Entry>> tests;
    for (const auto& item : doc) {
        if (item.value("family", "") != family)
            continue;
        std::string obj = item.value("object_id", "");
        if (!object_ids.empty() &&
            std::find(object_ids.begin(), object_ids.end(), obj) == object_ids.end())
            continue;
        fs::path p = item.value("path", "");
        if (p.is_relative())
            p = root / p;
        std::error_code ec;
        if (!fs::is_regular_file(p, ec)) {
            std::cerr << "aloi: skipping manifest entry " << p.string() << " (file not found)\n";
            continue;
        }
        Entry e{p.string(), item.value("condition_code", "")};
        std::string role = item.value("role", "");
        if (role == "reference")
            refs[obj] = e;
        else if (role == "test")
            tests[obj].push_back(e);
    }

    bool identity = family == "aloi_illum_dir" || family == "aloi_illum_color";
    std::vector<AloiPair> out;
    for (const auto& [obj, ref] : refs)
        for (const auto& t : tests[obj])
            out.push_back({family, obj, t.code, ref.path, t.path, identity});
    return out;
}

} // namespace

std::vector<AloiPair> load_aloi_subset(const std::string& root_str, const std::string& family,
                                       const std::vector<std::string>& object_ids) {
    static const char* kFamilies[] = {"aloi_illum_dir", "aloi_illum_color", "aloi_view",
                                      "aloi_stereo"};
    if (std::find_if(std::begin(kFamilies), std::end(kFamilies),
                     [&](const char* f) { return family == f; }) == std::end(kFamilies))
        raise(ErrorCode::invalid_parameter, "unknown aloi family '" + family + "'");

    fs::path root(root_str);
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        raise(ErrorCode::dataset_not_found, "aloi root '" + root_str + "' is not a directory");

    std::vector<AloiPair> out;
    fs::path manifest = root / "manifest.json";
    if (fs::is_regular_file(manifest, ec)) {
        out = load_from_manifest(root, manifest, family, object_ids);
    } else {
        std::vector<std::string> objs = object_ids.empty() ? list_objects(root) : object_ids;
        for (const std::string& obj : objs) {
            if (family == "aloi_illum_dir") {
                for (int cam = 1; cam <= 3; ++cam) {
                    std::string ref = "l8c" + std::to_string(cam);
                    for (int lamp = 1; lamp <= 8; ++lamp)
                        append_pair(out, root, family, obj,
                                    ref, "l" + std::to_string(lamp) + "c" + std::to_string(cam),
                                    true);
                }
            } else if (family == "aloi_illum_color") {
                static const int kTemps[] = {110, 120, 130, 140, 150, 160,
                                             170, 180, 190, 210, 230, 250};
                for (int t : kTemps)
                    append_pair(out, root, family, obj, "i250", "i" + std::to_string(t), true);
            } else if (family == "aloi_view") {
                for (int angle : list_view_angles(root, obj))
                    append_pair(out, root, family, obj, "r0", "r" + std::to_string(angle), false);
            } else { // aloi_stereo
                append_pair(out, root, family, obj, "c", "l", false);
                append_pair(out, root, family, obj, "c", "r", false);
                append_pair(out, root, family, obj, "l", "r", false);
            }
        }
    }

    if (out.empty())
        raise(ErrorCode::dataset_not_found,
              "aloi root '" + root_str + "' yields no usable " + family + " pairs");
    return out;
}

} // namespace featkit
