#include "featkit/bench/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "featkit/error.hpp"
#include "json.hpp"

using nlohmann::json;

namespace featkit {

BenchmarkConfig::BenchmarkConfig() {
    // loosen thresholds so a -7ev variant (gain ~0.30, squaring to ~0.09 for
    // determinant-of-Hessian responses) still produces keypoints
    dog.contrast_threshold = 0.004f;
    fast_hessian.threshold = 1e-5f;
    mser.delta = 4;
    mser.min_area = 20;
    mser.max_variation = 0.5f;
    brisk.threshold = 10.f;
}

namespace {

const std::set<std::string> kSynthFamilies = {"exposure", "viewpoint", "rotation", "scale"};
const std::set<std::string> kAloiFamilies = {"aloi_illum_dir", "aloi_illum_color", "aloi_view",
                                             "aloi_stereo"};
const std::set<std::string> kDetectorTags = {"dog", "fast_hessian", "mser", "brisk"};
const std::set<std::string> kDescriptorTags = {"sift", "surf", "brisk", "freak"};

void check_tags(const std::vector<std::string>& tags, const std::set<std::string>& known,
                const char* what) {
    if (tags.empty())
        raise(ErrorCode::invalid_parameter, std::string(what) + " list must not be empty");
    std::set<std::string> seen;
    for (const auto& t : tags) {
        if (!known.count(t))
            raise(ErrorCode::invalid_parameter, std::string("unknown ") + what + " '" + t + "'");
        if (!seen.insert(t).second)
            raise(ErrorCode::invalid_parameter, std::string("duplicate ") + what + " '" + t + "'");
    }
}

std::string join(const std::vector<double>& v) {
    std::string out;
    char buf[40];
    for (size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        if (i)
            out += ",";
        out += buf;
    }
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ",";
        out += v[i];
    }
    return out;
}

// ---- TOML-lite: flat `key = value` lines, [section] tables one level deep,
// arrays of scalars, double-quoted strings, numbers, booleans, # comments.
// Lowered into the same JSON tree the .json path produces.

struct TomlCursor {
    const std::string& text;
    size_t pos = 0;
    int line = 1;
};

[[noreturn]] void toml_fail(const std::string& path, int line, const std::string& why) {
    raise(ErrorCode::io, path + ": line " + std::to_string(line) + ": " + why);
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// strip a trailing comment that is not inside a quoted string
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\'))
            quoted = !quoted;
        else if (s[i] == '#' && !quoted)
            return s.substr(0, i);
    }
    return s;
}

json parse_toml_scalar(const std::string& path, int line, const std::string& tok) {
    if (tok.empty())
        toml_fail(path, line, "empty value");
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"')
            toml_fail(path, line, "unterminated string");
        std::string out;
        for (size_t i = 1; i + 1 < tok.size(); ++i) {
            if (tok[i] == '\\' && i + 2 < tok.size() && (tok[i + 1] == '"' || tok[i + 1] == '\\'))
                out += tok[++i];
            else
                out += tok[i];
        }
        return json(out);
    }
    if (tok == "true")
        return json(true);
    if (tok == "false")
        return json(false);
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        toml_fail(path, line, "cannot parse value '" + tok + "'");
    if (v == static_cast<long long>(v) && tok.find_first_of(".eE") == std::string::npos)
        return json(static_cast<long long>(v));
    return json(v);
}

// split an array body on top-level commas (strings may contain commas)
std::vector<std::string> split_items(const std::string& path, int line, const std::string& body) {
    std::vector<std::string> items;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c == '"' && (i == 0 || body[i - 1] != '\\'))
            quoted = !quoted;
        if (c == ',' && !quoted) {
            items.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        toml_fail(path, line, "unterminated string");
    std::string last = trim(cur);
    if (!last.empty())
        items.push_back(last);
    return items;
}

json parse_toml_value(const std::string& path, int line, const std::string& tok) {
    if (!tok.empty() && tok.front() == '[') {
        if (tok.back() != ']')
            toml_fail(path, line, "unterminated array");
        json arr = json::array();
        for (const auto& item : split_items(path, line, tok.substr(1, tok.size() - 2)))
            arr.push_back(parse_toml_scalar(path, line, item));
        return arr;
    }
    return parse_toml_scalar(path, line, tok);
}

json parse_toml(const std::string& path, std::istream& in) {
    json root = json::object();
    json* table = &root;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(strip_comment(raw));
        if (s.empty())
            continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                toml_fail(path, line, "malformed table header");
            std::string name = trim(s.substr(1, s.size() - 2));
            if (name.empty() || name.find('.') != std::string::npos)
                toml_fail(path, line, "unsupported table name '" + name + "'");
            table = &root[name];
            if (!table->is_object())
                *table = json::object();
            continue;
        }
        size_t eq = std::string::npos;
        bool quoted = false;
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"')
                quoted = !quoted;
            else if (s[i] == '=' && !quoted) {
                eq = i;
                break;
            }
        }
        if (eq == std::string::npos)
            toml_fail(path, line, "expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty())
            toml_fail(path, line, "empty key");
        (*table)[key] = parse_toml_value(path, line, val);
    }
    return root;
}

// ---- applying the parsed tree onto the defaults, strictly

std::vector<double> as_doubles(const json& j, const std::string& key) {
    if (!j.is_array())
        raise(ErrorCode::invalid_parameter, "config key '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : j) {
        if (!e.is_number())
            raise(ErrorCode::invalid_parameter, "config key '" + key + "' must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<std::string> as_strings(const json& j, const std::string& key) {
    if (!j.is_array())
        raise(ErrorCode::invalid_parameter, "config key '" + key + "' must be an array");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string())
            raise(ErrorCode::invalid_parameter, "config key '" + key + "' must hold strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

double as_number(const json& j, const std::string& key) {
    if (!j.is_number())
        raise(ErrorCode::invalid_parameter, "config key '" + key + "' must be a number");
    return j.get<double>();
}

int as_int(const json& j, const std::string& key) {
    double v = as_number(j, key);
    if (v != static_cast<int>(v))
        raise(ErrorCode::invalid_parameter, "config key '" + key + "' must be an integer");
    return static_cast<int>(v);
}

std::string as_string(const json& j, const std::string& key) {
    if (!j.is_string())
        raise(ErrorCode::invalid_parameter, "config key '" + key + "' must be a string");
    return j.get<std::string>();
}

void apply_detector_params(BenchmarkConfig& cfg, const json& j) {
    for (const auto& [key, val] : j.items()) {
        if (key == "dog_contrast")
            cfg.dog.contrast_threshold = static_cast<float>(as_number(val, key));
        else if (key == "dog_edge_ratio")
            cfg.dog.edge_ratio = static_cast<float>(as_number(val, key));
        else if (key == "dog_octaves")
            cfg.dog.pyramid.octaves = as_int(val, key);
        else if (key == "fast_hessian_threshold")
            cfg.fast_hessian.threshold = static_cast<float>(as_number(val, key));
        else if (key == "fast_hessian_octaves")
            cfg.fast_hessian.octaves = as_int(val, key);
        else if (key == "mser_delta")
            cfg.mser.delta = as_int(val, key);
        else if (key == "mser_min_area")
            cfg.mser.min_area = as_int(val, key);
        else if (key == "mser_max_area")
            cfg.mser.max_area = as_int(val, key);
        else if (key == "mser_max_variation")
            cfg.mser.max_variation = static_cast<float>(as_number(val, key));
        else if (key == "brisk_threshold")
            cfg.brisk.threshold = static_cast<float>(as_number(val, key));
        else if (key == "brisk_layers")
            cfg.brisk.layers = as_int(val, key);
        else
            raise(ErrorCode::invalid_parameter, "unknown detector_params key '" + key + "'");
    }
}

void apply_aloi(BenchmarkConfig& cfg, const json& j) {
    for (const auto& [key, val] : j.items()) {
        if (key == "root")
            cfg.aloi_root = as_string(val, "aloi.root");
        else if (key == "families")
            cfg.aloi_families = as_strings(val, "aloi.families");
        else if (key == "objects")
            cfg.aloi_objects = as_strings(val, "aloi.objects");
        else
            raise(ErrorCode::invalid_parameter, "unknown aloi key '" + key + "'");
    }
}

void apply_images(BenchmarkConfig& cfg, const json& j, const std::string& key) {
    if (!j.is_array())
        raise(ErrorCode::invalid_parameter, "config key 'images' must be an array");
    cfg.images.clear();
    for (const auto& e : j) {
        if (e.is_string()) {
            // "name=path" shorthand (the only form TOML-lite can express)
            std::string s = e.get<std::string>();
            size_t eq = s.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 >= s.size())
                raise(ErrorCode::invalid_parameter,
                      "images entry '" + s + "' must look like name=path");
            cfg.images.emplace_back(s.substr(0, eq), s.substr(eq + 1));
        } else if (e.is_object() && e.contains("name") && e.contains("path")) {
            cfg.images.emplace_back(as_string(e["name"], key), as_string(e["path"], key));
        } else {
            raise(ErrorCode::invalid_parameter,
                  "images entries must be name=path strings or {name, path} objects");
        }
    }
}

void apply_tree(BenchmarkConfig& cfg, const json& root) {
    if (!root.is_object())
        raise(ErrorCode::invalid_parameter, "config root must be an object");
    for (const auto& [key, val] : root.items()) {
        if (key == "images")
            apply_images(cfg, val, key);
        else if (key == "bench_size")
            cfg.bench_size = as_int(val, key);
        else if (key == "families")
            cfg.families = as_strings(val, key);
        else if (key == "exposure_evs")
            cfg.exposure_evs = as_doubles(val, key);
        else if (key == "viewpoint_degs")
            cfg.viewpoint_degs = as_doubles(val, key);
        else if (key == "rotation_degs")
            cfg.rotation_degs = as_doubles(val, key);
        else if (key == "scale_factors")
            cfg.scale_factors = as_doubles(val, key);
        else if (key == "resolutions")
            cfg.resolutions = as_doubles(val, key);
        else if (key == "detectors")
            cfg.detectors = as_strings(val, key);
        else if (key == "descriptors")
            cfg.descriptors = as_strings(val, key);
        else if (key == "ratio")
            cfg.ratio = as_number(val, key);
        else if (key == "eps_pos")
            cfg.eps_pos = as_number(val, key);
        else if (key == "tau")
            cfg.tau = as_number(val, key);
        else if (key == "threads")
            cfg.threads = as_int(val, key);
        else if (key == "max_keypoints")
            cfg.max_keypoints = as_int(val, key);
        else if (key == "detector_params")
            apply_detector_params(cfg, val);
        else if (key == "aloi")
            apply_aloi(cfg, val);
        else
            raise(ErrorCode::invalid_parameter, "unknown config key '" + key + "'");
    }
}

} // namespace

void BenchmarkConfig::validate() const {
    if (bench_size < 32)
        raise(ErrorCode::invalid_parameter, "bench_size must be at least 32");
    if (!(ratio > 0.0 && ratio < 1.0))
        raise(ErrorCode::invalid_parameter, "ratio must lie in (0, 1)");
    if (!(eps_pos > 0.0) || !(tau > 0.0))
        raise(ErrorCode::invalid_parameter, "eps_pos and tau must be positive");
    if (threads < 0)
        raise(ErrorCode::invalid_parameter, "threads must be non-negative");
    if (max_keypoints < 0)
        raise(ErrorCode::invalid_parameter, "max_keypoints must be non-negative");
    if (resolutions.empty())
        raise(ErrorCode::invalid_parameter, "resolutions must not be empty");
    for (size_t i = 0; i < resolutions.size(); ++i) {
        double r = resolutions[i];
        if (r != 1.0 && r != 0.5 && r != 0.25)
            raise(ErrorCode::invalid_parameter,
                  "resolutions may only contain 1, 0.5, and 0.25");
        for (size_t j = 0; j < i; ++j)
            if (resolutions[j] == r)
                raise(ErrorCode::invalid_parameter, "duplicate resolution factor");
    }
    check_tags(detectors, kDetectorTags, "detector");
    check_tags(descriptors, kDescriptorTags, "descriptor");
    if (!families.empty())
        check_tags(families, kSynthFamilies, "family");
    if (!aloi_root.empty())
        check_tags(aloi_families, kAloiFamilies, "aloi family");
    auto need = [&](const std::string& fam, const std::vector<double>& v) {
        if (std::find(families.begin(), families.end(), fam) != families.end() && v.empty())
            raise(ErrorCode::invalid_parameter, "family '" + fam + "' has no parameter values");
    };
    need("exposure", exposure_evs);
    need("viewpoint", viewpoint_degs);
    need("rotation", rotation_degs);
    need("scale", scale_factors);
    for (double f : scale_factors)
        if (!(f > 0.0))
            raise(ErrorCode::invalid_parameter, "scale factors must be positive");
}

std::string BenchmarkConfig::canonical_text() const {
    std::ostringstream os;
    os << "bench_size=" << bench_size << "\n";
    os << "images=";
    for (size_t i = 0; i < images.size(); ++i)
        os << (i ? "," : "") << images[i].first << "=" << images[i].second;
    os << "\n";
    os << "families=" << join(families) << "\n";
    os << "exposure_evs=" << join(exposure_evs) << "\n";
    os << "viewpoint_degs=" << join(viewpoint_degs) << "\n";
    os << "rotation_degs=" << join(rotation_degs) << "\n";
    os << "scale_factors=" << join(scale_factors) << "\n";
    os << "resolutions=" << join(resolutions) << "\n";
    os << "detectors=" << join(detectors) << "\n";
    os << "descriptors=" << join(descriptors) << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", ratio);
    os << "ratio=" << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", eps_pos);
    os << "eps_pos=" << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", tau);
    os << "tau=" << buf << "\n";
    os << "threads=" << threads << "\n";
    os << "max_keypoints=" << max_keypoints << "\n";
    std::snprintf(buf, sizeof buf, "%.9g", dog.contrast_threshold);
    os << "dog_contrast=" << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.9g", dog.edge_ratio);
    os << "dog_edge_ratio=" << buf << "\n";
    os << "dog_octaves=" << dog.pyramid.octaves << "\n";
    std::snprintf(buf, sizeof buf, "%.9g", fast_hessian.threshold);
    os << "fast_hessian_threshold=" << buf << "\n";
    os << "fast_hessian_octaves=" << fast_hessian.octaves << "\n";
    os << "mser_delta=" << mser.delta << "\n";
    os << "mser_min_area=" << mser.min_area << "\n";
    os << "mser_max_area=" << mser.max_area << "\n";
    std::snprintf(buf, sizeof buf, "%.9g", mser.max_variation);
    os << "mser_max_variation=" << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.9g", brisk.threshold);
    os << "brisk_threshold=" << buf << "\n";
    os << "brisk_layers=" << brisk.layers << "\n";
    os << "aloi_root=" << aloi_root << "\n";
    os << "aloi_families=" << join(aloi_families) << "\n";
    os << "aloi_objects=" << join(aloi_objects) << "\n";
    return os.str();
}

uint64_t BenchmarkConfig::digest() const {
    std::string text = canonical_text();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

int BenchmarkConfig::effective_threads() const {
    if (const char* env = std::getenv("FEATBENCH_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1)
            return static_cast<int>(v);
        raise(ErrorCode::invalid_parameter,
              std::string("FEATBENCH_THREADS must be a positive integer, got '") + env + "'");
    }
    return threads > 0 ? threads : 1;
}

BenchmarkConfig load_benchmark_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        raise(ErrorCode::io, path + ": cannot open");
    json tree;
    bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    if (is_json) {
        try {
            in >> tree;
        } catch (const std::exception& e) {
            raise(ErrorCode::io, path + ": " + e.what());
        }
    } else {
        tree = parse_toml(path, in);
    }
    BenchmarkConfig cfg;
    apply_tree(cfg, tree);
    cfg.validate();
    return cfg;
}

} // namespace featkit
