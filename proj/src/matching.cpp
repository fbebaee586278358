#include "featkit/match/matching.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "featkit/kernels/kernels.hpp"

namespace featkit {

namespace {

uint64_t fnv1a(const uint8_t* data, size_t n) {
    uint64_t h = 1469598103934665603ull;
    for (size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t row_hash(const DescriptorSet& s, size_t i) {
    if (s.binary())
        return fnv1a(s.brow(i), s.bytes_per_row());
    return fnv1a(reinterpret_cast<const uint8_t*>(s.frow(i)), s.bytes_per_row());
}

} // namespace

float descriptor_distance(const DescriptorSet& a, size_t i,
                          const DescriptorSet& b, size_t j) {
    if (a.kind != b.kind || a.dim != b.dim)
        raise(ErrorCode::incompatible_descriptor,
              std::string("cannot compare ") + descriptor_tag(a.kind) + "/" +
                  std::to_string(a.dim) + " with " + descriptor_tag(b.kind) + "/" +
                  std::to_string(b.dim));
    if (i >= a.size() || j >= b.size())
        raise(ErrorCode::out_of_bounds, "descriptor row index out of range");
    const auto& k = kernels::ops();
    if (a.binary())
        return static_cast<float>(k.hamming(a.brow(i), b.brow(j), a.bytes_per_row()));
    return std::sqrt(k.l2_sq(a.frow(i), b.frow(j), static_cast<size_t>(a.dim)));
}

std::vector<TwoNearest> knn2(const DescriptorSet& query, const DescriptorSet& train) {
    if (query.kind != train.kind || query.dim != train.dim)
        raise(ErrorCode::incompatible_descriptor,
              std::string("cannot match ") + descriptor_tag(query.kind) +
                  " against " + descriptor_tag(train.kind));
    if (train.size() < 2)
        raise(ErrorCode::insufficient_train_set,
              "need at least 2 train descriptors, got " +
                  std::to_string(train.size()));

    // tie order: distance, then content hash, then index
    std::vector<uint64_t> hashes(train.size());
    for (size_t j = 0; j < train.size(); ++j)
        hashes[j] = row_hash(train, j);

    const auto& k = kernels::ops();
    std::vector<TwoNearest> out(query.size());
    for (size_t i = 0; i < query.size(); ++i) {
        uint32_t best = 0, second = 0;
        float bd = 0.f, sd = 0.f;
        bool have_best = false, have_second = false;
        for (size_t j = 0; j < train.size(); ++j) {
            float d = query.binary()
                          ? static_cast<float>(k.hamming(query.brow(i), train.brow(j),
                                                         query.bytes_per_row()))
                          : std::sqrt(k.l2_sq(query.frow(i), train.frow(j),
                                              static_cast<size_t>(query.dim)));
            auto before = [&](float dn, size_t jn, float dc, uint32_t jc) {
                if (dn != dc)
                    return dn < dc;
                if (hashes[jn] != hashes[jc])
                    return hashes[jn] < hashes[jc];
                return jn < jc;
            };
            if (!have_best || before(d, j, bd, best)) {
                if (have_best) {
                    second = best;
                    sd = bd;
                    have_second = true;
                }
                best = static_cast<uint32_t>(j);
                bd = d;
                have_best = true;
            } else if (!have_second || before(d, j, sd, second)) {
                second = static_cast<uint32_t>(j);
                sd = d;
                have_second = true;
            }
        }
        out[i] = {best, bd, second, sd};
    }
    return out;
}

std::vector<Match> match_ratio(const DescriptorSet& query, const DescriptorSet& train,
                               float ratio) {
    if (!(ratio > 0.f) || ratio >= 1.f)
        raise(ErrorCode::invalid_parameter,
              "ratio must lie in (0, 1), got " + std::to_string(ratio));
    std::vector<TwoNearest> nn = knn2(query, train);
    std::vector<Match> out;
    for (size_t i = 0; i < nn.size(); ++i)
        if (nn[i].d1 < ratio * nn[i].d2)
            out.push_back({static_cast<uint32_t>(i), nn[i].train1, nn[i].d1});
    return out;
}

void save_matches_csv(const std::string& path, const std::vector<Match>& matches) {
    std::ofstream out(path);
    if (!out)
        raise(ErrorCode::io, path + ": cannot open for writing");
    out << "query_index,train_index,distance\n";
    char buf[96];
    for (const auto& m : matches) {
        std::snprintf(buf, sizeof buf, "%u,%u,%.6g\n", m.query, m.train, m.distance);
        out << buf;
    }
    if (!out)
        raise(ErrorCode::io, path + ": write failed");
}

std::vector<Match> load_matches_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        raise(ErrorCode::io, path + ": cannot open match csv");
    std::string line;
    if (!std::getline(in, line) || line != "query_index,train_index,distance")
        raise(ErrorCode::io, path + ": bad match csv header");
    std::vector<Match> out;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        Match m;
        if (std::sscanf(line.c_str(), "%u,%u,%f", &m.query, &m.train, &m.distance) != 3)
            raise(ErrorCode::io,
                  path + ": line " + std::to_string(lineno) + ": expected 3 fields");
        out.push_back(m);
    }
    return out;
}

} // namespace featkit
