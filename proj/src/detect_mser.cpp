#include "featkit/detect/mser.hpp"

#include <cmath>
#include <numbers>

namespace featkit {

namespace {

struct Node {
    int birth;
    int64_t area = 0;
    double sx = 0, sy = 0;
    int parent = -1;
    int path_child = -1;
    bool alive = true;
    std::vector<int> children;
};

struct Sweep {
    std::vector<Node> nodes;
    int root = -1;
};

int uf_find(std::vector<int>& uf, int p) {
    int r = p;
    while (uf[r] != r)
        r = uf[r];
    while (uf[p] != r) {
        int n = uf[p];
        uf[p] = r;
        p = n;
    }
    return r;
}

// Component tree of {I <= t} over a level sweep with union-find. Nodes are
// the distinct region versions; parent = the version that superseded them.
Sweep build_tree(const std::vector<uint8_t>& q, int w, int h) {
    const int n = w * h;
    std::vector<int> bucket_start(257, 0);
    for (int i = 0; i < n; ++i)
        bucket_start[q[i] + 1]++;
    for (int t = 0; t < 256; ++t)
        bucket_start[t + 1] += bucket_start[t];
    std::vector<int> order(n);
    {
        std::vector<int> cursor(bucket_start.begin(), bucket_start.end() - 1);
        for (int i = 0; i < n; ++i) // row-major, stable within a level
            order[cursor[q[i]]++] = i;
    }

    Sweep sw;
    sw.nodes.reserve(static_cast<size_t>(n) / 4 + 16);
    std::vector<int> uf(n, -1);       // -1 = inactive
    std::vector<int> comp_node(n, -1); // node of each UF root
    std::vector<int64_t> comp_size(n, 0);

    auto absorb_children = [&](Node& winner, int winner_id, Node& loser) {
        for (int c : loser.children) {
            sw.nodes[c].parent = winner_id;
            winner.children.push_back(c);
        }
        loser.children.clear();
    };

    int idx = 0;
    for (int t = 0; t < 256; ++t) {
        int end = bucket_start[t + 1];
        for (; idx < end; ++idx) {
            int p = order[idx];
            int px = p % w, py = p / w;
            uf[p] = p;
            comp_size[p] = 1;
            int nid = static_cast<int>(sw.nodes.size());
            sw.nodes.push_back(Node{t, 1, double(px), double(py), -1, -1, true, {}});
            comp_node[p] = nid;

            const int nbors[4] = {px > 0 ? p - 1 : -1, px + 1 < w ? p + 1 : -1,
                                  py > 0 ? p - w : -1, py + 1 < h ? p + w : -1};
            for (int nb : nbors) {
                if (nb < 0 || uf[nb] == -1)
                    continue;
                int rp = uf_find(uf, p);
                int rq = uf_find(uf, nb);
                if (rp == rq)
                    continue;
                int na = comp_node[rp], nbid = comp_node[rq];
                Node& A = sw.nodes[na];
                Node& B = sw.nodes[nbid];
                int keep; // surviving node id
                if (A.birth == t && B.birth == t) {
                    // same-level fragments fuse into one version
                    int win = (A.area > B.area || (A.area == B.area && na < nbid)) ? na : nbid;
                    int lose = win == na ? nbid : na;
                    Node& W = sw.nodes[win];
                    Node& L = sw.nodes[lose];
                    W.area += L.area;
                    W.sx += L.sx;
                    W.sy += L.sy;
                    absorb_children(W, win, L);
                    L.alive = false;
                    keep = win;
                } else if (A.birth == t || B.birth == t) {
                    int win = A.birth == t ? na : nbid;
                    int lose = win == na ? nbid : na;
                    Node& W = sw.nodes[win];
                    Node& L = sw.nodes[lose];
                    W.area += L.area;
                    W.sx += L.sx;
                    W.sy += L.sy;
                    L.parent = win;
                    W.children.push_back(lose);
                    keep = win;
                } else {
                    // two closed regions meet: a new version is born at t
                    keep = static_cast<int>(sw.nodes.size());
                    sw.nodes.push_back(Node{t, A.area + B.area, A.sx + B.sx,
                                            A.sy + B.sy, -1, -1, true, {}});
                    Node& W = sw.nodes.back();
                    sw.nodes[na].parent = keep;
                    sw.nodes[nbid].parent = keep;
                    W.children.push_back(na);
                    W.children.push_back(nbid);
                }
                // union the pixel sets
                int winner_root = comp_size[rp] >= comp_size[rq] ? rp : rq;
                int loser_root = winner_root == rp ? rq : rp;
                uf[loser_root] = winner_root;
                comp_size[winner_root] += comp_size[loser_root];
                comp_node[winner_root] = keep;
            }
            // a closed region grown by single pixels: the pixel's fresh node
            // must absorb the old version as a child, which the merge cases
            // above already did (the fresh node was born at t)
        }
    }

    for (size_t i = 0; i < sw.nodes.size(); ++i)
        if (sw.nodes[i].alive && sw.nodes[i].parent == -1)
            sw.root = static_cast<int>(i);

    // growth path: each version's heaviest child carries the region history
    for (auto& nd : sw.nodes) {
        if (!nd.alive)
            continue;
        int best = -1;
        for (int c : nd.children) {
            if (best == -1) {
                best = c;
                continue;
            }
            const Node& cb = sw.nodes[best];
            const Node& cc = sw.nodes[c];
            if (cc.area != cb.area) {
                if (cc.area > cb.area) best = c;
            } else if (cc.birth != cb.birth) {
                if (cc.birth < cb.birth) best = c;
            } else if (cc.sy != cb.sy) {
                if (cc.sy < cb.sy) best = c;
            } else if (cc.sx < cb.sx) {
                best = c;
            }
        }
        nd.path_child = best;
    }
    return sw;
}

int64_t size_at(const Sweep& sw, int node, int level) {
    if (level < 0)
        return 0;
    if (level > 255)
        level = 255;
    const Node* n = &sw.nodes[node];
    // interval end of a node is parent.birth - 1 (root runs to 255)
    while (n->parent != -1 && level >= sw.nodes[n->parent].birth)
        n = &sw.nodes[n->parent];
    while (level < n->birth) {
        if (n->path_child == -1)
            return 0;
        n = &sw.nodes[n->path_child];
    }
    return n->area;
}

double variation(const Sweep& sw, int node, int delta) {
    const Node& n = sw.nodes[node];
    int end = n.parent == -1 ? 255 : sw.nodes[n.parent].birth - 1;
    double best = std::numeric_limits<double>::infinity();
    for (int t = n.birth; t <= end; ++t) {
        double grow = static_cast<double>(size_at(sw, node, t + delta));
        double shrink = static_cast<double>(size_at(sw, node, t - delta));
        double v = (grow - shrink) / static_cast<double>(n.area);
        if (v < best)
            best = v;
    }
    return best;
}

void sweep_regions(const std::vector<uint8_t>& q, int w, int h,
                   const MserParams& params, int64_t max_area,
                   std::vector<Keypoint>& out) {
    Sweep sw = build_tree(q, w, h);
    std::vector<double> var(sw.nodes.size(),
                            std::numeric_limits<double>::infinity());
    for (size_t i = 0; i < sw.nodes.size(); ++i)
        if (sw.nodes[i].alive)
            var[i] = variation(sw, static_cast<int>(i), params.delta);

    for (size_t i = 0; i < sw.nodes.size(); ++i) {
        const Node& n = sw.nodes[i];
        if (!n.alive || static_cast<int>(i) == sw.root)
            continue;
        if (n.area < params.min_area || n.area > max_area)
            continue;
        double v = var[i];
        if (v > params.max_variation)
            continue;
        // keep only versions at a local stability minimum along their path
        if (n.parent != -1 && var[n.parent] < v)
            continue;
        if (n.path_child != -1 && var[n.path_child] < v)
            continue;

        Keypoint kp;
        kp.x = static_cast<float>(n.sx / static_cast<double>(n.area));
        kp.y = static_cast<float>(n.sy / static_cast<double>(n.area));
        kp.scale = static_cast<float>(
            std::sqrt(static_cast<double>(n.area) / std::numbers::pi));
        kp.response = static_cast<float>(1.0 / std::max(v, 1e-9));
        kp.octave = 0;
        kp.detector = DetectorKind::mser;
        out.push_back(kp);
    }
}

} // namespace

std::vector<Keypoint> detect_mser(const GrayImage& img, const MserParams& params) {
    if (params.delta < 1 || params.delta > 127)
        raise(ErrorCode::invalid_parameter, "delta must be in 1..127");
    if (params.min_area < 1)
        raise(ErrorCode::invalid_parameter, "min_area must be >= 1");
    if (!(params.max_variation > 0.f))
        raise(ErrorCode::invalid_parameter, "max_variation must be positive");
    int64_t pixels = static_cast<int64_t>(img.width()) * img.height();
    int64_t max_area = params.max_area > 0
                           ? params.max_area
                           : std::max<int64_t>(params.min_area + 1,
                                               static_cast<int64_t>(pixels / 100));
    if (max_area <= params.min_area)
        raise(ErrorCode::invalid_parameter,
              "max_area must exceed min_area (" + std::to_string(max_area) +
                  " vs " + std::to_string(params.min_area) + ")");

    const int w = img.width(), h = img.height();
    std::vector<uint8_t> q(static_cast<size_t>(w) * h);
    const float* src = img.data();
    for (size_t i = 0; i < q.size(); ++i) {
        long v = std::lround(src[i]);
        if (v < 0) v = 0;
        if (v > 255) v = 255;
        q[i] = static_cast<uint8_t>(v);
    }

    std::vector<Keypoint> out;
    sweep_regions(q, w, h, params, max_area, out); // dark on bright
    std::vector<uint8_t> inv(q.size());
    for (size_t i = 0; i < q.size(); ++i)
        inv[i] = static_cast<uint8_t>(255 - q[i]);
    sweep_regions(inv, w, h, params, max_area, out); // bright on dark
    sort_keypoints(out);
    return out;
}

} // namespace featkit
