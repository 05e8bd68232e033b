#include "cast/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "cast/linalg.hpp"

namespace cast::track {

namespace {

constexpr double kConfidenceClamp = 1e-6;

double clamp01(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

} // namespace

void TrackerConfig::validate() const {
    for (double w : factor_weights)
        if (w <= 0.0) throw config_error("factor weights must be strictly positive");
    if (significance_fraction <= 0.0 || significance_fraction > 1.0)
        throw config_error("significance_fraction must be in (0,1]");
    if (entry_exit_cost < 0.0) throw config_error("entry_exit_cost must be >= 0");
    if (min_link_likelihood <= 0.0 || min_link_likelihood >= 1.0)
        throw config_error("min_link_likelihood must be in (0,1)");
    if (skip_window_frames < 0) throw config_error("skip_window_frames must be >= 0");
}

int TrackerConfig::effective_skip_window(double sample_fps) const {
    if (skip_window_frames > 0) return skip_window_frames;
    return std::max(1, static_cast<int>(std::lround(sample_fps)));
}

std::array<double, 6> link_factors(const Proposal& a, const Proposal& b, const EmbeddingSet& emb,
                                   const FrameGeometry& geometry, double sample_fps,
                                   double min_link_likelihood) {
    if (b.frame_index <= a.frame_index)
        throw integrity_error("link factors require a.frame_index < b.frame_index");
    if (!emb.has(a.proposal_id) || !emb.has(b.proposal_id))
        throw integrity_error("missing embedding for link factor computation");

    double gap = static_cast<double>(b.frame_index - a.frame_index);
    double area_a = a.box.area(), area_b = b.box.area();
    double dx = b.box.center_x() - a.box.center_x();
    double dy = b.box.center_y() - a.box.center_y();
    double center_dist = std::hypot(dx, dy);

    std::array<double, 6> f{};
    f[0] = std::exp(-(gap - 1.0) / sample_fps);
    f[1] = 0.5 * (BoundingBox::iou(a.box, b.box) + 1.0);
    f[2] = std::min(area_a, area_b) / std::max(area_a, area_b);
    f[3] = std::exp(-center_dist / geometry.diagonal());
    f[4] = 0.5 * (cosine_similarity(emb.at(a.proposal_id), emb.at(b.proposal_id)) + 1.0);
    f[5] = std::exp(-center_dist / std::sqrt(std::max(area_a, area_b)));

    for (auto& v : f) v = clamp01(v, min_link_likelihood, 1.0);
    return f;
}

double link_likelihood(const std::array<double, 6>& factors,
                       const std::array<double, 6>& weights) {
    double log_sum = 0.0, weight_sum = 0.0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (factors[i] <= 0.0) throw integrity_error("link factor must be positive");
        if (weights[i] <= 0.0) throw config_error("factor weights must be strictly positive");
        log_sum += weights[i] * std::log(factors[i]);
        weight_sum += weights[i];
    }
    return std::exp(log_sum / weight_sum);
}

double observation_cost(double confidence) {
    double c = clamp01(confidence, kConfidenceClamp, 1.0 - kConfidenceClamp);
    return std::log((1.0 - c) / c);
}

void FlowGraph::validate(int skip_window) const {
    std::vector<bool> has_observation(proposals.size(), false);
    for (const auto& e : edges) {
        if (e.from < 0 || e.from >= node_count() || e.to < 0 || e.to >= node_count())
            throw integrity_error("flow edge references an unknown node");
        if (e.from >= 2 && e.to >= 2) {
            int pf = (e.from - 2) / 2, pt = (e.to - 2) / 2;
            if (pf == pt) {
                has_observation[static_cast<std::size_t>(pf)] = true;
                continue;
            }
            int gap = proposals[static_cast<std::size_t>(pt)].frame_index -
                      proposals[static_cast<std::size_t>(pf)].frame_index;
            if (gap < 1 || gap > skip_window)
                throw integrity_error("link edge outside the skip window");
        }
    }
    for (bool ok : has_observation)
        if (!ok) throw integrity_error("proposal without an observation edge");
}

FlowGraph build_graph(std::span<const Proposal> shot_proposals, const EmbeddingSet& emb,
                      const FrameGeometry& geometry, double sample_fps,
                      const TrackerConfig& config) {
    config.validate();
    FlowGraph g;
    g.proposals.assign(shot_proposals.begin(), shot_proposals.end());
    std::sort(g.proposals.begin(), g.proposals.end(), [](const Proposal& a, const Proposal& b) {
        if (a.frame_index != b.frame_index) return a.frame_index < b.frame_index;
        return a.proposal_id < b.proposal_id;
    });

    int n = static_cast<int>(g.proposals.size());
    int skip = config.effective_skip_window(sample_fps);
    for (int i = 0; i < n; ++i) {
        g.edges.push_back({0, FlowGraph::in_node(i), config.entry_exit_cost});
        g.edges.push_back({FlowGraph::in_node(i), FlowGraph::out_node(i),
                           observation_cost(g.proposals[static_cast<std::size_t>(i)].confidence)});
        g.edges.push_back({FlowGraph::out_node(i), 1, config.entry_exit_cost});
    }
    for (int i = 0; i < n; ++i) {
        const Proposal& a = g.proposals[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) {
            const Proposal& b = g.proposals[static_cast<std::size_t>(j)];
            int gap = b.frame_index - a.frame_index;
            if (gap < 1) continue;
            if (gap > skip) break; // proposals are frame-sorted
            double like = link_likelihood(
                link_factors(a, b, emb, geometry, sample_fps, config.min_link_likelihood),
                config.factor_weights);
            g.edges.push_back({FlowGraph::out_node(i), FlowGraph::in_node(j), -std::log(like)});
        }
    }
    return g;
}

namespace {

/// Reconstructs the proposal id sequence of the path ending at `node`.
std::vector<int> path_proposals(const std::vector<int>& parent, int node) {
    std::vector<int> seq;
    for (int v = node; v > 1; v = parent[static_cast<std::size_t>(v)])
        if (v >= 2 && v % 2 == 0) seq.push_back((v - 2) / 2); // in-nodes carry the proposal
    std::reverse(seq.begin(), seq.end());
    return seq;
}

bool lexicographically_smaller(const FlowGraph& g, const std::vector<int>& a,
                               const std::vector<int>& b) {
    auto id = [&](int i) -> const std::string& {
        return g.proposals[static_cast<std::size_t>(i)].proposal_id;
    };
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (id(a[i]) != id(b[i])) return id(a[i]) < id(b[i]);
    }
    return a.size() < b.size();
}

} // namespace

std::vector<ExtractedPath> extract_paths(const FlowGraph& graph, const TrackerConfig& config) {
    config.validate();
    std::vector<ExtractedPath> accepted;
    if (graph.proposals.empty()) return accepted;

    int nodes = graph.node_count();
    std::vector<bool> used(graph.proposals.size(), false);
    const double inf = std::numeric_limits<double>::infinity();

    // Edges sorted by topological position of the source node. Nodes were
    // created frame-sorted, so ascending `from` already is a topological order
    // (source = 0 first, links only go forward).
    std::vector<FlowGraph::Edge> edges = graph.edges;
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
        if (a.from != b.from) return a.from < b.from;
        return a.to < b.to;
    });

    auto proposal_of = [](int node) { return node >= 2 ? (node - 2) / 2 : -1; };

    while (true) {
        std::vector<double> dist(static_cast<std::size_t>(nodes), inf);
        std::vector<int> parent(static_cast<std::size_t>(nodes), -1);
        dist[0] = 0.0;
        for (const auto& e : edges) {
            int pf = proposal_of(e.from), pt = proposal_of(e.to);
            if ((pf >= 0 && used[static_cast<std::size_t>(pf)]) ||
                (pt >= 0 && used[static_cast<std::size_t>(pt)]))
                continue;
            if (dist[static_cast<std::size_t>(e.from)] == inf) continue;
            double cand = dist[static_cast<std::size_t>(e.from)] + e.cost;
            auto& cur = dist[static_cast<std::size_t>(e.to)];
            if (cand < cur) {
                cur = cand;
                parent[static_cast<std::size_t>(e.to)] = e.from;
            } else if (cand == cur && parent[static_cast<std::size_t>(e.to)] != e.from) {
                // Equal-cost tie: keep the lexicographically smaller id sequence.
                std::vector<int> alt = path_proposals(parent, e.from);
                if (pt >= 0) alt.push_back(pt);
                std::vector<int> curp = path_proposals(parent, e.to);
                if (lexicographically_smaller(graph, alt, curp))
                    parent[static_cast<std::size_t>(e.to)] = e.from;
            }
        }
        if (dist[1] >= 0.0 || dist[1] == inf) break;

        ExtractedPath path;
        path.cost = dist[1];
        for (int node_proposal : path_proposals(parent, 1)) {
            used[static_cast<std::size_t>(node_proposal)] = true;
            path.proposal_ids.push_back(
                graph.proposals[static_cast<std::size_t>(node_proposal)].proposal_id);
        }
        accepted.push_back(std::move(path));
    }

    if (!accepted.empty()) {
        double cost_min = accepted.front().cost; // first path is the cheapest
        for (const auto& p : accepted) cost_min = std::min(cost_min, p.cost);
        for (auto& p : accepted) p.significance = std::exp(cost_min - p.cost);
    }
    return accepted;
}

std::vector<Tracklet> extract_tracklets(const FlowGraph& graph, const TrackerConfig& config) {
    auto paths = extract_paths(graph, config);
    std::vector<Tracklet> out;
    for (const auto& p : paths) {
        if (p.significance < config.significance_fraction) continue;
        Tracklet t;
        t.shot_id = graph.proposals.empty() ? std::string{} : graph.proposals.front().shot_id;
        t.proposal_ids = p.proposal_ids;
        t.significance = p.significance;
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<Tracklet> track_shots(const io::ProposalFile& proposals, const ShotList& shots,
                                  const EmbeddingSet& emb, const TrackerConfig& config) {
    shots.validate();
    std::vector<Tracklet> all;
    for (const auto& shot : shots.shots) {
        std::vector<Proposal> in_shot;
        for (const auto& p : proposals.proposals) {
            if (p.shot_id != shot.shot_id) continue;
            if (!shot.contains(p.frame_index))
                throw integrity_error("proposal '" + p.proposal_id +
                                      "' is outside its shot's frame range");
            in_shot.push_back(p);
        }
        if (in_shot.empty()) continue;
        FlowGraph g = build_graph(in_shot, emb, proposals.geometry, shots.sample_fps, config);
        for (auto& t : extract_tracklets(g, config)) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "t%05zu", all.size());
            t.tracklet_id = buf;
            t.shot_id = shot.shot_id;
            all.push_back(std::move(t));
        }
    }
    return all;
}

} // namespace cast::track
