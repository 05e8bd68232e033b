#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "cast/io.hpp"
#include "cast/types.hpp"

namespace cast::track {

struct TrackerConfig {
    std::array<double, 6> factor_weights{1.0, 1.5, 1.5, 2.0, 3.5, 4.5};
    int skip_window_frames = 0; // 0: use round(sample_fps)
    double significance_fraction = 0.10;
    double entry_exit_cost = 2.0;
    double min_link_likelihood = 1e-4;

    void validate() const;
    int effective_skip_window(double sample_fps) const;
};

/// The six pairwise link factors, each in (0, 1]:
/// time-gap proximity, IoU likelihood, scale ratio, center-distance proximity,
/// semantic similarity, scale-weighted center proximity.
std::array<double, 6> link_factors(const Proposal& a, const Proposal& b, const EmbeddingSet& emb,
                                   const FrameGeometry& geometry, double sample_fps,
                                   double min_link_likelihood);

/// Weighted geometric average (prod f_i^w_i)^(1/sum w_i).
double link_likelihood(const std::array<double, 6>& factors, const std::array<double, 6>& weights);

/// Detection cost of routing a path through a proposal: log((1-c)/c) with the
/// confidence clamped to [1e-6, 1-1e-6]. Negative for confident detections, so
/// that a source->sink path turns profitable once the accumulated detection and
/// link evidence outweighs the entry and exit costs.
double observation_cost(double confidence);

/// Unit-capacity flow network over one shot's proposals.
/// Node ids: 0 = source, 1 = sink, 2+2i = in(i), 3+2i = out(i), with proposals
/// sorted by (frame_index, proposal_id) so edges always point forward.
struct FlowGraph {
    struct Edge {
        int from = 0;
        int to = 0;
        double cost = 0.0;
    };

    std::vector<Proposal> proposals;
    std::vector<Edge> edges;

    int node_count() const { return 2 + 2 * static_cast<int>(proposals.size()); }
    static int in_node(int proposal) { return 2 + 2 * proposal; }
    static int out_node(int proposal) { return 3 + 2 * proposal; }

    /// Acyclicity, per-proposal observation edge, forward links within the window.
    void validate(int skip_window) const;
};

FlowGraph build_graph(std::span<const Proposal> shot_proposals, const EmbeddingSet& emb,
                      const FrameGeometry& geometry, double sample_fps,
                      const TrackerConfig& config);

/// One accepted source->sink path before significance filtering.
struct ExtractedPath {
    std::vector<std::string> proposal_ids;
    double cost = 0.0;
    double significance = 0.0; // exp(cost_min - cost), per-shot max-normalized
};

/// Greedy extraction: repeatedly take the minimum-cost source->sink path
/// (topological relaxation, negative costs allowed), accept while the path cost
/// is negative, and remove the used proposals. Ties between equal-cost paths
/// resolve to the lexicographically smallest proposal id sequence.
std::vector<ExtractedPath> extract_paths(const FlowGraph& graph, const TrackerConfig& config);

/// extract_paths + significance filter, as tracklets (ids assigned by caller).
std::vector<Tracklet> extract_tracklets(const FlowGraph& graph, const TrackerConfig& config);

/// Per-shot tracking over a whole video; tracklet ids are t00000, t00001, ...
/// in shot order, then acceptance order.
std::vector<Tracklet> track_shots(const io::ProposalFile& proposals, const ShotList& shots,
                                  const EmbeddingSet& emb, const TrackerConfig& config);

} // namespace cast::track
