#include "cast/selfsup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "cast/linalg.hpp"
#include "cast/rng.hpp"

namespace cast::selfsup {

void RefineConfig::validate() const {
    if (num_triplets < 0) throw config_error("num_triplets must be >= 0");
    if (epochs <= 0) throw config_error("epochs must be positive");
    if (batch_size <= 0) throw config_error("batch_size must be positive");
    if (learning_rate < 0.0) throw config_error("learning_rate must be >= 0");
    if (weight_decay < 0.0) throw config_error("weight_decay must be >= 0");
    if (beta1 <= 0.0 || beta1 >= 1.0 || beta2 <= 0.0 || beta2 >= 1.0)
        throw config_error("beta coefficients must be in (0,1)");
    if (lr_decay_gamma <= 0.0) throw config_error("lr_decay_gamma must be positive");
    if (margin <= 0.0) throw config_error("margin must be positive");
    if (output_dimension < 0) throw config_error("output_dimension must be >= 0");
    if (adam_epsilon <= 0.0) throw config_error("adam_epsilon must be positive");
}

ProjectionHead ProjectionHead::identity(int rows, int cols) {
    ProjectionHead h;
    h.rows = rows;
    h.cols = cols;
    h.m.assign(static_cast<std::size_t>(rows) * cols, 0.0);
    for (int i = 0; i < std::min(rows, cols); ++i) h.at(i, i) = 1.0;
    return h;
}

std::vector<double> ProjectionHead::apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != cols)
        throw integrity_error("projection input dimension mismatch");
    std::vector<double> y(static_cast<std::size_t>(rows), 0.0);
    for (int r = 0; r < rows; ++r) {
        double s = 0.0;
        const double* row = m.data() + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) s += row[c] * x[static_cast<std::size_t>(c)];
        y[static_cast<std::size_t>(r)] = s;
    }
    return y;
}

namespace {

struct FrameSlot {
    std::vector<std::size_t> member_tracklet; // tracklet index per member
    std::vector<std::string> member_pid;
    std::vector<std::size_t> anchor_candidates; // indices into members
};

struct ShotPool {
    std::vector<FrameSlot> frames; // eligible frames only
};

} // namespace

std::vector<Triplet> sample_triplets(const std::vector<Tracklet>& tracklets,
                                     const io::ProposalFile& proposals, int n,
                                     std::uint64_t seed) {
    if (n < 0) throw config_error("triplet count must be >= 0");

    auto index = proposals.index();
    std::map<std::string, std::size_t> tracklet_of;
    for (std::size_t t = 0; t < tracklets.size(); ++t)
        for (const auto& pid : tracklets[t].proposal_ids) tracklet_of[pid] = t;

    // shot -> frame -> tracklet members in that frame
    std::map<std::string, std::map<int, FrameSlot>> by_shot;
    for (const auto& [pid, t] : tracklet_of) {
        auto it = index.find(pid);
        if (it == index.end())
            throw integrity_error("tracklet references unknown proposal '" + pid + "'");
        auto& slot = by_shot[it->second->shot_id][it->second->frame_index];
        slot.member_tracklet.push_back(t);
        slot.member_pid.push_back(pid);
    }

    // Eligibility: a frame needs members of >= 2 tracklets and at least one
    // anchor whose tracklet has a positive to offer; a shot needs >= 2
    // tracklets and an eligible frame.
    std::vector<ShotPool> pools;
    for (auto& [shot_id, frames] : by_shot) {
        std::set<std::size_t> shot_tracklets;
        for (auto& [frame, slot] : frames) {
            (void)frame;
            for (auto t : slot.member_tracklet) shot_tracklets.insert(t);
        }
        if (shot_tracklets.size() < 2) continue;
        ShotPool pool;
        for (auto& [frame, slot] : frames) {
            (void)frame;
            for (std::size_t i = 0; i < slot.member_pid.size(); ++i) {
                if (tracklets[slot.member_tracklet[i]].proposal_ids.size() < 2) continue;
                bool has_negative = false;
                for (std::size_t j = 0; j < slot.member_pid.size(); ++j)
                    if (slot.member_tracklet[j] != slot.member_tracklet[i]) has_negative = true;
                if (has_negative) slot.anchor_candidates.push_back(i);
            }
            if (!slot.anchor_candidates.empty()) pool.frames.push_back(slot);
        }
        if (!pool.frames.empty()) pools.push_back(std::move(pool));
    }
    if (pools.empty()) return {};

    Rng rng(seed);
    std::vector<Triplet> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int draw = 0; draw < n; ++draw) {
        const ShotPool& pool = pools[rng.uniform_index(pools.size())];
        const FrameSlot& slot = pool.frames[rng.uniform_index(pool.frames.size())];
        std::size_t anchor_idx =
            slot.anchor_candidates[rng.uniform_index(slot.anchor_candidates.size())];

        std::vector<std::size_t> negatives;
        for (std::size_t j = 0; j < slot.member_pid.size(); ++j)
            if (slot.member_tracklet[j] != slot.member_tracklet[anchor_idx]) negatives.push_back(j);
        std::size_t negative_idx = negatives[rng.uniform_index(negatives.size())];

        const Tracklet& anchor_tracklet = tracklets[slot.member_tracklet[anchor_idx]];
        std::vector<std::string> positives;
        for (const auto& pid : anchor_tracklet.proposal_ids)
            if (pid != slot.member_pid[anchor_idx]) positives.push_back(pid);

        Triplet t;
        t.anchor = slot.member_pid[anchor_idx];
        t.negative = slot.member_pid[negative_idx];
        t.positive = positives[rng.uniform_index(positives.size())];
        out.push_back(std::move(t));
    }
    return out;
}

double triplet_loss(std::span<const double> anchor, std::span<const double> positive,
                    std::span<const double> negative, double margin) {
    if (anchor.size() != positive.size() || anchor.size() != negative.size())
        throw integrity_error("triplet vectors have mismatched dimensions");
    double dp = squared_distance(anchor, positive);
    double dn = squared_distance(anchor, negative);
    return std::max(0.0, dp - dn + margin);
}

double batch_loss_and_gradient(const ProjectionHead& head, const EmbeddingSet& emb,
                               std::span<const Triplet> batch, double margin,
                               std::vector<double>& grad) {
    if (grad.size() != head.m.size())
        throw integrity_error("gradient buffer has the wrong size");
    if (batch.empty()) return 0.0;

    double total = 0.0;
    double inv = 1.0 / static_cast<double>(batch.size());
    for (const auto& t : batch) {
        const auto& xa = emb.at(t.anchor);
        const auto& xp = emb.at(t.positive);
        const auto& xn = emb.at(t.negative);
        auto ya = head.apply(xa);
        auto yp = head.apply(xp);
        auto yn = head.apply(xn);
        double dp = squared_distance(ya, yp);
        double dn = squared_distance(ya, yn);
        double loss = dp - dn + margin;
        if (loss <= 0.0) continue;
        total += loss;
        // d/dW [|W(a-p)|^2 - |W(a-n)|^2] = 2 W(a-p)(a-p)^T - 2 W(a-n)(a-n)^T
        for (int r = 0; r < head.rows; ++r) {
            double up = ya[static_cast<std::size_t>(r)] - yp[static_cast<std::size_t>(r)];
            double un = ya[static_cast<std::size_t>(r)] - yn[static_cast<std::size_t>(r)];
            double* grow = grad.data() + static_cast<std::size_t>(r) * head.cols;
            for (int c = 0; c < head.cols; ++c) {
                double ap = xa[static_cast<std::size_t>(c)] - xp[static_cast<std::size_t>(c)];
                double an = xa[static_cast<std::size_t>(c)] - xn[static_cast<std::size_t>(c)];
                grow[c] += 2.0 * inv * (up * ap - un * an);
            }
        }
    }
    return total * inv;
}

RefineResult refine(const EmbeddingSet& base, const std::vector<Triplet>& triplets,
                    const RefineConfig& config) {
    config.validate();
    int in_dim = base.dimension;
    int out_dim = config.output_dimension > 0 ? config.output_dimension : in_dim;

    RefineResult result;
    result.head = ProjectionHead::identity(out_dim, in_dim);

    for (const auto& t : triplets)
        if (!base.has(t.anchor) || !base.has(t.positive) || !base.has(t.negative))
            throw integrity_error("triplet references a proposal without an embedding");

    if (!triplets.empty()) {
        std::size_t params = result.head.m.size();
        std::vector<double> m1(params, 0.0), m2(params, 0.0), grad(params, 0.0);
        Rng rng(config.rng_seed);
        double lr = config.learning_rate;
        int decay_epoch = static_cast<int>(std::ceil(0.8 * config.epochs));
        long long step = 0;

        std::vector<std::size_t> order(triplets.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

        std::vector<Triplet> batch;
        for (int epoch = 1; epoch <= config.epochs; ++epoch) {
            rng.shuffle(order);
            double epoch_total = 0.0;
            for (std::size_t start = 0; start < order.size();
                 start += static_cast<std::size_t>(config.batch_size)) {
                std::size_t end =
                    std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
                batch.clear();
                for (std::size_t i = start; i < end; ++i) batch.push_back(triplets[order[i]]);

                std::fill(grad.begin(), grad.end(), 0.0);
                double mean_loss =
                    batch_loss_and_gradient(result.head, base, batch, config.margin, grad);
                epoch_total += mean_loss * static_cast<double>(batch.size());

                ++step;
                double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
                double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
                for (std::size_t i = 0; i < params; ++i) {
                    m1[i] = config.beta1 * m1[i] + (1.0 - config.beta1) * grad[i];
                    m2[i] = config.beta2 * m2[i] + (1.0 - config.beta2) * grad[i] * grad[i];
                    double mhat = m1[i] / bc1;
                    double vhat = m2[i] / bc2;
                    // decoupled decay, scaled by the step size as in AdamW
                    result.head.m[i] -= lr * config.weight_decay * result.head.m[i];
                    result.head.m[i] -= lr * mhat / (std::sqrt(vhat) + config.adam_epsilon);
                }
            }
            result.epoch_loss.push_back(epoch_total / static_cast<double>(triplets.size()));
            if (epoch == decay_epoch) lr *= config.lr_decay_gamma;
        }
    }

    result.refined.dimension = out_dim;
    result.refined.space_tag = SpaceTag::refined;
    for (const auto& [pid, x] : base.entries)
        result.refined.insert(pid, result.head.apply(x));
    return result;
}

} // namespace cast::selfsup
