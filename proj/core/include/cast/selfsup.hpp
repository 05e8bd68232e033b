#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cast/io.hpp"
#include "cast/types.hpp"

namespace cast::selfsup {

struct RefineConfig {
    int num_triplets = 10000;
    int epochs = 10;
    int batch_size = 20;
    double learning_rate = 2e-5;
    double weight_decay = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double lr_decay_gamma = 0.1;
    double margin = 1.0;
    int output_dimension = 0; // 0: same as input
    std::uint64_t rng_seed = 0;
    double adam_epsilon = 1e-8;

    void validate() const;
};

/// Linear map applied to every base embedding; initialized to the (truncated)
/// identity so an untrained head is a no-op.
struct ProjectionHead {
    int rows = 0; // output dimension
    int cols = 0; // input dimension
    std::vector<double> m; // row-major

    static ProjectionHead identity(int rows, int cols);

    double& at(int r, int c) { return m[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return m[static_cast<std::size_t>(r) * cols + c]; }

    std::vector<double> apply(std::span<const double> x) const;

    io::MatrixFile to_matrix() const { return {rows, cols, m}; }
    static ProjectionHead from_matrix(const io::MatrixFile& f) { return {f.rows, f.cols, f.values}; }
};

/// Samples triplets from tracklets: uniformly an eligible shot, then an eligible
/// frame, then anchor and negative from distinct tracklets in that frame, then
/// the positive from the anchor's tracklet. Draws are with replacement; returns
/// empty when no shot is eligible.
std::vector<Triplet> sample_triplets(const std::vector<Tracklet>& tracklets,
                                     const io::ProposalFile& proposals, int n,
                                     std::uint64_t seed);

/// max(0, d(a,p) - d(a,n) + margin) with squared Euclidean d.
double triplet_loss(std::span<const double> anchor, std::span<const double> positive,
                    std::span<const double> negative, double margin);

/// Mean triplet loss of a batch through the head, and its gradient with respect
/// to the head entries (accumulated into grad, which must be zero-initialized
/// with rows*cols entries). Exposed for gradient checking.
double batch_loss_and_gradient(const ProjectionHead& head, const EmbeddingSet& emb,
                               std::span<const Triplet> batch, double margin,
                               std::vector<double>& grad);

struct RefineResult {
    EmbeddingSet refined;
    ProjectionHead head;
    std::vector<double> epoch_loss;
};

/// Trains the projection head with decoupled-weight-decay Adam on the triplet
/// margin loss and projects every embedding. Deterministic given rng_seed.
RefineResult refine(const EmbeddingSet& base, const std::vector<Triplet>& triplets,
                    const RefineConfig& config);

} // namespace cast::selfsup
