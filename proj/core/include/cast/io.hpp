#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cast/types.hpp"

namespace cast::io {

/// Screening thresholds applied while loading proposals.
struct IngestConfig {
    double min_confidence = 0.20;
    double min_area_fraction = 0.025;
};

/// A proposals file: the header geometry plus the surviving records in input order.
struct ProposalFile {
    std::string video_id;
    FrameGeometry geometry;
    double sample_fps = 0.0;
    std::vector<Proposal> proposals;

    const Proposal* find(const std::string& proposal_id) const {
        for (const auto& p : proposals)
            if (p.proposal_id == proposal_id) return &p;
        return nullptr;
    }

    std::map<std::string, const Proposal*> index() const {
        std::map<std::string, const Proposal*> m;
        for (const auto& p : proposals) m.emplace(p.proposal_id, &p);
        return m;
    }
};

struct TrackletFile {
    std::string video_id;
    std::vector<Tracklet> tracklets;
};

struct FrameRect {
    int frame_index = 0;
    BoundingBox box;
};

struct DenseLabel {
    int frame_index = 0;
    std::string proposal_id;
    BoundingBox box;
    double score = 0.0;
    std::string name;
};

struct DenseLabelFile {
    std::string video_id;
    int frame_count = 0;
    std::vector<DenseLabel> labels;
};

struct MatrixFile {
    int rows = 0;
    int cols = 0;
    std::vector<double> values; // row-major
};

// Canonical number formatting: decimal, 9 significant digits, locale-free.
std::string format_real(double v);
double parse_real(const std::string& token);
long long parse_integer(const std::string& token);

std::string quote(const std::string& s);

// -- proposals ---------------------------------------------------------------
ProposalFile load_proposals(const std::string& path, const IngestConfig& config = {});
void save_proposals(const std::string& path, const ProposalFile& file);

// -- shots -------------------------------------------------------------------
ShotList load_shots(const std::string& path);
void save_shots(const std::string& path, const ShotList& shots);

// -- embeddings --------------------------------------------------------------
EmbeddingSet load_embeddings(const std::string& path);
void save_embeddings(const std::string& path, const EmbeddingSet& set);

// -- tracklets ---------------------------------------------------------------
// With a proposal context the loader also checks shot membership, strict frame
// ordering, and (when skip_window > 0) the skip-connection gap bound.
TrackletFile load_tracklets(const std::string& path, const ProposalFile* context = nullptr,
                            int skip_window = 0);
void save_tracklets(const std::string& path, const TrackletFile& file);

// -- triplets ----------------------------------------------------------------
struct TripletContext {
    const ProposalFile* proposals = nullptr;
    const std::vector<Tracklet>* tracklets = nullptr;
};
std::vector<Triplet> load_triplets(const std::string& path, const TripletContext& context = {});
void save_triplets(const std::string& path, const std::vector<Triplet>& triplets);

// -- clusters ----------------------------------------------------------------
// With a proposal context the loader checks that clusters plus noise partition
// exactly the given proposal id set.
ClusterSet load_clusters(const std::string& path,
                         const std::vector<std::string>* partition_over = nullptr);
void save_clusters(const std::string& path, const ClusterSet& set);

// -- dictionary --------------------------------------------------------------
std::vector<DictionaryEntry> load_dictionary(const std::string& path,
                                             const ClusterSet* context = nullptr);
void save_dictionary(const std::string& path, const std::vector<DictionaryEntry>& entries);

// -- ground-truth / predicted labels ------------------------------------------
std::map<std::string, std::string> load_labels(const std::string& path);
void save_labels(const std::string& path, const std::map<std::string, std::string>& labels);

// -- misc stage files ----------------------------------------------------------
MatrixFile load_matrix(const std::string& path);
void save_matrix(const std::string& path, const MatrixFile& m);

std::vector<double> load_loss_curve(const std::string& path);
void save_loss_curve(const std::string& path, const std::vector<double>& per_epoch_loss);

std::vector<FrameRect> load_rects(const std::string& path);
void save_rects(const std::string& path, const std::vector<FrameRect>& rects);

DenseLabelFile load_dense_labels(const std::string& path);
void save_dense_labels(const std::string& path, const DenseLabelFile& file);

std::vector<std::vector<double>> load_histograms(const std::string& path);
void save_histograms(const std::string& path, const std::vector<std::vector<double>>& rows);

std::map<std::string, std::string> load_groups(const std::string& path);
void save_groups(const std::string& path, const std::map<std::string, std::string>& groups);

} // namespace cast::io
