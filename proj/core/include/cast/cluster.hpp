#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "cast/types.hpp"

namespace cast::cluster {

struct ClusterConfig {
    double lambda1 = 0.275;
    double lambda2 = 0.4;
    double merge_similarity = 0.7;
    int k_min = 25;
    int k_max = 60;
    int min_points = 5;
    double eps_lo = 0.05;
    double eps_hi = 1.5;

    void validate() const;
};

/// Points carried through clustering: id + vector, kept sorted by id.
struct PointSet {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> vectors;

    static PointSet from_embeddings(const EmbeddingSet& emb, bool l2_normalize);
    std::size_t size() const { return ids.size(); }
};

/// Density clustering with Euclidean distance. Neighborhoods include the point
/// itself; neighbor expansion follows ascending proposal id, which fixes the
/// border-point assignment. Cluster ids are c0000... in creation order.
ClusterSet dbscan(const PointSet& points, double eps, int min_points);

/// Mean over clustered points of (b-a)/max(a,b); noise (label < 0) excluded,
/// singleton clusters contribute 0. Throws when fewer than 2 clusters exist.
double silhouette(const std::vector<std::vector<double>>& points, const std::vector<int>& labels);

double silhouette(const PointSet& points, const ClusterSet& clusters);

struct EpsSearchResult {
    double eps = 0.0;
    ClusterSet clusters;
    bool fallback_warning = false;
    double objective = 0.0; // silhouette * non-noise count at eps
};

/// Two stages: bisection on the cluster count into [k_min, k_max] (at most 30
/// iterations; an all-noise clustering counts as over-segmented), then a
/// 16-point grid over the admissible bracket maximizing
/// J(eps) = silhouette * (number of non-noise points), ties to the smaller eps.
/// When no grid epsilon yields >= 2 clusters the eps_hi result is returned with
/// fallback_warning set.
EpsSearchResult search_epsilon(const PointSet& points, const ClusterConfig& config);

/// conf * exp(-d(x,mu)^2 / lambda1^2).
double confidence_score(double detection_confidence, std::span<const double> x,
                        std::span<const double> mu, double lambda1);

struct OutlierSplit {
    std::vector<std::size_t> retained;
    std::vector<std::size_t> ejected;
    double threshold = 0.0;
};

/// Ejects members whose score is strictly below Q25 - lambda2 * IQR
/// (linear-interpolation quantiles).
OutlierSplit filter_outliers(const std::vector<double>& scores, double lambda2);

/// Merges clusters whose mean centers reach the cosine similarity threshold,
/// transitively via connected components, repeated until a fixpoint so the
/// operation is idempotent. Medoids are recomputed against the member median.
ClusterSet merge_clusters(const ClusterSet& set, const PointSet& points,
                          double merge_similarity);

struct PipelineResult {
    ClusterSet clusters;
    double eps = 0.0;
    bool fallback_warning = false;
};

/// search_epsilon -> per-member confidence scores -> member outlier ejection ->
/// low-confidence cluster removal (same quantile rule over cluster mean scores)
/// -> merge. Ejected members land in noise.
PipelineResult cluster_pipeline(const PointSet& points,
                                const std::map<std::string, double>& detection_confidence,
                                const ClusterConfig& config);

} // namespace cast::cluster
