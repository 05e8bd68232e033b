#pragma once

#include <map>
#include <string>
#include <vector>

#include "cast/types.hpp"

namespace cast::metrics {

/// Class-by-cluster count table.
struct Contingency {
    std::vector<std::string> class_names;
    std::vector<std::string> cluster_names;
    std::vector<std::vector<long long>> counts; // counts[class][cluster]
    long long total = 0;

    /// Builds the table from per-item (class, cluster) assignments. Items whose
    /// id is missing from either map are skipped.
    static Contingency from_assignments(const std::map<std::string, std::string>& item_class,
                                        const std::map<std::string, std::string>& item_cluster);

    static Contingency from_clusterset(const ClusterSet& clusters,
                                       const std::map<std::string, std::string>& item_class);
};

/// Cluster purity: sum over clusters of the majority class count, over total.
double purity(const Contingency& table);

/// Class purity: sum over classes of the majority cluster count, over total.
double class_purity(const Contingency& table);

/// Geometric mean of cluster purity and class purity.
double k_metric(const Contingency& table);

/// Mutual information normalized by the geometric mean of the two entropies.
/// Zero when exactly one side is constant; 1 when both are (identical partitions).
double nmi(const Contingency& table);

struct ClustersPerCharacter {
    double median = 0.0;
    double mean = 0.0;
    std::map<std::string, int> per_character;
};

/// For each ground-truth character, the number of clusters in which it is the
/// majority label. `background_label` marks non-character ground truth.
ClustersPerCharacter clusters_per_character(const ClusterSet& clusters,
                                            const std::map<std::string, std::string>& truth,
                                            const std::string& background_label);

} // namespace cast::metrics
