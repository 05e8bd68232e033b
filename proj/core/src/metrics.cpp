#include "cast/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cast/linalg.hpp"

namespace cast::metrics {

namespace {

void require_nonempty(const Contingency& t) {
    if (t.total <= 0) throw integrity_error("empty contingency table");
}

std::size_t name_index(std::vector<std::string>& names, std::map<std::string, std::size_t>& idx,
                       const std::string& name) {
    auto it = idx.find(name);
    if (it != idx.end()) return it->second;
    idx.emplace(name, names.size());
    names.push_back(name);
    return names.size() - 1;
}

} // namespace

Contingency Contingency::from_assignments(const std::map<std::string, std::string>& item_class,
                                          const std::map<std::string, std::string>& item_cluster) {
    Contingency t;
    std::map<std::string, std::size_t> class_idx, cluster_idx;
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (const auto& [item, cls] : item_class) {
        auto it = item_cluster.find(item);
        if (it == item_cluster.end()) continue;
        cells.emplace_back(name_index(t.class_names, class_idx, cls),
                           name_index(t.cluster_names, cluster_idx, it->second));
    }
    t.counts.assign(t.class_names.size(),
                    std::vector<long long>(t.cluster_names.size(), 0));
    for (auto [r, c] : cells) {
        ++t.counts[r][c];
        ++t.total;
    }
    return t;
}

Contingency Contingency::from_clusterset(const ClusterSet& clusters,
                                         const std::map<std::string, std::string>& item_class) {
    std::map<std::string, std::string> item_cluster;
    for (const auto& c : clusters.clusters)
        for (const auto& m : c.members) item_cluster[m] = c.cluster_id;
    return from_assignments(item_class, item_cluster);
}

double purity(const Contingency& t) {
    require_nonempty(t);
    long long sum = 0;
    for (std::size_t c = 0; c < t.cluster_names.size(); ++c) {
        long long best = 0;
        for (std::size_t r = 0; r < t.class_names.size(); ++r)
            best = std::max(best, t.counts[r][c]);
        sum += best;
    }
    return static_cast<double>(sum) / static_cast<double>(t.total);
}

double class_purity(const Contingency& t) {
    require_nonempty(t);
    long long sum = 0;
    for (std::size_t r = 0; r < t.class_names.size(); ++r)
        sum += *std::max_element(t.counts[r].begin(), t.counts[r].end());
    return static_cast<double>(sum) / static_cast<double>(t.total);
}

double k_metric(const Contingency& t) { return std::sqrt(purity(t) * class_purity(t)); }

double nmi(const Contingency& t) {
    require_nonempty(t);
    double n = static_cast<double>(t.total);

    std::vector<double> row(t.class_names.size(), 0.0), col(t.cluster_names.size(), 0.0);
    for (std::size_t r = 0; r < row.size(); ++r)
        for (std::size_t c = 0; c < col.size(); ++c) {
            row[r] += static_cast<double>(t.counts[r][c]);
            col[c] += static_cast<double>(t.counts[r][c]);
        }

    double h_class = 0.0, h_cluster = 0.0;
    for (double x : row)
        if (x > 0.0) h_class -= (x / n) * std::log(x / n);
    for (double x : col)
        if (x > 0.0) h_cluster -= (x / n) * std::log(x / n);

    if (h_class == 0.0 && h_cluster == 0.0) return 1.0; // both constant: identical partitions
    if (h_class == 0.0 || h_cluster == 0.0) return 0.0;

    double mi = 0.0;
    for (std::size_t r = 0; r < row.size(); ++r)
        for (std::size_t c = 0; c < col.size(); ++c) {
            double joint = static_cast<double>(t.counts[r][c]);
            if (joint > 0.0) mi += (joint / n) * std::log(joint * n / (row[r] * col[c]));
        }
    return mi / std::sqrt(h_class * h_cluster);
}

ClustersPerCharacter clusters_per_character(const ClusterSet& clusters,
                                            const std::map<std::string, std::string>& truth,
                                            const std::string& background_label) {
    ClustersPerCharacter out;
    for (const auto& [pid, label] : truth) {
        (void)pid;
        if (label != background_label) out.per_character.emplace(label, 0);
    }
    if (out.per_character.empty()) throw integrity_error("ground truth has no characters");

    for (const auto& c : clusters.clusters) {
        std::map<std::string, int> votes;
        for (const auto& m : c.members) {
            auto it = truth.find(m);
            if (it != truth.end()) ++votes[it->second];
        }
        if (votes.empty()) continue;
        // majority label; ties resolved toward the lexicographically smallest
        auto best = votes.begin();
        for (auto it = votes.begin(); it != votes.end(); ++it)
            if (it->second > best->second) best = it;
        if (best->first == background_label) continue;
        auto ch = out.per_character.find(best->first);
        if (ch != out.per_character.end()) ++ch->second;
    }

    std::vector<double> counts;
    double sum = 0.0;
    for (const auto& [name, k] : out.per_character) {
        (void)name;
        counts.push_back(static_cast<double>(k));
        sum += static_cast<double>(k);
    }
    out.median = median_of(counts);
    out.mean = sum / static_cast<double>(counts.size());
    return out;
}

} // namespace cast::metrics
