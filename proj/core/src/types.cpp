#include "cast/types.hpp"

#include <cmath>
#include <set>

namespace cast {

void ShotList::validate() const {
    if (shots.empty()) throw integrity_error("shot list is empty");
    if (shots.front().start_frame != 0)
        throw integrity_error("shots do not start at frame 0");
    int expected = 0;
    std::set<std::string> ids;
    for (const auto& s : shots) {
        if (!ids.insert(s.shot_id).second)
            throw integrity_error("duplicate shot id '" + s.shot_id + "'");
        if (s.start_frame != expected) {
            if (s.start_frame > expected)
                throw integrity_error("gap before shot '" + s.shot_id + "'");
            throw integrity_error("overlap at shot '" + s.shot_id + "'");
        }
        if (s.end_frame < s.start_frame)
            throw integrity_error("shot '" + s.shot_id + "' has negative length");
        expected = s.end_frame + 1;
    }
    if (expected != last_frame + 1)
        throw integrity_error("shots do not cover [0, last_frame]");
}

std::string to_string(SpaceTag tag) {
    return tag == SpaceTag::base ? "base" : "refined";
}

SpaceTag space_tag_from_string(const std::string& s) {
    if (s == "base") return SpaceTag::base;
    if (s == "refined") return SpaceTag::refined;
    throw integrity_error("unknown embedding space tag '" + s + "'");
}

void EmbeddingSet::insert(const std::string& proposal_id, std::vector<double> v) {
    detail::check_identifier(proposal_id, "proposal id");
    if (static_cast<int>(v.size()) != dimension)
        throw integrity_error("embedding for '" + proposal_id + "' has dimension " +
                              std::to_string(v.size()) + ", expected " + std::to_string(dimension));
    for (double x : v)
        if (!std::isfinite(x))
            throw integrity_error("embedding for '" + proposal_id + "' has non-finite components");
    if (!entries.emplace(proposal_id, std::move(v)).second)
        throw integrity_error("duplicate embedding for proposal '" + proposal_id + "'");
}

void ClusterSet::validate() const {
    std::set<std::string> seen;
    std::set<std::string> cluster_ids;
    for (const auto& c : clusters) {
        if (!cluster_ids.insert(c.cluster_id).second)
            throw integrity_error("duplicate cluster id '" + c.cluster_id + "'");
        if (c.members.empty())
            throw integrity_error("cluster '" + c.cluster_id + "' has no members");
        if (!c.scores.empty() && c.scores.size() != c.members.size())
            throw integrity_error("cluster '" + c.cluster_id + "' score/member arity mismatch");
        bool medoid_found = false;
        for (const auto& m : c.members) {
            if (!seen.insert(m).second)
                throw integrity_error("proposal '" + m + "' appears in two clusters");
            if (m == c.medoid) medoid_found = true;
        }
        if (!medoid_found)
            throw integrity_error("medoid '" + c.medoid + "' is not a member of cluster '" +
                                  c.cluster_id + "'");
    }
    for (const auto& n : noise)
        if (!seen.insert(n).second)
            throw integrity_error("proposal '" + n + "' is both clustered and noise");
}

} // namespace cast
