#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cast/error.hpp"

namespace cast {

/// Axis-aligned box in pixel coordinates, (x, y) is the top-left corner.
struct BoundingBox {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    double area() const { return w * h; }
    double right() const { return x + w; }
    double bottom() const { return y + h; }
    double center_x() const { return x + 0.5 * w; }
    double center_y() const { return y + 0.5 * h; }

    bool valid() const { return w > 0.0 && h > 0.0; }

    /// True when the interiors of the two boxes intersect.
    static bool interiors_intersect(const BoundingBox& a, const BoundingBox& b) {
        return a.x < b.right() && b.x < a.right() && a.y < b.bottom() && b.y < a.bottom();
    }

    static double intersection_area(const BoundingBox& a, const BoundingBox& b) {
        double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
        double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
        if (iw <= 0.0 || ih <= 0.0) return 0.0;
        return iw * ih;
    }

    static double iou(const BoundingBox& a, const BoundingBox& b) {
        double inter = intersection_area(a, b);
        double uni = a.area() + b.area() - inter;
        return uni > 0.0 ? inter / uni : 0.0;
    }
};

/// Frame extents shared by every proposal of a video.
struct FrameGeometry {
    double width = 0.0;
    double height = 0.0;

    double area() const { return width * height; }
    double diagonal() const { return std::hypot(width, height); }
};

/// One detected character box on one frame.
struct Proposal {
    std::string proposal_id;
    std::string video_id;
    std::string shot_id;
    int frame_index = 0;
    BoundingBox box;
    double confidence = 0.0;
};

struct Shot {
    std::string shot_id;
    int start_frame = 0;
    int end_frame = 0; // inclusive
    double sample_fps = 0.0;

    int length() const { return end_frame - start_frame + 1; }
    bool contains(int frame) const { return frame >= start_frame && frame <= end_frame; }
};

/// Contiguous, non-overlapping shots covering [0, last_frame].
struct ShotList {
    std::string video_id;
    int last_frame = 0;
    double sample_fps = 0.0;
    std::vector<Shot> shots;

    /// Throws integrity_error on gap, overlap, or incomplete coverage.
    void validate() const;

    const Shot* find(const std::string& shot_id) const {
        for (const auto& s : shots)
            if (s.shot_id == shot_id) return &s;
        return nullptr;
    }
};

enum class SpaceTag { base, refined };

std::string to_string(SpaceTag tag);
SpaceTag space_tag_from_string(const std::string& s);

/// Vectors keyed by proposal id, all of the same dimension, all finite.
struct EmbeddingSet {
    int dimension = 0;
    SpaceTag space_tag = SpaceTag::base;
    std::map<std::string, std::vector<double>> entries;

    bool has(const std::string& proposal_id) const { return entries.count(proposal_id) > 0; }

    const std::vector<double>& at(const std::string& proposal_id) const {
        auto it = entries.find(proposal_id);
        if (it == entries.end())
            throw integrity_error("no embedding for proposal '" + proposal_id + "'");
        return it->second;
    }

    /// Throws integrity_error if the vector has the wrong length or non-finite values.
    void insert(const std::string& proposal_id, std::vector<double> v);
};

/// Per-shot proposal sequence hypothesized to be one character.
struct Tracklet {
    std::string tracklet_id;
    std::string shot_id;
    std::vector<std::string> proposal_ids; // strictly increasing frame order
    double significance = 0.0;             // in [0, 1]
};

struct Triplet {
    std::string anchor;
    std::string positive;
    std::string negative;
};

struct Cluster {
    std::string cluster_id;
    std::vector<std::string> members;
    std::string medoid;
    std::vector<double> scores; // one per member, same order
};

/// Partition of the clustered proposals into clusters plus a noise set.
struct ClusterSet {
    std::vector<Cluster> clusters;
    std::vector<std::string> noise;

    std::size_t member_count() const {
        std::size_t n = noise.size();
        for (const auto& c : clusters) n += c.members.size();
        return n;
    }

    /// Disjointness of clusters and noise; medoid membership; score arity.
    void validate() const;
};

struct DictionaryEntry {
    std::string entry_id;
    std::string cluster_id;
    std::string representative;
    std::string name; // empty = unnamed
    bool discarded = false;
};

namespace detail {
/// Identifiers are opaque but must survive whitespace-delimited serialization.
inline void check_identifier(const std::string& id, const char* what) {
    if (id.empty()) throw integrity_error(std::string(what) + " is empty");
    for (char c : id)
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '"')
            throw integrity_error(std::string(what) + " '" + id + "' contains whitespace or quotes");
}
} // namespace detail

} // namespace cast
