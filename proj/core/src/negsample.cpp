#include "cast/negsample.hpp"

#include <algorithm>
#include <cmath>

#include "cast/rng.hpp"

namespace cast::negsample {

namespace {

BoundingBox clip(const BoundingBox& b, const BoundingBox& frame) {
    double x1 = std::max(b.x, frame.x);
    double y1 = std::max(b.y, frame.y);
    double x2 = std::min(b.right(), frame.right());
    double y2 = std::min(b.bottom(), frame.bottom());
    return {x1, y1, x2 - x1, y2 - y1};
}

BoundingBox bounding_union(const BoundingBox& a, const BoundingBox& b) {
    double x1 = std::min(a.x, b.x);
    double y1 = std::min(a.y, b.y);
    double x2 = std::max(a.right(), b.right());
    double y2 = std::max(a.bottom(), b.bottom());
    return {x1, y1, x2 - x1, y2 - y1};
}

/// The box whose center is nearest the frame center; ties keep the first.
std::size_t centered_box(const BoundingBox& frame, const std::vector<BoundingBox>& boxes) {
    double cx = frame.center_x(), cy = frame.center_y();
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        double dx = boxes[i].center_x() - cx, dy = boxes[i].center_y() - cy;
        double d = dx * dx + dy * dy;
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

} // namespace

std::vector<BoundingBox> consolidate(std::vector<BoundingBox> boxes, const BoundingBox& frame) {
    std::vector<BoundingBox> clipped;
    for (const auto& b : boxes) {
        BoundingBox c = clip(b, frame);
        if (c.valid()) clipped.push_back(c);
    }
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i < clipped.size() && !merged; ++i) {
            for (std::size_t j = i + 1; j < clipped.size(); ++j) {
                if (BoundingBox::interiors_intersect(clipped[i], clipped[j])) {
                    clipped[i] = bounding_union(clipped[i], clipped[j]);
                    clipped.erase(clipped.begin() + static_cast<std::ptrdiff_t>(j));
                    merged = true;
                    break;
                }
            }
        }
    }
    return clipped;
}

std::vector<BoundingBox> ler(const BoundingBox& frame, const std::vector<BoundingBox>& boxes,
                             const MinSize& min_size, LerStats* stats) {
    if (stats) {
        ++stats->calls;
        stats->work += boxes.size() + 1;
    }
    if (!min_size.admits(frame)) return {};
    if (boxes.empty()) return {frame};

    const BoundingBox& center = boxes[centered_box(frame, boxes)];

    // Maximal sub-rectangles strictly above / below / left / right of the splitter.
    BoundingBox subframes[4] = {
        {frame.x, frame.y, frame.w, center.y - frame.y},
        {frame.x, center.bottom(), frame.w, frame.bottom() - center.bottom()},
        {frame.x, frame.y, center.x - frame.x, frame.h},
        {center.right(), frame.y, frame.right() - center.right(), frame.h},
    };

    std::vector<BoundingBox> out;
    for (const auto& sub : subframes) {
        if (!sub.valid()) continue;
        std::vector<BoundingBox> remaining;
        for (const auto& b : boxes) {
            if (!BoundingBox::interiors_intersect(b, sub)) continue;
            remaining.push_back(clip(b, sub));
        }
        auto rects = ler(sub, remaining, min_size, stats);
        out.insert(out.end(), rects.begin(), rects.end());
    }
    return out;
}

std::vector<BoundingBox> empty_rectangles(const BoundingBox& frame,
                                          const std::vector<BoundingBox>& boxes,
                                          const MinSize& min_size, LerStats* stats) {
    return ler(frame, consolidate(boxes, frame), min_size, stats);
}

ProbeResult complexity_probe(int n, std::uint64_t seed) {
    Rng rng(seed);
    BoundingBox frame{0.0, 0.0, 1920.0, 1080.0};
    std::vector<BoundingBox> boxes;
    boxes.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double w = rng.uniform(20.0, 140.0);
        double h = rng.uniform(20.0, 140.0);
        boxes.push_back({rng.uniform(0.0, frame.w - w), rng.uniform(0.0, frame.h - h), w, h});
    }
    MinSize min_size{32.0, 32.0, 32.0 * 32.0};
    LerStats stats;
    auto rects = empty_rectangles(frame, boxes, min_size, &stats);
    return {n, stats.calls, stats.work, rects.size()};
}

} // namespace cast::negsample
