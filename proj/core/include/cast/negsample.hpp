#pragma once

#include <cstdint>
#include <vector>

#include "cast/types.hpp"

namespace cast::negsample {

struct MinSize {
    double min_width = 0.0;
    double min_height = 0.0;
    double min_area = 0.0;

    /// Width AND height AND area must all meet their minimum.
    bool admits(const BoundingBox& r) const {
        return r.w >= min_width && r.h >= min_height && r.area() >= min_area;
    }
};

/// Recursion instrumentation: one call and boxes+1 units of work per invocation.
struct LerStats {
    std::size_t calls = 0;
    std::size_t work = 0;
};

/// Merges overlapping boxes into their bounding unions until all are disjoint,
/// and clips them to the frame. Boxes fully outside the frame are dropped.
std::vector<BoundingBox> consolidate(std::vector<BoundingBox> boxes, const BoundingBox& frame);

/// Recursive empty-rectangle extraction. Every returned rectangle is inside the
/// frame, intersects no box interior, and satisfies min_size. The boxes must be
/// disjoint and clipped (see consolidate); stats may be null.
std::vector<BoundingBox> ler(const BoundingBox& frame, const std::vector<BoundingBox>& boxes,
                             const MinSize& min_size, LerStats* stats = nullptr);

/// Convenience wrapper: consolidates, then extracts.
std::vector<BoundingBox> empty_rectangles(const BoundingBox& frame,
                                          const std::vector<BoundingBox>& boxes,
                                          const MinSize& min_size, LerStats* stats = nullptr);

struct ProbeResult {
    int box_count = 0;
    std::size_t calls = 0;
    std::size_t work = 0;
    std::size_t rectangles = 0;
};

/// Runs the extraction on a randomized layout of n boxes and reports the
/// instrumented work, for checking the quadratic recursion bound.
ProbeResult complexity_probe(int n, std::uint64_t seed);

} // namespace cast::negsample
