#pragma once

#include <string>
#include <vector>

#include "cast/types.hpp"

namespace cast::shotseg {

/// Reads externally produced shot boundaries and validates contiguity/coverage.
ShotList ingest_shots(const std::string& path);

/// Fallback segmentation: cut wherever the normalized L1 distance between
/// consecutive per-frame histograms exceeds the threshold. Stand-in for an
/// external segmenter, not a reimplementation of one.
ShotList naive_segment(const std::vector<std::vector<double>>& histograms, double threshold,
                       const std::string& video_id = "video", double sample_fps = 1.0);

/// Normalized L1 distance between two histograms (each scaled to unit mass first).
double histogram_distance(const std::vector<double>& a, const std::vector<double>& b);

} // namespace cast::shotseg
