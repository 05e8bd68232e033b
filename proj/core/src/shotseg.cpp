#include "cast/shotseg.hpp"

#include <cmath>
#include <cstdio>

#include "cast/error.hpp"
#include "cast/io.hpp"

namespace cast::shotseg {

ShotList ingest_shots(const std::string& path) { return io::load_shots(path); }

double histogram_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw integrity_error("histogram dimensions differ");
    double ma = 0.0, mb = 0.0;
    for (double x : a) ma += std::abs(x);
    for (double x : b) mb += std::abs(x);
    if (ma == 0.0 || mb == 0.0) throw integrity_error("histogram has zero mass");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] / ma - b[i] / mb);
    return 0.5 * d; // in [0, 1]
}

ShotList naive_segment(const std::vector<std::vector<double>>& histograms, double threshold,
                       const std::string& video_id, double sample_fps) {
    if (histograms.empty()) throw integrity_error("empty histogram sequence");

    ShotList list;
    list.video_id = video_id;
    list.last_frame = static_cast<int>(histograms.size()) - 1;
    list.sample_fps = sample_fps;

    std::vector<int> boundaries{0};
    for (std::size_t i = 1; i < histograms.size(); ++i)
        if (histogram_distance(histograms[i - 1], histograms[i]) > threshold)
            boundaries.push_back(static_cast<int>(i));
    boundaries.push_back(static_cast<int>(histograms.size()));

    for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
        Shot s;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "s%04zu", i);
        s.shot_id = buf;
        s.start_frame = boundaries[i];
        s.end_frame = boundaries[i + 1] - 1;
        s.sample_fps = sample_fps;
        list.shots.push_back(std::move(s));
    }
    list.validate();
    return list;
}

} // namespace cast::shotseg
