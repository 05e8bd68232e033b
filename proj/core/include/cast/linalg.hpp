#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "cast/error.hpp"

namespace cast {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

/// Cosine similarity; 0 when either vector is zero.
inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    double na = norm(a), nb = norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(a, b) / (na * nb);
}

inline std::vector<double> normalized(std::span<const double> a) {
    std::vector<double> v(a.begin(), a.end());
    double n = norm(a);
    if (n > 0.0)
        for (auto& x : v) x /= n;
    return v;
}

inline std::vector<double> mean_vector(const std::vector<std::vector<double>>& vs) {
    if (vs.empty()) throw integrity_error("mean of empty vector set");
    std::vector<double> m(vs.front().size(), 0.0);
    for (const auto& v : vs)
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += v[i];
    for (auto& x : m) x /= static_cast<double>(vs.size());
    return m;
}

/// Coordinate-wise median; even counts average the two central order statistics.
inline std::vector<double> coordinate_median(const std::vector<std::vector<double>>& vs) {
    if (vs.empty()) throw integrity_error("median of empty vector set");
    std::size_t dim = vs.front().size();
    std::vector<double> med(dim, 0.0);
    std::vector<double> col(vs.size());
    for (std::size_t d = 0; d < dim; ++d) {
        for (std::size_t i = 0; i < vs.size(); ++i) col[i] = vs[i][d];
        std::sort(col.begin(), col.end());
        std::size_t n = col.size();
        med[d] = (n % 2 == 1) ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
    }
    return med;
}

/// Linear-interpolation quantile over sorted data at position p*(n-1).
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw integrity_error("quantile of empty data");
    if (sorted.size() == 1) return sorted.front();
    double pos = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    if (lo >= sorted.size() - 1) return sorted.back();
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double median_of(std::vector<double> values) {
    if (values.empty()) throw integrity_error("median of empty data");
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    return (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace cast
