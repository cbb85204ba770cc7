#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "texfrac/height_field.hpp"

namespace texfrac {

/// How many sphere centers to draw and with what seed. Centers are drawn
/// uniformly without replacement, so n_centers == |S| is an exhaustive pass.
struct SamplingPlan {
    std::size_t n_centers = 0;   // used when fraction == 0
    double fraction = 0.0;       // in (0,1]; when set, n = ceil(fraction * |S|)
    std::uint64_t seed = 0;

    static SamplingPlan by_count(std::size_t n, std::uint64_t seed) {
        return SamplingPlan{n, 0.0, seed};
    }
    static SamplingPlan by_fraction(double f, std::uint64_t seed) {
        return SamplingPlan{0, f, seed};
    }

    /// Number of centers for a field of `total` points. Throws if the
    /// plan asks for more centers than there are points, or for none.
    std::size_t resolve(std::size_t total) const;
};

/// Mean occupied volume per radius-grid entry.
struct VolumeCurve {
    RadiiGrid grid;
    std::vector<double> v;  // one mean per grid entry, non-decreasing
    std::size_t n_centers = 0;
    std::uint64_t seed = 0;
};

/// log r x log V(r), natural logs, ordered by lr ascending.
struct LogLogCurve {
    std::vector<double> lr;
    std::vector<double> lv;

    std::size_t size() const { return lr.size(); }
};

/// Draw `plan` centers as pixel indices, uniformly without replacement.
/// Deterministic for a fixed (seed, width, height, n_centers): a partial
/// Fisher-Yates shuffle driven by mt19937_64 with rejection-sampled bounded
/// draws, independent of pixel values.
std::vector<std::uint32_t> sample_centers(const HeightField& field, const SamplingPlan& plan);

/// Cumulative point counts around one center: entry j is the number of
/// lattice points s with |s - s_center|^2 <= grid.sq_dists[j], the center
/// itself included. Scans the (2 r_max + 1)^2 pixel window and histograms
/// squared distances dx^2 + dy^2 + (z_scale * dz)^2.
std::vector<std::uint32_t> count_within(const HeightField& field, std::uint32_t center,
                                        const RadiiGrid& grid, int z_scale = 1);

/// V(r): arithmetic mean of count_within over the sampled centers.
/// Counts are accumulated as exact integer sums, so the result is
/// independent of processing order and thread count.
VolumeCurve volume_curve(const HeightField& field, const SamplingPlan& plan,
                         const RadiiGrid& grid, int z_scale = 1, int threads = 0);

/// (1/2 ln sq_dist, ln v) per grid entry; ln r comes straight from the
/// squared distance so no sqrt/log round-trip is involved.
LogLogCurve log_log(const VolumeCurve& curve);

/// CSV with header `sq_dist,r,V` plus a JSON sidecar
/// `{n_centers, seed, r_max, width, height}` at `csv_path` + ".json".
void write_volume_csv(const VolumeCurve& curve, const HeightField& field,
                      const std::filesystem::path& csv_path);

}  // namespace texfrac
