#include "texfrac/volume_curve.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "texfrac/detail/io_util.hpp"
#include "texfrac/detail/parallel.hpp"
#include "texfrac/detail/rng.hpp"

namespace texfrac {

std::size_t SamplingPlan::resolve(std::size_t total) const {
    std::size_t n = n_centers;
    if (fraction != 0.0) {
        if (fraction <= 0.0 || fraction > 1.0)
            throw std::invalid_argument("sampling fraction must lie in (0, 1]");
        n = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(total)));
    }
    if (n < 1) throw std::invalid_argument("sampling plan requests no centers");
    if (n > total) throw std::invalid_argument("sampling plan requests more centers than points");
    return n;
}

std::vector<std::uint32_t> sample_centers(const HeightField& field, const SamplingPlan& plan) {
    const std::size_t total = field.point_count();
    const std::size_t n = plan.resolve(total);

    std::vector<std::uint32_t> indices(total);
    std::iota(indices.begin(), indices.end(), 0u);

    // Partial Fisher-Yates: after i swaps the first i entries are a uniform
    // sample without replacement.
    std::mt19937_64 rng(plan.seed);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + detail::uniform_below(rng, total - i);
        std::swap(indices[i], indices[j]);
    }
    indices.resize(n);
    return indices;
}

std::vector<std::uint32_t> count_within(const HeightField& field, std::uint32_t center,
                                        const RadiiGrid& grid, int z_scale) {
    if (center >= field.point_count()) throw std::out_of_range("center index out of range");
    if (z_scale < 1) throw std::invalid_argument("z_scale must be a positive integer");

    const int r_max = grid.r_max;
    const int limit = r_max * r_max;
    const int cx = static_cast<int>(center % field.width);
    const int cy = static_cast<int>(center / field.width);
    const int cz = field.z[center];

    // Histogram of squared distances; index 0 is the center itself.
    std::vector<std::uint32_t> hist(static_cast<std::size_t>(limit) + 1, 0);
    const int x0 = std::max(0, cx - r_max), x1 = std::min(field.width - 1, cx + r_max);
    const int y0 = std::max(0, cy - r_max), y1 = std::min(field.height - 1, cy + r_max);
    for (int y = y0; y <= y1; ++y) {
        const int dy2 = (y - cy) * (y - cy);
        const std::uint8_t* row = &field.z[static_cast<std::size_t>(y) * field.width];
        for (int x = x0; x <= x1; ++x) {
            const int dz = z_scale * (static_cast<int>(row[x]) - cz);
            const int d2 = (x - cx) * (x - cx) + dy2 + dz * dz;
            if (d2 <= limit) ++hist[d2];
        }
    }

    // Prefix-sum the histogram onto the grid entries.
    std::vector<std::uint32_t> counts(grid.size());
    std::uint32_t cum = 0;
    int n = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        for (; n <= grid.sq_dists[j]; ++n) cum += hist[n];
        counts[j] = cum;
    }
    return counts;
}

VolumeCurve volume_curve(const HeightField& field, const SamplingPlan& plan,
                         const RadiiGrid& grid, int z_scale, int threads) {
    const auto centers = sample_centers(field, plan);
    const std::size_t bins = grid.size();

    // Exact integer sums per grid entry; addition commutes, so the split
    // across threads cannot change the result.
    const int nt = detail::resolve_threads(threads);
    std::vector<std::vector<std::int64_t>> partial(nt, std::vector<std::int64_t>(bins, 0));
    detail::parallel_for(centers.size(), nt, [&](int worker, std::size_t begin, std::size_t end) {
        auto& sums = partial[worker];
        for (std::size_t i = begin; i < end; ++i) {
            const auto counts = count_within(field, centers[i], grid, z_scale);
            for (std::size_t j = 0; j < bins; ++j) sums[j] += counts[j];
        }
    });

    std::vector<std::int64_t> sums(bins, 0);
    for (const auto& p : partial)
        for (std::size_t j = 0; j < bins; ++j) sums[j] += p[j];

    VolumeCurve out;
    out.grid = grid;
    out.n_centers = centers.size();
    out.seed = plan.seed;
    out.v.resize(bins);
    for (std::size_t j = 0; j < bins; ++j)
        out.v[j] = static_cast<double>(sums[j]) / static_cast<double>(centers.size());
    return out;
}

LogLogCurve log_log(const VolumeCurve& curve) {
    LogLogCurve out;
    out.lr.reserve(curve.grid.size());
    out.lv.reserve(curve.grid.size());
    for (std::size_t j = 0; j < curve.grid.size(); ++j) {
        out.lr.push_back(0.5 * std::log(static_cast<double>(curve.grid.sq_dists[j])));
        out.lv.push_back(std::log(curve.v[j]));
    }
    return out;
}

void write_volume_csv(const VolumeCurve& curve, const HeightField& field,
                      const std::filesystem::path& csv_path) {
    std::ostringstream csv;
    csv << "# n_centers=" << curve.n_centers << " seed=" << curve.seed
        << " r_max=" << curve.grid.r_max << " width=" << field.width
        << " height=" << field.height << "\n";
    csv << "sq_dist,r,V\n";
    for (std::size_t j = 0; j < curve.grid.size(); ++j) {
        const int n = curve.grid.sq_dists[j];
        csv << n << "," << detail::fmt_double(std::sqrt(static_cast<double>(n))) << ","
            << detail::fmt_double(curve.v[j]) << "\n";
    }
    detail::atomic_write(csv_path, csv.str());

    std::ostringstream sidecar;
    sidecar << "{\"n_centers\": " << curve.n_centers << ", \"seed\": " << curve.seed
            << ", \"r_max\": " << curve.grid.r_max << ", \"width\": " << field.width
            << ", \"height\": " << field.height << "}\n";
    auto sidecar_path = csv_path;
    sidecar_path += ".json";
    detail::atomic_write(sidecar_path, sidecar.str());
}

}  // namespace texfrac
