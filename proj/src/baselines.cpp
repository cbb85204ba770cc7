#include "texfrac/baselines.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace texfrac {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex fftw_mutex;

std::vector<std::complex<double>> dft2d(std::vector<std::complex<double>> in, int width,
                                        int height, int sign) {
    std::vector<std::complex<double>> out(in.size());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        plan = fftw_plan_dft_2d(height, width, reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), sign,
                                FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        fftw_destroy_plan(plan);
    }
    return out;
}

std::vector<std::complex<double>> forward_dft(const GrayImage& img) {
    std::vector<std::complex<double>> in(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) in[i] = static_cast<double>(img.pixels[i]);
    return dft2d(std::move(in), img.width, img.height, FFTW_FORWARD);
}

// Centered frequency index: 0..N-1 -> [-floor(N/2), ceil(N/2)-1].
int centered(int i, int n) { return i < (n + 1) / 2 ? i : i - n; }

}  // namespace

FeatureVector fourier_descriptors(const GrayImage& img) {
    if (img.width < 2 || img.height < 2)
        throw std::invalid_argument("fourier_descriptors: image must be at least 2x2");
    constexpr int kRings = 99;

    const auto spectrum = forward_dft(img);
    const double r_max = std::hypot(static_cast<double>(img.width / 2),
                                    static_cast<double>(img.height / 2));

    FeatureVector fv;
    fv.method_tag = "fourier";
    fv.values.assign(kRings, 0.0);
    for (int v = 0; v < img.height; ++v) {
        const int fy = centered(v, img.height);
        for (int u = 0; u < img.width; ++u) {
            const int fx = centered(u, img.width);
            if (fx == 0 && fy == 0) continue;  // DC excluded
            const double radius = std::hypot(static_cast<double>(fx), static_cast<double>(fy));
            // ring i covers radii in (i*r_max/99, (i+1)*r_max/99]
            int ring = static_cast<int>(std::ceil(radius * kRings / r_max)) - 1;
            ring = std::clamp(ring, 0, kRings - 1);
            fv.values[ring] += std::abs(spectrum[static_cast<std::size_t>(v) * img.width + u]);
        }
    }
    return fv;
}

FeatureVector cooccurrence_descriptors(const GrayImage& img) {
    // angles -45, 0, 45, 90 degrees with the y axis pointing down
    static constexpr int kBaseOffsets[4][2] = {{1, 1}, {1, 0}, {1, -1}, {0, -1}};
    constexpr int kLevels = 256;

    FeatureVector fv;
    fv.method_tag = "glcm";
    fv.values.reserve(16);

    std::vector<std::int64_t> counts(static_cast<std::size_t>(kLevels) * kLevels);
    for (int d = 1; d <= 2; ++d) {
        for (const auto& base : kBaseOffsets) {
            const int dx = d * base[0], dy = d * base[1];
            std::fill(counts.begin(), counts.end(), 0);
            std::int64_t total = 0;
            for (int y = 0; y < img.height; ++y) {
                const int yy = y + dy;
                if (yy < 0 || yy >= img.height) continue;
                for (int x = 0; x < img.width; ++x) {
                    const int xx = x + dx;
                    if (xx < 0 || xx >= img.width) continue;
                    ++counts[static_cast<std::size_t>(img.at(x, y)) * kLevels + img.at(xx, yy)];
                    ++total;
                }
            }
            if (total == 0)
                throw std::invalid_argument("cooccurrence_descriptors: offset (" +
                                            std::to_string(dx) + "," + std::to_string(dy) +
                                            ") has no valid pixel pairs");
            double energy = 0.0, entropy = 0.0;
            for (const auto c : counts) {
                if (c == 0) continue;
                const double p = static_cast<double>(c) / static_cast<double>(total);
                energy += p * p;
                entropy -= p * std::log(p);
            }
            fv.values.push_back(energy);
            fv.values.push_back(entropy);
        }
    }
    return fv;
}

FeatureVector gabor_descriptors(const GrayImage& img) {
    if (img.width < 8 || img.height < 8)
        throw std::invalid_argument("gabor_descriptors: image must be at least 8x8");
    constexpr int kScales = 4;
    constexpr int kOrientations = 4;
    constexpr double kFreqLow = 0.01;
    constexpr double kFreqHigh = 0.3;

    const auto spectrum = forward_dft(img);
    const std::size_t n = spectrum.size();
    const double norm = static_cast<double>(n);

    // Geometric frequency spacing; widths chosen so neighboring filters in
    // frequency (and in orientation at the center frequency) cross at half
    // peak magnitude: exp(-x^2 / (2 sigma^2)) = 1/2 at x = sigma sqrt(2 ln 2).
    const double a = std::pow(kFreqHigh / kFreqLow, 1.0 / (kScales - 1));
    const double half_width = std::sqrt(2.0 * std::log(2.0));
    const double tan_half_sector = std::tan(std::numbers::pi / (2.0 * kOrientations));

    FeatureVector fv;
    fv.method_tag = "gabor";
    fv.values.reserve(kScales * kOrientations);

    std::vector<std::complex<double>> filtered(n);
    for (int s = 0; s < kScales; ++s) {
        const double freq = kFreqLow * std::pow(a, s);
        const double sigma_u = freq * (a - 1.0) / ((a + 1.0) * half_width);
        const double sigma_v = freq * tan_half_sector / half_width;
        for (int o = 0; o < kOrientations; ++o) {
            const double theta = o * std::numbers::pi / kOrientations;
            const double c = std::cos(theta), si = std::sin(theta);
            for (int v = 0; v < img.height; ++v) {
                const double fy = static_cast<double>(centered(v, img.height)) / img.height;
                for (int u = 0; u < img.width; ++u) {
                    const double fx = static_cast<double>(centered(u, img.width)) / img.width;
                    const std::size_t i = static_cast<std::size_t>(v) * img.width + u;
                    if (fx == 0.0 && fy == 0.0) {
                        filtered[i] = 0.0;  // zero-mean filter
                        continue;
                    }
                    const double fu = fx * c + fy * si;
                    const double fw = -fx * si + fy * c;
                    const double du = (fu - freq) / sigma_u;
                    const double dv = fw / sigma_v;
                    filtered[i] = spectrum[i] * std::exp(-0.5 * (du * du + dv * dv));
                }
            }
            const auto response = dft2d(filtered, img.width, img.height, FFTW_BACKWARD);
            double energy = 0.0;
            for (const auto& r : response) energy += std::norm(r / norm);
            fv.values.push_back(energy);
        }
    }
    return fv;
}

}  // namespace texfrac
