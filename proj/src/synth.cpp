#include "texfrac/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "texfrac/detail/rng.hpp"

namespace texfrac {

namespace {

using detail::mix64;
using detail::uniform_below;
using detail::uniform_unit;

void validate(const SynthSpec& spec) {
    if (spec.width < 1 || spec.height < 1)
        throw std::invalid_argument("synth: dimensions must be positive");
    if (spec.noise_amp < 0) throw std::invalid_argument("synth: noise_amp must be >= 0");
    switch (spec.kind) {
        case SynthKind::SmoothedNoise:
            if (spec.box_k < 1 || spec.box_k % 2 == 0)
                throw std::invalid_argument("synth: box_k must be odd and positive");
            break;
        case SynthKind::Checker:
            if (spec.checker_period < 1)
                throw std::invalid_argument("synth: checker_period must be >= 1");
            break;
        case SynthKind::MidpointDisplacement:
            if (!(spec.roughness > 0.0 && spec.roughness < 1.0))
                throw std::invalid_argument("synth: roughness must lie in (0, 1)");
            break;
        default:
            break;
    }
}

// Mirror index into [0, n), edge pixel included (… 2 1 0 | 0 1 2 …).
int reflect(int i, int n) {
    if (i < 0) return -1 - i;
    if (i >= n) return 2 * n - 1 - i;
    return i;
}

std::vector<double> box_filter(const std::vector<double>& src, int w, int h, int k) {
    const int half = k / 2;
    std::vector<double> tmp(src.size()), out(src.size());
    // horizontal pass
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int d = -half; d <= half; ++d) acc += src[static_cast<std::size_t>(y) * w + reflect(x + d, w)];
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    // vertical pass
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int d = -half; d <= half; ++d) acc += tmp[static_cast<std::size_t>(reflect(y + d, h)) * w + x];
            out[static_cast<std::size_t>(y) * w + x] = acc / (static_cast<double>(k) * k);
        }
    }
    return out;
}

std::vector<std::uint8_t> rescale_to_bytes(const std::vector<double>& v) {
    const auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
    const double mn = *mn_it, mx = *mx_it;
    std::vector<std::uint8_t> out(v.size());
    if (mx == mn) {
        std::fill(out.begin(), out.end(), std::uint8_t{128});
        return out;
    }
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = static_cast<std::uint8_t>(std::lround((v[i] - mn) / (mx - mn) * 255.0));
    return out;
}

std::vector<double> midpoint_surface(int width, int height, double roughness, std::mt19937_64& rng) {
    // Diamond-square on the smallest (2^n + 1)^2 grid covering the image.
    int g = 2;
    while (g + 1 < std::max(width, height)) g *= 2;
    const int n = g + 1;

    std::vector<double> z(static_cast<std::size_t>(n) * n, 0.0);
    auto zat = [&](int x, int y) -> double& { return z[static_cast<std::size_t>(y) * n + x]; };

    zat(0, 0) = uniform_unit(rng);
    zat(n - 1, 0) = uniform_unit(rng);
    zat(0, n - 1) = uniform_unit(rng);
    zat(n - 1, n - 1) = uniform_unit(rng);

    double amp = 1.0;
    for (int step = n - 1; step > 1; step /= 2) {
        const int half = step / 2;
        amp *= std::pow(2.0, -roughness);
        // diamond step: square centers
        for (int y = half; y < n; y += step) {
            for (int x = half; x < n; x += step) {
                const double avg = (zat(x - half, y - half) + zat(x + half, y - half) +
                                    zat(x - half, y + half) + zat(x + half, y + half)) /
                                   4.0;
                zat(x, y) = avg + (2.0 * uniform_unit(rng) - 1.0) * amp;
            }
        }
        // square step: edge midpoints
        for (int y = 0; y < n; y += half) {
            const int x_start = (y / half) % 2 == 0 ? half : 0;
            for (int x = x_start; x < n; x += step) {
                double acc = 0.0;
                int cnt = 0;
                if (x - half >= 0) { acc += zat(x - half, y); ++cnt; }
                if (x + half < n) { acc += zat(x + half, y); ++cnt; }
                if (y - half >= 0) { acc += zat(x, y - half); ++cnt; }
                if (y + half < n) { acc += zat(x, y + half); ++cnt; }
                zat(x, y) = acc / cnt + (2.0 * uniform_unit(rng) - 1.0) * amp;
            }
        }
    }

    std::vector<double> out(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) out[static_cast<std::size_t>(y) * width + x] = zat(x, y);
    return out;
}

}  // namespace

GrayImage generate(const SynthSpec& spec) {
    validate(spec);
    const std::size_t count = static_cast<std::size_t>(spec.width) * spec.height;
    std::mt19937_64 rng(spec.seed);

    GrayImage img;
    img.width = spec.width;
    img.height = spec.height;
    img.pixels.resize(count);

    switch (spec.kind) {
        case SynthKind::Flat:
            std::fill(img.pixels.begin(), img.pixels.end(), std::uint8_t{128});
            break;
        case SynthKind::UniformNoise:
            // Low byte of the 64-bit draw: 2^64 is a multiple of 256, so the
            // byte is exactly uniform.
            for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng() & 0xFF);
            break;
        case SynthKind::SmoothedNoise: {
            std::vector<double> noise(count);
            for (auto& v : noise) v = static_cast<double>(rng() & 0xFF);
            img.pixels = rescale_to_bytes(box_filter(noise, spec.width, spec.height, spec.box_k));
            break;
        }
        case SynthKind::Checker:
            for (int y = 0; y < spec.height; ++y)
                for (int x = 0; x < spec.width; ++x)
                    img.at(x, y) = ((x / spec.checker_period + y / spec.checker_period) % 2) ? 255 : 0;
            break;
        case SynthKind::MidpointDisplacement:
            img.pixels = rescale_to_bytes(midpoint_surface(spec.width, spec.height, spec.roughness, rng));
            break;
    }

    if (spec.noise_amp > 0) {
        const std::uint64_t span = 2 * static_cast<std::uint64_t>(spec.noise_amp) + 1;
        for (auto& p : img.pixels) {
            const int d = static_cast<int>(uniform_below(rng, span)) - spec.noise_amp;
            p = static_cast<std::uint8_t>(std::clamp(static_cast<int>(p) + d, 0, 255));
        }
    }
    return img;
}

LabeledDataset make_synth_dataset(const std::vector<SynthClass>& classes, int samples_per_class,
                                  std::uint64_t base_seed) {
    if (classes.size() < 2) throw std::invalid_argument("make_synth_dataset: need >= 2 classes");
    if (samples_per_class < 3)
        throw std::invalid_argument("make_synth_dataset: need >= 3 samples per class");

    LabeledDataset out;
    for (int c = 0; c < static_cast<int>(classes.size()); ++c) {
        out.class_names.push_back(classes[c].name);
        for (int j = 0; j < samples_per_class; ++j) {
            SynthSpec spec = classes[c].spec;
            // mix64 is a bijection, so distinct (c, j) give distinct seeds.
            spec.seed = base_seed ^ detail::mix64((static_cast<std::uint64_t>(c) << 32) |
                                                  static_cast<std::uint64_t>(j));
            out.samples.push_back(
                {generate(spec), c, classes[c].name + "/s" + std::to_string(j)});
        }
    }
    return out;
}

std::vector<SynthClass> default_synth_classes(int width, int height) {
    auto base = [&](SynthKind kind) {
        SynthSpec s;
        s.kind = kind;
        s.width = width;
        s.height = height;
        return s;
    };
    SynthSpec flat_noise = base(SynthKind::Flat);
    flat_noise.noise_amp = 10;
    SynthSpec smooth3 = base(SynthKind::SmoothedNoise);
    smooth3.box_k = 3;
    SynthSpec smooth9 = base(SynthKind::SmoothedNoise);
    smooth9.box_k = 9;
    SynthSpec checker = base(SynthKind::Checker);
    checker.checker_period = 8;
    SynthSpec noise = base(SynthKind::UniformNoise);

    return {{"flat_noise", flat_noise},
            {"smoothed_k3", smooth3},
            {"smoothed_k9", smooth9},
            {"checker_p8", checker},
            {"uniform_noise", noise}};
}

}  // namespace texfrac
