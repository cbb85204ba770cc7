#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "texfrac/gray_image.hpp"

namespace texfrac {

enum class SynthKind {
    Flat,                  // constant 128
    UniformNoise,          // i.i.d. uniform [0,255]
    SmoothedNoise,         // box-filtered noise, rescaled to [0,255]
    Checker,               // alternating 0/255 blocks
    MidpointDisplacement,  // diamond-square surface, rescaled to [0,255]
};

/// Recipe for one deterministic synthetic texture. `noise_amp` adds i.i.d.
/// uniform noise in [-noise_amp, noise_amp] after the base pattern
/// (clamped), which keeps per-sample variation in otherwise constant
/// classes.
struct SynthSpec {
    SynthKind kind = SynthKind::Flat;
    int width = 0;
    int height = 0;
    std::uint64_t seed = 0;
    int box_k = 3;           // SmoothedNoise: box side, odd
    int checker_period = 8;  // Checker: block side
    double roughness = 0.5;  // MidpointDisplacement: H in (0,1)
    int noise_amp = 0;
};

GrayImage generate(const SynthSpec& spec);

struct SynthClass {
    std::string name;
    SynthSpec spec;  // seed field is ignored; per-sample seeds are derived
};

/// Build a labeled dataset from class templates: sample j of class c uses
/// seed = base_seed XOR mix64(c, j), so distinct (c, j) always get distinct
/// seeds and the whole dataset is reproducible from base_seed.
LabeledDataset make_synth_dataset(const std::vector<SynthClass>& classes,
                                  int samples_per_class, std::uint64_t base_seed);

/// The five-class template set used by the end-to-end harness:
/// flat-plus-noise, smoothed (k=3 and k=9), checker (p=8), uniform noise.
std::vector<SynthClass> default_synth_classes(int width, int height);

}  // namespace texfrac
