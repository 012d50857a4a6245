#pragma once

#include <cstdint>
#include <vector>

#include "cgvc/segmentation.hpp"
#include "cgvc/types.hpp"

namespace cgvc {

// Deterministic synthetic corpora: identical specs produce byte-identical
// videos and masks.
enum class SynthKind { ConstantColor, ColorFlip, MovingBlock, Noise };

struct YuvColor {
    uint8_t y = 16, u = 128, v = 128;
};

struct SynthSpec {
    SynthKind kind = SynthKind::ConstantColor;
    VideoMeta meta{64, 64, 60, {25, 1}};
    uint64_t seed = 1;

    YuvColor background{16, 128, 128};

    // ColorFlip / MovingBlock object rectangle (even-aligned)
    int obj_x = 16, obj_y = 16, obj_w = 32, obj_h = 32;
    YuvColor obj_color{145, 90, 160};

    // ColorFlip: the object switches to flip_color at frame flip_at
    int flip_at = 0;
    YuvColor flip_color{145, 160, 90};
    // Fraction (in 1/16ths) of the object kept at obj_color across the flip;
    // keeps the histogram supports overlapping so the flip distance is < 1.
    int stable_sixteenths = 0;

    // MovingBlock velocity in pixels/frame (applied in units of 2 pixels to
    // stay chroma-aligned)
    int vel_x = 2, vel_y = 0;

    // Noise: uniform per-pixel samples in [lo, hi] per plane
    uint8_t noise_y_lo = 16, noise_y_hi = 235;
    bool noise_chroma = false;  // when false, chroma stays at background

    // Additive deterministic luma noise overlay for any kind (0 = off)
    int luma_noise_amplitude = 0;
};

struct SynthResult {
    VideoMeta meta;
    std::vector<Frame> frames;
    std::vector<LabelMap> masks;
};

SynthResult synth(const SynthSpec& spec);

}  // namespace cgvc
