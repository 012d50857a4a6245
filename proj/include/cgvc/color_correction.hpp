#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cgvc/types.hpp"

namespace cgvc {

// Q16.16 fixed-point, round-half-away-from-zero.
using Fixed1616 = uint32_t;

double fixed_to_double(Fixed1616 v);
Fixed1616 double_to_fixed(double v);

struct ChannelStats {
    Fixed1616 mu = 0;
    Fixed1616 sigma = 0;

    bool operator==(const ChannelStats&) const = default;
};

// Per-frame, per-RGB-channel mean and population standard deviation of the
// original video; carried losslessly in the B_C section.
struct ColorParams {
    std::vector<std::array<ChannelStats, 3>> frames;  // [t-1][channel], R,G,B

    bool operator==(const ColorParams&) const = default;
};

ColorParams compute_color_params(const std::vector<RgbFrame>& original);

// Affine mean/std alignment of one reconstructed frame to the stored
// original statistics. Degenerate reconstructions (sigma_r < 2^-16) map to
// the constant mu_o frame.
RgbFrame color_correct(const RgbFrame& recon, const std::array<ChannelStats, 3>& params);

}  // namespace cgvc
