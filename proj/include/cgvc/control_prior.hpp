#pragma once

#include "cgvc/types.hpp"

namespace cgvc {

enum class PriorKind : uint8_t { Luma = 0, Edge = 1 };

struct PriorFrame {
    int index = 0;
    Plane plane;  // luma dimensions; Edge planes are binary {0, 255}
    PriorKind kind = PriorKind::Luma;

    bool operator==(const PriorFrame&) const = default;
};

PriorFrame extract_luma_prior(const Frame& frame);

// |gx| + |gy| of the 3x3 Sobel operator on Y, replicate-padded borders,
// thresholded to {0, 255}. threshold must lie in [1, 1020].
PriorFrame extract_edge_prior(const Frame& frame, int threshold);

// Priors travel through the codec path as monochrome 4:2:0 frames.
Frame prior_to_frame(const PriorFrame& prior);

}  // namespace cgvc
