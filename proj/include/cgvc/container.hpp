#pragma once

#include <cstdint>
#include <vector>

#include "cgvc/codec.hpp"
#include "cgvc/color_correction.hpp"
#include "cgvc/control_prior.hpp"
#include "cgvc/keyframe_selection.hpp"
#include "cgvc/types.hpp"

namespace cgvc {

// Versioned single-file bitstream: header, keyframe plan, coded keyframes
// (B_K), coded priors (B_P) and lossless color parameters (B_C). Layout is
// documented in docs/format.md.
struct CgvcContainer {
    static constexpr uint16_t kVersion = 1;

    VideoMeta meta;
    KeyframePlan plan;
    PriorKind prior_kind = PriorKind::Luma;
    uint8_t codec_id = 1;
    EncodedStream b_k;
    EncodedStream b_p;
    ColorParams b_c;
};

bool operator==(const CgvcContainer& a, const CgvcContainer& b);

std::vector<uint8_t> serialize(const CgvcContainer& container);

CgvcContainer parse(const std::vector<uint8_t>& bytes);

struct RateBreakdown {
    double total_kbps = 0.0;
    double b_k_kbps = 0.0;
    double b_p_kbps = 0.0;
    double b_c_kbps = 0.0;
    double overhead_kbps = 0.0;
};

RateBreakdown total_rate(const CgvcContainer& container);

}  // namespace cgvc
