#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cgvc/codec.hpp"
#include "cgvc/container.hpp"
#include "cgvc/keyframe_selection.hpp"
#include "cgvc/segmentation.hpp"

namespace cgvc {

struct EncodeConfig {
    SelectionParams selection;
    PriorKind prior = PriorKind::Luma;
    int edge_threshold = 200;
    CodecSpec kf_codec;
    CodecSpec prior_codec;
    std::optional<double> target_rate_kbps;
    double luma_fraction = 0.9;  // share of the target rate given to B_P
};

struct GeneratorConfig {
    std::string external_cmd;  // empty = built-in baseline generator
    std::string scratch_dir;
};

CgvcContainer encode(const std::vector<Frame>& video, const VideoMeta& meta,
                     const std::vector<LabelMap>& masks, const EncodeConfig& config);

std::vector<Frame> decode(const CgvcContainer& container,
                          const GeneratorConfig& generator,
                          const CodecSpec& kf_codec, const CodecSpec& prior_codec);

// Convenience overload for the internal codec: specs recovered from the
// container's self-describing streams.
std::vector<Frame> decode(const CgvcContainer& container,
                          const GeneratorConfig& generator = {});

struct RateAllocation {
    int kf_quality = 1;
    int prior_quality = 1;
    double achieved_kf_kbps = 0.0;
    double achieved_prior_kbps = 0.0;
};

// Binary search over the internal codec's quality steps so that B_P lands
// near luma_fraction * target and B_K near the remainder.
RateAllocation plan_rate_allocation(const std::vector<Frame>& video,
                                    const VideoMeta& meta,
                                    const std::vector<LabelMap>& masks,
                                    const EncodeConfig& config);

}  // namespace cgvc
