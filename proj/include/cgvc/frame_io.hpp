#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cgvc/types.hpp"

namespace cgvc {

enum class VideoFormat { Y4M, RawYuv };

// Reads a Y4M file (self-describing) or a raw planar YUV420P8 file with
// explicit meta. Throws TruncatedInput / InputError on malformed input.
std::pair<VideoMeta, std::vector<Frame>> read_video(
    const std::string& path, const std::optional<VideoMeta>& meta = std::nullopt);

void write_video(const std::vector<Frame>& frames, const std::string& path,
                 VideoFormat format, const VideoMeta& meta);

// BT.709 limited-range YCbCr -> RGB, nearest-neighbor chroma upsampling,
// round-half-away-from-zero, clamped to [0,255].
RgbFrame yuv_to_rgb(const Frame& frame);

// Inverse transform with 2x2 box-average chroma downsampling.
Frame rgb_to_yuv(const RgbFrame& rgb);

std::vector<RgbFrame> to_rgb(const std::vector<Frame>& frames);

}  // namespace cgvc
