#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cgvc/types.hpp"

namespace cgvc {

// 10*log10(255^2 / MSE), MSE pooled over the three channels. Identical
// inputs return +infinity.
double psnr_rgb(const RgbFrame& a, const RgbFrame& b);

// Sequence PSNR pools the MSE over all frames before the log.
double psnr_rgb_sequence(const std::vector<RgbFrame>& a, const std::vector<RgbFrame>& b);

// Mean squared error of the U and V planes over a whole sequence.
double chroma_mse(const std::vector<Frame>& a, const std::vector<Frame>& b);

// Standard 5-scale MS-SSIM on the luma-equivalent channel. Needs
// dimensions of at least 176x176 so the 11x11 window fits at every scale.
double ms_ssim(const RgbFrame& a, const RgbFrame& b);

double ms_ssim_sequence(const std::vector<RgbFrame>& a, const std::vector<RgbFrame>& b);

struct RdPoint {
    double rate_kbps = 0.0;
    double metric = 0.0;
};

struct RdCurve {
    std::string label;
    std::vector<RdPoint> points;  // sorted by strictly increasing rate
    std::string metric_kind = "psnr";
    bool higher_is_better = true;
};

struct BdResult {
    bool applicable = false;
    double value = 0.0;
    bool degraded = false;  // fewer than 4 points on a curve; lower-order fit

    static BdResult not_applicable() { return {}; }
};

// Bjontegaard delta rate in percent: monotone piecewise-cubic interpolation
// of log10(rate) over metric, integrated over the overlapping metric range.
BdResult bd_rate(const RdCurve& anchor, const RdCurve& test);

// Average metric gap at equal rate over the overlapping log-rate range.
BdResult bd_metric(const RdCurve& anchor, const RdCurve& test);

void emit_rd_outputs(const std::vector<RdCurve>& curves, const std::string& out_dir);

std::vector<RdCurve> read_rd_csv(const std::string& path);

}  // namespace cgvc
