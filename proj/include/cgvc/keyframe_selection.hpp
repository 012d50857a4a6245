#pragma once

#include <vector>

#include "cgvc/segmentation.hpp"
#include "cgvc/types.hpp"

namespace cgvc {

// l1-normalized joint 16x16x16 histogram over the RGB domain, or the EMPTY
// marker for an object absent from the frame.
struct ColorHistogram {
    static constexpr int kBinsPerChannel = 16;
    static constexpr int kCells = 16 * 16 * 16;

    std::vector<double> cells;  // size kCells when non-empty
    bool empty = true;

    static ColorHistogram empty_marker() { return {}; }
};

struct SelectionParams {
    int w_min = 32;
    int w_max = 85;
    double tau = 0.4;
    double kde_bandwidth = 5.0;
    bool candidate_dedup = false;  // strict set semantics over (object, frame)
};

struct KeyframePlan {
    std::vector<int> keyframes;  // strictly increasing, contains 1 and T

    int clip_count() const { return static_cast<int>(keyframes.size()) - 1; }
    bool is_keyframe(int t) const {
        for (int k : keyframes)
            if (k == t) return true;
        return false;
    }
};

ColorHistogram object_histogram(const RgbFrame& frame, const LabelMap& label_map,
                                int object_id);

// Positive color-histogram distance: mass of h_cand exceeding h_prev.
// Returns 0 when either histogram is EMPTY.
double positive_histogram_distance(const ColorHistogram& h_prev,
                                   const ColorHistogram& h_cand);

enum class SearchDirection { Forward, Backward };

// One entry per (object, frame) pair whose distance to the previous keyframe
// reaches tau; with candidate_dedup, one entry per qualifying frame.
// histograms[t-1][m-1] holds the histogram of object m in frame t.
std::vector<int> gather_candidates(
    const std::vector<std::vector<ColorHistogram>>& histograms, int t_prev,
    SearchDirection direction, const SelectionParams& params, int frame_count);

// Integer-domain argmax of the Gaussian KDE over [window_lo, window_hi];
// ties break toward the smallest index. Candidates must be non-empty.
int kde_peak(const std::vector<int>& candidates, int window_lo, int window_hi,
             double bandwidth);

std::vector<std::vector<ColorHistogram>> compute_histograms(
    const std::vector<RgbFrame>& frames, const std::vector<LabelMap>& label_maps);

KeyframePlan select_keyframes(const std::vector<RgbFrame>& frames,
                              const std::vector<LabelMap>& label_maps,
                              const SelectionParams& params);

}  // namespace cgvc
