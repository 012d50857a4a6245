#include "cgvc/keyframe_selection.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cgvc/errors.hpp"

namespace cgvc {

ColorHistogram object_histogram(const RgbFrame& frame, const LabelMap& label_map,
                                int object_id) {
    if (object_id < 1 || object_id > 255)
        throw InputError("object id out of range: " + std::to_string(object_id));
    ColorHistogram h;
    std::vector<double> cells(ColorHistogram::kCells, 0.0);
    size_t count = 0;
    const size_t n = frame.r.size();
    for (size_t i = 0; i < n; ++i) {
        if (label_map.labels.data[i] != object_id) continue;
        int bin = ((frame.r.data[i] >> 4) << 8) | ((frame.g.data[i] >> 4) << 4) |
                  (frame.b.data[i] >> 4);
        cells[bin] += 1.0;
        ++count;
    }
    if (count == 0) return ColorHistogram::empty_marker();
    for (double& c : cells) c /= static_cast<double>(count);
    h.cells = std::move(cells);
    h.empty = false;
    return h;
}

double positive_histogram_distance(const ColorHistogram& h_prev,
                                   const ColorHistogram& h_cand) {
    if (h_prev.empty || h_cand.empty) return 0.0;
    double d = 0.0;
    for (int j = 0; j < ColorHistogram::kCells; ++j) {
        double diff = h_cand.cells[j] - h_prev.cells[j];
        if (diff > 0.0) d += diff;
    }
    return d;
}

namespace {

struct Window {
    int lo, hi;  // inclusive; empty when lo > hi
    bool empty() const { return lo > hi; }
};

Window search_window(int t_prev, SearchDirection dir, const SelectionParams& p,
                     int frame_count) {
    Window w{};
    if (dir == SearchDirection::Forward) {
        w.lo = t_prev + p.w_min;
        w.hi = std::min(t_prev + p.w_max, frame_count);
    } else {
        w.lo = std::max(t_prev - p.w_max, 1);
        w.hi = t_prev - p.w_min;
    }
    return w;
}

}  // namespace

std::vector<int> gather_candidates(
    const std::vector<std::vector<ColorHistogram>>& histograms, int t_prev,
    SearchDirection direction, const SelectionParams& params, int frame_count) {
    Window w = search_window(t_prev, direction, params, frame_count);
    std::vector<int> candidates;
    if (w.empty()) return candidates;
    const auto& prev_row = histograms[t_prev - 1];
    const int num_objects = static_cast<int>(prev_row.size());
    for (int m = 0; m < num_objects; ++m) {
        for (int t = w.lo; t <= w.hi; ++t) {
            double d = positive_histogram_distance(prev_row[m], histograms[t - 1][m]);
            if (d >= params.tau) candidates.push_back(t);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    if (params.candidate_dedup)
        candidates.erase(std::unique(candidates.begin(), candidates.end()),
                         candidates.end());
    return candidates;
}

int kde_peak(const std::vector<int>& candidates, int window_lo, int window_hi,
             double bandwidth) {
    if (candidates.empty()) throw InputError("kde_peak requires candidates");
    if (window_lo > window_hi) throw InputError("kde_peak window is empty");
    int best_t = window_lo;
    double best_f = -1.0;
    const double norm =
        1.0 / (bandwidth * static_cast<double>(candidates.size()) *
               std::sqrt(2.0 * M_PI));
    for (int t = window_lo; t <= window_hi; ++t) {
        double f = 0.0;
        for (int c : candidates) {
            double z = (t - c) / bandwidth;
            f += std::exp(-0.5 * z * z);
        }
        f *= norm;
        if (f > best_f) {
            best_f = f;
            best_t = t;
        }
    }
    return best_t;
}

std::vector<std::vector<ColorHistogram>> compute_histograms(
    const std::vector<RgbFrame>& frames, const std::vector<LabelMap>& label_maps) {
    const int num_objects = count_objects(label_maps);
    std::vector<std::vector<ColorHistogram>> hists(frames.size());
    for (size_t t = 0; t < frames.size(); ++t) {
        hists[t].reserve(num_objects);
        for (int m = 1; m <= num_objects; ++m)
            hists[t].push_back(object_histogram(frames[t], label_maps[t], m));
    }
    return hists;
}

namespace {

// One search step: KDE peak of the qualifying candidates, or the uniform
// fallback at w_max when none qualify.
int next_keyframe(const std::vector<std::vector<ColorHistogram>>& hists, int t_prev,
                  SearchDirection dir, const SelectionParams& p, int frame_count) {
    Window w = search_window(t_prev, dir, p, frame_count);
    auto candidates = gather_candidates(hists, t_prev, dir, p, frame_count);
    if (candidates.empty() || w.empty()) {
        return dir == SearchDirection::Forward
                   ? std::min(t_prev + p.w_max, frame_count)
                   : std::max(t_prev - p.w_max, 1);
    }
    return kde_peak(candidates, w.lo, w.hi, p.kde_bandwidth);
}

// Resolves the seam between the forward and backward halves; the two passes
// never interleave, so the seam is the gap (last_fwd, first_bwd).
void merge_passes(std::vector<int>& plan, int last_fwd, int first_bwd,
                  const SelectionParams& p, int frame_count) {
    int gap = first_bwd - last_fwd;
    const int slack = p.w_max + static_cast<int>(std::llround(p.kde_bandwidth));
    if (gap < p.w_min) {
        auto pos_f = std::find(plan.begin(), plan.end(), last_fwd);
        auto pos_b = std::find(plan.begin(), plan.end(), first_bwd);
        long merged_drop_f = -1, merged_drop_b = -1;
        if (last_fwd != 1) merged_drop_f = first_bwd - *(pos_f - 1);
        if (first_bwd != frame_count) merged_drop_b = *(pos_b + 1) - last_fwd;
        bool f_ok = merged_drop_f > 0 && merged_drop_f <= slack;
        bool b_ok = merged_drop_b > 0 && merged_drop_b <= slack;
        if (f_ok && b_ok) {
            if (std::labs(merged_drop_f - p.w_max) < std::labs(merged_drop_b - p.w_max))
                plan.erase(pos_f);
            else
                plan.erase(pos_b);
        } else if (f_ok) {
            plan.erase(pos_f);
        } else if (b_ok) {
            plan.erase(pos_b);
        }
        // neither drop stays within w_max + bandwidth: keep both
    } else if (gap > p.w_max) {
        std::vector<int> inserted;
        int cur = last_fwd;
        while (first_bwd - cur > p.w_max) {
            cur += p.w_max;
            inserted.push_back(cur);
        }
        plan.insert(std::find(plan.begin(), plan.end(), first_bwd), inserted.begin(),
                    inserted.end());
    }
}

}  // namespace

KeyframePlan select_keyframes(const std::vector<RgbFrame>& frames,
                              const std::vector<LabelMap>& label_maps,
                              const SelectionParams& params) {
    const int t_total = static_cast<int>(frames.size());
    if (t_total < 2) throw InputError("keyframe selection requires at least 2 frames");
    if (label_maps.size() != frames.size())
        throw InputError("label map count does not match frame count");
    if (params.w_min < 1 || params.w_min > params.w_max || params.tau <= 0.0)
        throw InputError("invalid selection parameters");

    auto hists = compute_histograms(frames, label_maps);
    const int half = (t_total + 1) / 2;  // ceil(T/2)

    std::vector<int> fwd{1};
    int t_prev = 1;
    while (t_prev + params.w_min <= half) {
        int next = next_keyframe(hists, t_prev, SearchDirection::Forward, params, t_total);
        if (next > half) break;
        fwd.push_back(next);
        t_prev = next;
    }

    std::vector<int> bwd{t_total};
    t_prev = t_total;
    while (t_prev - params.w_min >= half + 1) {
        int next = next_keyframe(hists, t_prev, SearchDirection::Backward, params, t_total);
        if (next < half + 1) break;
        bwd.push_back(next);
        t_prev = next;
    }

    std::set<int> merged(fwd.begin(), fwd.end());
    merged.insert(bwd.begin(), bwd.end());
    KeyframePlan plan;
    plan.keyframes.assign(merged.begin(), merged.end());

    int last_fwd = *std::max_element(fwd.begin(), fwd.end());
    int first_bwd = *std::min_element(bwd.begin(), bwd.end());
    if (last_fwd != first_bwd)
        merge_passes(plan.keyframes, last_fwd, first_bwd, params, t_total);
    return plan;
}

}  // namespace cgvc
