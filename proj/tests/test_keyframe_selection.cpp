#include <numeric>

#include "cgvc/frame_io.hpp"
#include "cgvc/keyframe_selection.hpp"
#include "cgvc/synth.hpp"
#include "doctest.h"
#include "selection_oracle.hpp"

using namespace cgvc;

namespace {

ColorHistogram single_bin(int cell) {
    ColorHistogram h;
    h.empty = false;
    h.cells.assign(ColorHistogram::kCells, 0.0);
    h.cells[cell] = 1.0;
    return h;
}

ColorHistogram two_bins(int a, int b) {
    ColorHistogram h;
    h.empty = false;
    h.cells.assign(ColorHistogram::kCells, 0.0);
    h.cells[a] = 0.5;
    h.cells[b] = 0.5;
    return h;
}

}  // namespace

TEST_CASE("object histogram is l1-normalized over 16^3 bins") {
    RgbFrame f;
    f.index = 1;
    f.r = Plane(4, 4, 200);
    f.g = Plane(4, 4, 10);
    f.b = Plane(4, 4, 10);
    f.r.at(0, 0) = 10;  // one off-color pixel

    LabelMap m{1, Plane(4, 4, 1)};
    auto h = object_histogram(f, m, 1);
    REQUIRE(!h.empty);
    REQUIRE(h.cells.size() == size_t(ColorHistogram::kCells));
    CHECK(std::accumulate(h.cells.begin(), h.cells.end(), 0.0) ==
          doctest::Approx(1.0));
    CHECK(h.cells[(200 / 16) * 256 + (10 / 16) * 16 + 10 / 16] ==
          doctest::Approx(15.0 / 16.0));
    CHECK(h.cells[(10 / 16) * 256 + (10 / 16) * 16 + 10 / 16] ==
          doctest::Approx(1.0 / 16.0));

    // absent object -> EMPTY marker
    CHECK(object_histogram(f, m, 2).empty);
}

TEST_CASE("positive distance: exceeding mass only, EMPTY rule") {
    auto a = single_bin(0);
    auto ab = two_bins(0, 100);
    CHECK(positive_histogram_distance(a, ab) == doctest::Approx(0.5));
    // positive-part distance is symmetric for fully normalized histograms:
    // the excess of {A:1.0} over {A:0.5, B:0.5} is the same 0.5
    CHECK(positive_histogram_distance(ab, a) == doctest::Approx(0.5));
    CHECK(positive_histogram_distance(a, a) == doctest::Approx(0.0));
    CHECK(positive_histogram_distance(ColorHistogram::empty_marker(), ab) == 0.0);
    CHECK(positive_histogram_distance(ab, ColorHistogram::empty_marker()) == 0.0);
    // disjoint supports: full unit distance
    CHECK(positive_histogram_distance(single_bin(0), single_bin(7)) ==
          doctest::Approx(1.0));
}

TEST_CASE("candidate gathering across a color flip") {
    const int total = 120, flip = 60;
    SelectionParams p;  // w_min=32, w_max=85, tau=0.4
    auto hist_seq = [&](int objects) {
        std::vector<std::vector<ColorHistogram>> hs(total);
        for (int t = 1; t <= total; ++t)
            for (int m = 0; m < objects; ++m)
                hs[t - 1].push_back(single_bin(t < flip ? 5 : 9));
        return hs;
    };

    auto one = gather_candidates(hist_seq(1), 1, SearchDirection::Forward, p, total);
    // window [33, 86]; every frame >= 60 qualifies exactly once
    std::vector<int> want;
    for (int t = flip; t <= 86; ++t) want.push_back(t);
    CHECK(one == want);

    auto two = gather_candidates(hist_seq(2), 1, SearchDirection::Forward, p, total);
    std::vector<int> want2;
    for (int t = flip; t <= 86; ++t) {
        want2.push_back(t);
        want2.push_back(t);
    }
    CHECK(two == want2);

    SelectionParams dedup = p;
    dedup.candidate_dedup = true;
    CHECK(gather_candidates(hist_seq(2), 1, SearchDirection::Forward, dedup,
                            total) == want);

    // backward window from t_prev=120 is [35, 88]; pre-flip frames qualify
    auto bwd = gather_candidates(hist_seq(1), total, SearchDirection::Backward, p,
                                 total);
    std::vector<int> want_b;
    for (int t = 35; t < flip; ++t) want_b.push_back(t);
    CHECK(bwd == want_b);
}

TEST_CASE("KDE peak: pinned values and smallest-index ties") {
    CHECK(kde_peak({50}, 33, 86, 5.0) == 50);
    CHECK(kde_peak({42, 48}, 33, 86, 5.0) == 45);  // unimodal midpoint
    CHECK(kde_peak({40, 40, 60}, 33, 86, 5.0) == 40);
    // symmetric pair far apart -> bimodal, tie broken to the smaller mode
    CHECK(kde_peak({40, 60}, 33, 86, 5.0) == 40);
    // window clamps the argmax
    CHECK(kde_peak({40}, 45, 86, 5.0) == 45);
}

TEST_CASE("constant video, T=180: symmetric uniform fallback") {
    SynthSpec spec;
    spec.kind = SynthKind::ConstantColor;
    spec.meta = {32, 32, 180, {25, 1}};
    auto sr = synth(spec);
    auto rgb = to_rgb(sr.frames);
    auto maps = whole_frame_segmentation(sr.meta);
    auto plan = select_keyframes(rgb, maps, {});
    CHECK(plan.keyframes == std::vector<int>{1, 86, 95, 180});
    CHECK(plan.clip_count() == 3);
    CHECK(oracle::select(rgb, maps, {}) == plan.keyframes);
}

TEST_CASE("T=2 yields the trivial plan") {
    SynthSpec spec;
    spec.meta = {16, 16, 2, {25, 1}};
    auto sr = synth(spec);
    auto plan =
        select_keyframes(to_rgb(sr.frames), whole_frame_segmentation(sr.meta), {});
    CHECK(plan.keyframes == std::vector<int>{1, 2});
}

TEST_CASE("color flip at t=100, T=180: a keyframe lands near the flip") {
    SynthSpec spec;
    spec.kind = SynthKind::ColorFlip;
    spec.meta = {32, 32, 180, {25, 1}};
    spec.flip_at = 100;
    spec.stable_sixteenths = 1;
    auto sr = synth(spec);
    auto rgb = to_rgb(sr.frames);
    auto plan = select_keyframes(rgb, sr.masks, {});

    bool near_flip = false;
    for (int k : plan.keyframes) near_flip |= std::abs(k - 100) <= 5;
    CHECK(near_flip);
    CHECK(plan.keyframes.front() == 1);
    CHECK(plan.keyframes.back() == 180);
    CHECK(oracle::select(rgb, sr.masks, {}) == plan.keyframes);

    // tau = 1.0 degenerates to uniform w_max spacing (flip distance < 1)
    SelectionParams uniform;
    uniform.tau = 1.0;
    auto uplan = select_keyframes(rgb, sr.masks, uniform);
    CHECK(uplan.keyframes == std::vector<int>{1, 86, 95, 180});
}

TEST_CASE("plan invariants across a randomized corpus") {
    for (uint64_t seed : {3u, 4u, 5u}) {
        SynthSpec spec;
        spec.kind = SynthKind::MovingBlock;
        spec.meta = {32, 32, 140, {25, 1}};
        spec.seed = seed;
        spec.luma_noise_amplitude = 6;
        auto sr = synth(spec);
        auto rgb = to_rgb(sr.frames);
        auto plan = select_keyframes(rgb, sr.masks, {});
        REQUIRE(plan.keyframes.size() >= 2);
        CHECK(plan.keyframes.front() == 1);
        CHECK(plan.keyframes.back() == 140);
        SelectionParams p;
        for (size_t i = 1; i < plan.keyframes.size(); ++i) {
            int gap = plan.keyframes[i] - plan.keyframes[i - 1];
            CHECK(gap >= 1);
            CHECK(gap <= p.w_max + int(p.kde_bandwidth));
        }
        CHECK(oracle::select(rgb, sr.masks, {}) == plan.keyframes);
    }
}
