#include "cgvc/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "cgvc/color_correction.hpp"
#include "cgvc/control_prior.hpp"
#include "cgvc/errors.hpp"
#include "cgvc/frame_io.hpp"
#include "cgvc/generation.hpp"

namespace cgvc {

namespace {

std::vector<Frame> collect_keyframes(const std::vector<Frame>& video,
                                     const KeyframePlan& plan) {
    std::vector<Frame> kfs;
    kfs.reserve(plan.keyframes.size());
    for (int k : plan.keyframes) kfs.push_back(video[k - 1]);
    return kfs;
}

std::vector<Frame> collect_prior_frames(const std::vector<Frame>& video,
                                        const KeyframePlan& plan,
                                        const EncodeConfig& config) {
    std::vector<Frame> priors;
    for (const Frame& f : video) {
        if (plan.is_keyframe(f.index)) continue;
        PriorFrame p = config.prior == PriorKind::Luma
                           ? extract_luma_prior(f)
                           : extract_edge_prior(f, config.edge_threshold);
        priors.push_back(prior_to_frame(p));
    }
    return priors;
}

}  // namespace

CgvcContainer encode(const std::vector<Frame>& video, const VideoMeta& meta,
                     const std::vector<LabelMap>& masks, const EncodeConfig& config) {
    if (static_cast<int>(video.size()) != meta.frame_count ||
        masks.size() != video.size())
        throw InputError("encode: video, meta and masks disagree on frame count");

    EncodeConfig cfg = config;
    if (config.target_rate_kbps) {
        auto alloc = plan_rate_allocation(video, meta, masks, config);
        cfg.kf_codec.quality = alloc.kf_quality;
        cfg.prior_codec.quality = alloc.prior_quality;
    }

    auto rgb = to_rgb(video);
    CgvcContainer c;
    c.meta = meta;
    c.prior_kind = cfg.prior;
    c.plan = select_keyframes(rgb, masks, cfg.selection);

    c.b_k = encode_stream(collect_keyframes(video, c.plan), cfg.kf_codec, meta.fps);
    auto prior_frames = collect_prior_frames(video, c.plan, cfg);
    if (!prior_frames.empty()) {
        c.b_p = encode_stream(prior_frames, cfg.prior_codec, meta.fps);
    } else {
        c.b_p.codec_id = static_cast<uint8_t>(cfg.prior_codec.backend);
        c.b_p.width = meta.width;
        c.b_p.height = meta.height;
    }
    c.codec_id = c.b_k.codec_id;
    c.b_c = compute_color_params(rgb);
    return c;
}

std::vector<Frame> decode(const CgvcContainer& c, const GeneratorConfig& generator,
                          const CodecSpec& kf_codec, const CodecSpec& prior_codec) {
    const KeyframePlan& plan = c.plan;
    const int t_total = c.meta.frame_count;
    if (plan.keyframes.size() < 2 || plan.keyframes.front() != 1 ||
        plan.keyframes.back() != t_total)
        throw PlanOutOfRange("keyframe plan must span [1, T]");

    auto kfs = decode_stream(c.b_k, kf_codec, c.meta.fps);
    if (kfs.size() != plan.keyframes.size())
        throw PlanStreamMismatch("B_K holds " + std::to_string(kfs.size()) +
                                 " frames for a plan of " +
                                 std::to_string(plan.keyframes.size()));
    std::vector<Frame> prior_frames;
    const int non_kf = t_total - static_cast<int>(plan.keyframes.size());
    if (non_kf > 0) {
        prior_frames = decode_stream(c.b_p, prior_codec, c.meta.fps);
        if (static_cast<int>(prior_frames.size()) != non_kf)
            throw PlanStreamMismatch("B_P holds " + std::to_string(prior_frames.size()) +
                                     " priors, expected " + std::to_string(non_kf));
    }

    std::vector<Frame> out(t_total);
    for (size_t i = 0; i < kfs.size(); ++i) {
        out[plan.keyframes[i] - 1] = kfs[i];
        out[plan.keyframes[i] - 1].index = plan.keyframes[i];
    }

    size_t prior_pos = 0;
    for (int clip = 1; clip < static_cast<int>(plan.keyframes.size()); ++clip) {
        int kf = plan.keyframes[clip - 1];
        int kl = plan.keyframes[clip];
        ClipGenRequest req;
        req.first_kf = out[kf - 1];
        req.last_kf = out[kl - 1];
        req.span_first = kf;
        req.span_last = kl;
        for (int t = kf + 1; t < kl; ++t) {
            const Frame& pf = prior_frames[prior_pos++];
            req.priors.push_back({t, pf.y, c.prior_kind});
        }
        auto generated = generator.external_cmd.empty()
                             ? baseline_generate(req)
                             : external_generate(req, generator.external_cmd,
                                                 generator.scratch_dir);
        for (Frame& g : generated) out[g.index - 1] = std::move(g);
    }

    // Frame-level color correction in RGB. The corrected chroma replaces the
    // reconstruction's; luma is the transmitted prior and is kept verbatim.
    for (int t = 1; t <= t_total; ++t) {
        RgbFrame rgb = yuv_to_rgb(out[t - 1]);
        RgbFrame corrected = color_correct(rgb, c.b_c.frames[t - 1]);
        if (corrected == rgb) continue;
        Frame adjusted = rgb_to_yuv(corrected);
        out[t - 1].u = std::move(adjusted.u);
        out[t - 1].v = std::move(adjusted.v);
    }
    return out;
}

std::vector<Frame> decode(const CgvcContainer& c, const GeneratorConfig& generator) {
    auto spec_for = [](const EncodedStream& s) {
        CodecSpec spec;
        spec.backend = static_cast<CodecBackend>(s.codec_id);
        if (spec.backend != CodecBackend::Internal)
            throw InputError("external streams need explicit codec specs to decode");
        return spec;
    };
    return decode(c, generator, spec_for(c.b_k), spec_for(c.b_p));
}

RateAllocation plan_rate_allocation(const std::vector<Frame>& video,
                                    const VideoMeta& meta,
                                    const std::vector<LabelMap>& masks,
                                    const EncodeConfig& config) {
    if (!config.target_rate_kbps || *config.target_rate_kbps <= 0.0)
        throw InputError("plan_rate_allocation requires a positive target rate");
    if (config.kf_codec.backend != CodecBackend::Internal ||
        config.prior_codec.backend != CodecBackend::Internal)
        throw InputError("rate allocation searches the internal codec only");

    auto rgb = to_rgb(video);
    KeyframePlan plan = select_keyframes(rgb, masks, config.selection);
    auto kf_frames = collect_keyframes(video, plan);
    auto prior_frames = collect_prior_frames(video, plan, config);

    auto rate_at = [&](const std::vector<Frame>& frames, int q) {
        CodecSpec spec;
        spec.backend = CodecBackend::Internal;
        spec.quality = q;
        return measure_rate_kbps(encode_stream(frames, spec, meta.fps), meta.fps,
                                 meta.frame_count);
    };

    // rate is monotone non-increasing in q: pick the best quality (smallest q)
    // whose rate does not exceed the target, clamped at the knob limits
    auto search = [&](const std::vector<Frame>& frames, double target) {
        struct R {
            int q;
            double kbps;
        };
        if (frames.empty()) return R{1, 0.0};
        double at_best = rate_at(frames, 1);
        if (at_best <= target) return R{1, at_best};
        double at_worst = rate_at(frames, 64);
        if (at_worst > target * 1.1) throw UnreachableRate(at_worst, at_best);
        int lo = 1, hi = 64;  // rate(lo) > target >= rate(hi)
        double hi_rate = at_worst;
        while (hi - lo > 1) {
            int mid = (lo + hi) / 2;
            double r = rate_at(frames, mid);
            if (r <= target) {
                hi = mid;
                hi_rate = r;
            } else {
                lo = mid;
            }
        }
        return R{hi, hi_rate};
    };

    double target = *config.target_rate_kbps;
    auto prior_r = search(prior_frames, config.luma_fraction * target);
    auto kf_r = search(kf_frames, (1.0 - config.luma_fraction) * target);
    return {kf_r.q, prior_r.q, kf_r.kbps, prior_r.kbps};
}

}  // namespace cgvc
