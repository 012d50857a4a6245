#include "cgvc/synth.hpp"

#include <algorithm>
#include <random>

#include "cgvc/errors.hpp"

namespace cgvc {

namespace {

void fill_rect(Frame& f, int x0, int y0, int w, int h, YuvColor c) {
    int x1 = std::min(x0 + w, f.y.w), y1 = std::min(y0 + h, f.y.h);
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) f.y.at(x, y) = c.y;
    for (int y = y0 / 2; y < y1 / 2; ++y)
        for (int x = x0 / 2; x < x1 / 2; ++x) {
            f.u.at(x, y) = c.u;
            f.v.at(x, y) = c.v;
        }
}

void mark_rect(LabelMap& m, int x0, int y0, int w, int h, uint8_t id) {
    int x1 = std::min(x0 + w, m.labels.w), y1 = std::min(y0 + h, m.labels.h);
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) m.labels.at(x, y) = id;
}

}  // namespace

SynthResult synth(const SynthSpec& spec) {
    if (!spec.meta.valid()) throw InputError("synth: invalid video meta");
    if (spec.kind == SynthKind::ColorFlip || spec.kind == SynthKind::MovingBlock) {
        if (spec.obj_x % 2 || spec.obj_y % 2 || spec.obj_w % 2 || spec.obj_h % 2)
            throw InputError("synth: object rectangle must be chroma-aligned");
        if (spec.obj_w < 2 || spec.obj_h < 2)
            throw InputError("synth: object rectangle is empty");
    }
    const VideoMeta& meta = spec.meta;
    SynthResult out;
    out.meta = meta;
    std::mt19937_64 rng(spec.seed);

    for (int t = 1; t <= meta.frame_count; ++t) {
        Frame f = make_frame(meta, t, spec.background.y, spec.background.u,
                             spec.background.v);
        LabelMap m{t, Plane(meta.width, meta.height, 0)};

        switch (spec.kind) {
            case SynthKind::ConstantColor:
                mark_rect(m, 0, 0, meta.width, meta.height, 1);
                break;
            case SynthKind::ColorFlip: {
                YuvColor c = (spec.flip_at > 0 && t >= spec.flip_at) ? spec.flip_color
                                                                    : spec.obj_color;
                fill_rect(f, spec.obj_x, spec.obj_y, spec.obj_w, spec.obj_h, c);
                if (spec.stable_sixteenths > 0) {
                    // left-most strip of the object never flips
                    int sw = spec.obj_w * spec.stable_sixteenths / 16;
                    sw -= sw % 2;
                    fill_rect(f, spec.obj_x, spec.obj_y, sw, spec.obj_h, spec.obj_color);
                }
                mark_rect(m, spec.obj_x, spec.obj_y, spec.obj_w, spec.obj_h, 1);
                break;
            }
            case SynthKind::MovingBlock: {
                int dx = 2 * ((spec.vel_x * (t - 1)) / 2);
                int dy = 2 * ((spec.vel_y * (t - 1)) / 2);
                int x = (spec.obj_x + dx) % std::max(1, meta.width - spec.obj_w);
                int y = (spec.obj_y + dy) % std::max(1, meta.height - spec.obj_h);
                x -= x % 2;
                y -= y % 2;
                fill_rect(f, x, y, spec.obj_w, spec.obj_h, spec.obj_color);
                mark_rect(m, x, y, spec.obj_w, spec.obj_h, 1);
                break;
            }
            case SynthKind::Noise: {
                std::uniform_int_distribution<int> dy(spec.noise_y_lo, spec.noise_y_hi);
                for (uint8_t& s : f.y.data) s = static_cast<uint8_t>(dy(rng));
                if (spec.noise_chroma) {
                    std::uniform_int_distribution<int> dc(64, 192);
                    for (uint8_t& s : f.u.data) s = static_cast<uint8_t>(dc(rng));
                    for (uint8_t& s : f.v.data) s = static_cast<uint8_t>(dc(rng));
                }
                mark_rect(m, 0, 0, meta.width, meta.height, 1);
                break;
            }
        }

        if (spec.luma_noise_amplitude > 0) {
            std::uniform_int_distribution<int> dn(-spec.luma_noise_amplitude,
                                                  spec.luma_noise_amplitude);
            for (uint8_t& s : f.y.data)
                s = static_cast<uint8_t>(std::clamp(int(s) + dn(rng), 0, 255));
        }

        out.frames.push_back(std::move(f));
        out.masks.push_back(std::move(m));
    }
    return out;
}

}  // namespace cgvc
