#include "cgvc/control_prior.hpp"

#include <algorithm>
#include <cstdlib>

#include "cgvc/errors.hpp"

namespace cgvc {

PriorFrame extract_luma_prior(const Frame& frame) {
    return {frame.index, frame.y, PriorKind::Luma};
}

PriorFrame extract_edge_prior(const Frame& frame, int threshold) {
    if (threshold < 1 || threshold > 1020)
        throw InputError("edge threshold must be in [1, 1020]");
    const int w = frame.y.w, h = frame.y.h;
    PriorFrame out{frame.index, Plane(w, h), PriorKind::Edge};
    auto sample = [&](int x, int y) {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return static_cast<int>(frame.y.at(x, y));
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int gx = sample(x + 1, y - 1) + 2 * sample(x + 1, y) + sample(x + 1, y + 1) -
                     sample(x - 1, y - 1) - 2 * sample(x - 1, y) - sample(x - 1, y + 1);
            int gy = sample(x - 1, y + 1) + 2 * sample(x, y + 1) + sample(x + 1, y + 1) -
                     sample(x - 1, y - 1) - 2 * sample(x, y - 1) - sample(x + 1, y - 1);
            out.plane.at(x, y) = std::abs(gx) + std::abs(gy) >= threshold ? 255 : 0;
        }
    }
    return out;
}

Frame prior_to_frame(const PriorFrame& prior) {
    Frame f;
    f.index = prior.index;
    f.y = prior.plane;
    f.u = Plane(prior.plane.w / 2, prior.plane.h / 2, 128);
    f.v = Plane(prior.plane.w / 2, prior.plane.h / 2, 128);
    return f;
}

}  // namespace cgvc
