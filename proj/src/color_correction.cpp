#include "cgvc/color_correction.hpp"

#include <cmath>

#include "cgvc/errors.hpp"

namespace cgvc {

double fixed_to_double(Fixed1616 v) { return v / 65536.0; }

Fixed1616 double_to_fixed(double v) {
    if (v < 0.0) v = 0.0;
    return static_cast<Fixed1616>(std::llround(v * 65536.0));
}

namespace {

struct Moments {
    double mu;
    double sigma;
};

Moments plane_moments(const Plane& p) {
    double sum = 0.0, sumsq = 0.0;
    for (uint8_t s : p.data) {
        sum += s;
        sumsq += double(s) * s;
    }
    double n = static_cast<double>(p.size());
    double mu = sum / n;
    double var = sumsq / n - mu * mu;
    return {mu, var > 0.0 ? std::sqrt(var) : 0.0};
}

uint8_t clamp_round(double v) {
    long r = std::lround(v);
    if (r < 0) return 0;
    if (r > 255) return 255;
    return static_cast<uint8_t>(r);
}

}  // namespace

ColorParams compute_color_params(const std::vector<RgbFrame>& original) {
    ColorParams params;
    params.frames.reserve(original.size());
    for (const RgbFrame& f : original) {
        std::array<ChannelStats, 3> stats;
        const Plane* channels[3] = {&f.r, &f.g, &f.b};
        for (int c = 0; c < 3; ++c) {
            Moments m = plane_moments(*channels[c]);
            stats[c] = {double_to_fixed(m.mu), double_to_fixed(m.sigma)};
        }
        params.frames.push_back(stats);
    }
    return params;
}

RgbFrame color_correct(const RgbFrame& recon,
                       const std::array<ChannelStats, 3>& params) {
    RgbFrame out = recon;
    const Plane* in_channels[3] = {&recon.r, &recon.g, &recon.b};
    Plane* out_channels[3] = {&out.r, &out.g, &out.b};
    constexpr double kSigmaFloor = 1.0 / 65536.0;
    for (int c = 0; c < 3; ++c) {
        double mu_o = fixed_to_double(params[c].mu);
        double sigma_o = fixed_to_double(params[c].sigma);
        Moments m = plane_moments(*in_channels[c]);
        if (m.sigma < kSigmaFloor) {
            uint8_t v = clamp_round(mu_o);
            std::fill(out_channels[c]->data.begin(), out_channels[c]->data.end(), v);
            continue;
        }
        double scale = sigma_o / m.sigma;
        for (size_t i = 0; i < in_channels[c]->size(); ++i)
            out_channels[c]->data[i] =
                clamp_round((in_channels[c]->data[i] - m.mu) * scale + mu_o);
    }
    return out;
}

}  // namespace cgvc
