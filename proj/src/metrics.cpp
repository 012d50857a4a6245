#include "cgvc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "cgvc/errors.hpp"

namespace cgvc {

namespace {

void check_same_dims(const RgbFrame& a, const RgbFrame& b) {
    if (a.r.w != b.r.w || a.r.h != b.r.h)
        throw InputError("metric inputs have mismatched dimensions");
}

double frame_sse(const RgbFrame& a, const RgbFrame& b) {
    double sse = 0.0;
    const Plane* pa[3] = {&a.r, &a.g, &a.b};
    const Plane* pb[3] = {&b.r, &b.g, &b.b};
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < pa[c]->size(); ++i) {
            double d = double(pa[c]->data[i]) - pb[c]->data[i];
            sse += d * d;
        }
    return sse;
}

double mse_to_psnr(double mse) {
    if (mse <= 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace

double psnr_rgb(const RgbFrame& a, const RgbFrame& b) {
    check_same_dims(a, b);
    return mse_to_psnr(frame_sse(a, b) / (3.0 * a.r.size()));
}

double psnr_rgb_sequence(const std::vector<RgbFrame>& a,
                         const std::vector<RgbFrame>& b) {
    if (a.size() != b.size() || a.empty())
        throw InputError("sequence PSNR requires equal non-empty sequences");
    double sse = 0.0, n = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        check_same_dims(a[i], b[i]);
        sse += frame_sse(a[i], b[i]);
        n += 3.0 * a[i].r.size();
    }
    return mse_to_psnr(sse / n);
}

double chroma_mse(const std::vector<Frame>& a, const std::vector<Frame>& b) {
    if (a.size() != b.size() || a.empty())
        throw InputError("chroma MSE requires equal non-empty sequences");
    double sse = 0.0, n = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        for (auto [pa, pb] : {std::pair{&a[i].u, &b[i].u}, {&a[i].v, &b[i].v}}) {
            if (pa->w != pb->w || pa->h != pb->h)
                throw InputError("chroma MSE inputs have mismatched dimensions");
            for (size_t k = 0; k < pa->size(); ++k) {
                double d = double(pa->data[k]) - pb->data[k];
                sse += d * d;
            }
            n += static_cast<double>(pa->size());
        }
    }
    return sse / n;
}

// ---------------------------------------------------------------------------
// MS-SSIM
// ---------------------------------------------------------------------------

namespace {

struct Image {
    int w = 0, h = 0;
    std::vector<double> px;

    double at(int x, int y) const { return px[static_cast<size_t>(y) * w + x]; }
    double& at(int x, int y) { return px[static_cast<size_t>(y) * w + x]; }
};

Image luma_of(const RgbFrame& f) {
    Image img;
    img.w = f.r.w;
    img.h = f.r.h;
    img.px.resize(f.r.size());
    for (size_t i = 0; i < f.r.size(); ++i)
        img.px[i] = 0.299 * f.r.data[i] + 0.587 * f.g.data[i] + 0.114 * f.b.data[i];
    return img;
}

std::vector<double> gaussian_kernel(int radius, double sigma) {
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
        sum += k[i + radius];
    }
    for (double& v : k) v /= sum;
    return k;
}

// separable valid-region filtering
Image filter_valid(const Image& in, const std::vector<double>& k) {
    const int radius = static_cast<int>(k.size() / 2);
    Image tmp;  // horizontal pass, valid in x
    tmp.w = in.w - 2 * radius;
    tmp.h = in.h;
    tmp.px.resize(static_cast<size_t>(tmp.w) * tmp.h);
    for (int y = 0; y < in.h; ++y)
        for (int x = 0; x < tmp.w; ++x) {
            double s = 0.0;
            for (int i = 0; i < static_cast<int>(k.size()); ++i)
                s += k[i] * in.at(x + i, y);
            tmp.at(x, y) = s;
        }
    Image out;
    out.w = tmp.w;
    out.h = in.h - 2 * radius;
    out.px.resize(static_cast<size_t>(out.w) * out.h);
    for (int y = 0; y < out.h; ++y)
        for (int x = 0; x < out.w; ++x) {
            double s = 0.0;
            for (int i = 0; i < static_cast<int>(k.size()); ++i)
                s += k[i] * tmp.at(x, y + i);
            out.at(x, y) = s;
        }
    return out;
}

Image downsample2(const Image& in) {
    Image out;
    out.w = in.w / 2;
    out.h = in.h / 2;
    out.px.resize(static_cast<size_t>(out.w) * out.h);
    for (int y = 0; y < out.h; ++y)
        for (int x = 0; x < out.w; ++x)
            out.at(x, y) = 0.25 * (in.at(2 * x, 2 * y) + in.at(2 * x + 1, 2 * y) +
                                   in.at(2 * x, 2 * y + 1) + in.at(2 * x + 1, 2 * y + 1));
    return out;
}

struct SsimScale {
    double luminance;  // mean l term
    double contrast;   // mean cs term
};

SsimScale ssim_scale(const Image& a, const Image& b) {
    constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
    constexpr double kC2 = (0.03 * 255) * (0.03 * 255);
    auto k = gaussian_kernel(5, 1.5);

    Image mu1 = filter_valid(a, k), mu2 = filter_valid(b, k);
    Image a2 = a, b2 = b, ab = a;
    for (size_t i = 0; i < a.px.size(); ++i) {
        a2.px[i] = a.px[i] * a.px[i];
        b2.px[i] = b.px[i] * b.px[i];
        ab.px[i] = a.px[i] * b.px[i];
    }
    Image s11 = filter_valid(a2, k), s22 = filter_valid(b2, k), s12 = filter_valid(ab, k);

    double lum_sum = 0.0, cs_sum = 0.0;
    for (size_t i = 0; i < mu1.px.size(); ++i) {
        double m1 = mu1.px[i], m2 = mu2.px[i];
        double var1 = s11.px[i] - m1 * m1;
        double var2 = s22.px[i] - m2 * m2;
        double cov = s12.px[i] - m1 * m2;
        lum_sum += (2 * m1 * m2 + kC1) / (m1 * m1 + m2 * m2 + kC1);
        cs_sum += (2 * cov + kC2) / (var1 + var2 + kC2);
    }
    double n = static_cast<double>(mu1.px.size());
    return {lum_sum / n, cs_sum / n};
}

constexpr double kMsssimWeights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

}  // namespace

double ms_ssim(const RgbFrame& a, const RgbFrame& b) {
    check_same_dims(a, b);
    if (a.r.w < 176 || a.r.h < 176)
        throw InputError("MS-SSIM requires dimensions of at least 176x176");
    Image ia = luma_of(a), ib = luma_of(b);
    double score = 1.0;
    for (int scale = 0; scale < 5; ++scale) {
        SsimScale s = ssim_scale(ia, ib);
        if (scale < 4) {
            score *= std::pow(std::max(s.contrast, 0.0), kMsssimWeights[scale]);
            ia = downsample2(ia);
            ib = downsample2(ib);
        } else {
            score *= std::pow(std::max(s.luminance * s.contrast, 0.0),
                              kMsssimWeights[scale]);
        }
    }
    return score;
}

double ms_ssim_sequence(const std::vector<RgbFrame>& a,
                        const std::vector<RgbFrame>& b) {
    if (a.size() != b.size() || a.empty())
        throw InputError("sequence MS-SSIM requires equal non-empty sequences");
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) sum += ms_ssim(a[i], b[i]);
    return sum / a.size();
}

// ---------------------------------------------------------------------------
// Bjontegaard deltas
// ---------------------------------------------------------------------------

namespace {

// Monotone piecewise cubic (Fritsch-Carlson) through (x, y), x strictly
// increasing. Slopes fall back to secants for 2-point curves.
struct Pchip {
    std::vector<double> x, y, d;

    static Pchip fit(std::vector<double> xs, std::vector<double> ys) {
        const size_t n = xs.size();
        Pchip p;
        p.x = std::move(xs);
        p.y = std::move(ys);
        p.d.resize(n);
        std::vector<double> h(n - 1), delta(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) {
            h[i] = p.x[i + 1] - p.x[i];
            delta[i] = (p.y[i + 1] - p.y[i]) / h[i];
        }
        if (n == 2) {
            p.d[0] = p.d[1] = delta[0];
            return p;
        }
        for (size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                p.d[i] = 0.0;
            } else {
                double w1 = 2 * h[i] + h[i - 1];
                double w2 = h[i] + 2 * h[i - 1];
                p.d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        auto endpoint = [](double h0, double h1, double d0, double d1) {
            double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (d * d0 <= 0.0) return 0.0;
            if (d0 * d1 <= 0.0 && std::fabs(d) > 3 * std::fabs(d0)) return 3 * d0;
            return d;
        };
        p.d[0] = endpoint(h[0], h[1], delta[0], delta[1]);
        p.d[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        return p;
    }

    // Integral from x[seg] to xe (xe within segment seg) of the Hermite cubic.
    double segment_integral(size_t seg, double xe) const {
        double h = x[seg + 1] - x[seg];
        double t = (xe - x[seg]) / h;
        double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
        // antiderivatives of the Hermite basis on [0,1], scaled by h
        double h00 = t - t3 + t4 / 2.0;
        double h10 = t2 / 2.0 - 2.0 * t3 / 3.0 + t4 / 4.0;
        double h01 = t3 - t4 / 2.0;
        double h11 = -t3 / 3.0 + t4 / 4.0;
        return h * (y[seg] * h00 + h * d[seg] * h10 + y[seg + 1] * h01 +
                    h * d[seg + 1] * h11);
    }

    double integral(double lo, double hi) const {
        double total = 0.0;
        for (size_t seg = 0; seg + 1 < x.size(); ++seg) {
            double a = std::max(lo, x[seg]);
            double b = std::min(hi, x[seg + 1]);
            if (b <= a) continue;
            total += segment_integral(seg, b) - segment_integral(seg, a);
        }
        return total;
    }
};

// Sorted (metric, log10 rate) pairs keyed by `key` selecting x.
struct CurveData {
    std::vector<double> x, y;
};

CurveData curve_data(const RdCurve& c, bool metric_as_x) {
    if (c.points.size() < 2) throw DegenerateCurve(c.label + ": fewer than 2 points");
    std::vector<std::pair<double, double>> pts;
    for (const RdPoint& p : c.points) {
        if (!(p.rate_kbps > 0.0))
            throw DegenerateCurve(c.label + ": non-positive rate");
        double lr = std::log10(p.rate_kbps);
        pts.emplace_back(metric_as_x ? p.metric : lr, metric_as_x ? lr : p.metric);
    }
    std::sort(pts.begin(), pts.end());
    CurveData d;
    for (size_t i = 0; i < pts.size(); ++i) {
        if (i > 0 && pts[i].first == pts[i - 1].first)
            throw DegenerateCurve(c.label + ": duplicate x values, non-invertible");
        d.x.push_back(pts[i].first);
        d.y.push_back(pts[i].second);
    }
    return d;
}

BdResult bd_delta(const RdCurve& anchor, const RdCurve& test, bool metric_as_x) {
    CurveData da = curve_data(anchor, metric_as_x);
    CurveData dt = curve_data(test, metric_as_x);
    double lo = std::max(da.x.front(), dt.x.front());
    double hi = std::min(da.x.back(), dt.x.back());
    if (!(hi > lo)) return BdResult::not_applicable();
    Pchip pa = Pchip::fit(da.x, da.y);
    Pchip pt = Pchip::fit(dt.x, dt.y);
    double avg = (pt.integral(lo, hi) - pa.integral(lo, hi)) / (hi - lo);
    BdResult r;
    r.applicable = true;
    r.degraded = anchor.points.size() < 4 || test.points.size() < 4;
    r.value = metric_as_x ? (std::pow(10.0, avg) - 1.0) * 100.0 : avg;
    return r;
}

}  // namespace

BdResult bd_rate(const RdCurve& anchor, const RdCurve& test) {
    return bd_delta(anchor, test, /*metric_as_x=*/true);
}

BdResult bd_metric(const RdCurve& anchor, const RdCurve& test) {
    return bd_delta(anchor, test, /*metric_as_x=*/false);
}

// ---------------------------------------------------------------------------
// RD outputs
// ---------------------------------------------------------------------------

void emit_rd_outputs(const std::vector<RdCurve>& curves, const std::string& out_dir) {
    if (curves.empty()) throw InputError("no curves to emit");
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream csv(std::filesystem::path(out_dir) / "curves.csv");
        csv << "label,rate_kbps,metric\n";
        for (const RdCurve& c : curves)
            for (const RdPoint& p : c.points)
                csv << c.label << "," << p.rate_kbps << "," << p.metric << "\n";
        if (!csv) throw InputError("I/O failure writing curves.csv");
    }

    double rmin = 1e300, rmax = -1e300, mmin = 1e300, mmax = -1e300;
    for (const RdCurve& c : curves)
        for (const RdPoint& p : c.points) {
            rmin = std::min(rmin, p.rate_kbps);
            rmax = std::max(rmax, p.rate_kbps);
            mmin = std::min(mmin, p.metric);
            mmax = std::max(mmax, p.metric);
        }
    if (rmax <= rmin) rmax = rmin + 1.0;
    if (mmax <= mmin) mmax = mmin + 1.0;
    const int kW = 640, kH = 480, kMargin = 60;
    auto sx = [&](double r) {
        return kMargin + (r - rmin) / (rmax - rmin) * (kW - 2 * kMargin);
    };
    auto sy = [&](double m) {
        return kH - kMargin - (m - mmin) / (mmax - mmin) * (kH - 2 * kMargin);
    };
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                             "#ff7f0e", "#8c564b"};

    std::ofstream svg(std::filesystem::path(out_dir) / "curves.svg");
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
        << "\" height=\"" << kH << "\">\n";
    svg << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << kMargin << "\" y1=\"" << kH - kMargin << "\" x2=\""
        << kW - kMargin << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
        << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 15
        << "\" text-anchor=\"middle\">rate (kbps)</text>\n";
    svg << "<text x=\"18\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << kH / 2 << ")\">" << curves.front().metric_kind << "</text>\n";
    for (size_t i = 0; i < curves.size(); ++i) {
        const char* color = palette[i % 6];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const RdPoint& p : curves[i].points)
            svg << sx(p.rate_kbps) << "," << sy(p.metric) << " ";
        svg << "\"/>\n";
        svg << "<text x=\"" << kW - kMargin + 5 << "\" y=\"" << kMargin + 16 * i
            << "\" fill=\"" << color << "\" font-size=\"12\">" << curves[i].label
            << "</text>\n";
    }
    svg << "</svg>\n";
    if (!svg) throw InputError("I/O failure writing curves.svg");
}

std::vector<RdCurve> read_rd_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<RdCurve> curves;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream iss(line);
        std::string label, rate, metric;
        if (!std::getline(iss, label, ',') || !std::getline(iss, rate, ',') ||
            !std::getline(iss, metric, ','))
            throw InputError(path + ": malformed CSV row: " + line);
        auto it = std::find_if(curves.begin(), curves.end(),
                               [&](const RdCurve& c) { return c.label == label; });
        if (it == curves.end()) {
            curves.push_back({label, {}, "metric", true});
            it = curves.end() - 1;
        }
        it->points.push_back({std::stod(rate), std::stod(metric)});
    }
    for (RdCurve& c : curves)
        std::sort(c.points.begin(), c.points.end(),
                  [](const RdPoint& a, const RdPoint& b) {
                      return a.rate_kbps < b.rate_kbps;
                  });
    return curves;
}

}  // namespace cgvc
