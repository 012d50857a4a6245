// cgvc: encode/decode pipeline, synthetic corpora and evaluation in one binary.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cgvc/config.hpp"
#include "cgvc/errors.hpp"
#include "cgvc/frame_io.hpp"
#include "cgvc/metrics.hpp"
#include "cgvc/pipeline.hpp"
#include "cgvc/synth.hpp"
#include "json.hpp"

using namespace cgvc;
using nlohmann::json;

namespace {

struct VideoInput {
    std::string path;
    int width = 0, height = 0;
    std::string fps = "25:1";
};

void add_video_flags(CLI::App* cmd, VideoInput& in, const char* flag = "--input") {
    cmd->add_option(flag, in.path, "video file (.y4m, or raw .yuv with --width/--height)")
        ->required();
    cmd->add_option("--width", in.width, "raw input width");
    cmd->add_option("--height", in.height, "raw input height");
    cmd->add_option("--fps", in.fps, "raw input frame rate num:den");
}

Rational parse_fps(const std::string& s) {
    Rational r;
    auto colon = s.find(':');
    try {
        if (colon == std::string::npos) {
            r.num = std::stoul(s);
            r.den = 1;
        } else {
            r.num = std::stoul(s.substr(0, colon));
            r.den = std::stoul(s.substr(colon + 1));
        }
    } catch (const std::exception&) {
        throw InputError("bad frame rate: " + s);
    }
    return r;
}

std::pair<VideoMeta, std::vector<Frame>> load_video(const VideoInput& in) {
    if (in.width > 0 || in.height > 0) {
        VideoMeta meta{in.width, in.height, 0, parse_fps(in.fps)};
        return read_video(in.path, meta);
    }
    return read_video(in.path);
}

// --segmentation {masks|whole|grid:RxC}; --masks <dir> implies masks mode
std::vector<LabelMap> load_masks(const std::string& masks_dir,
                                 const std::string& segmentation,
                                 const VideoMeta& meta) {
    std::string mode = segmentation;
    if (mode.empty()) mode = masks_dir.empty() ? "whole" : "masks";
    if (mode == "masks") {
        if (masks_dir.empty()) throw InputError("--segmentation masks needs --masks");
        return load_label_maps(masks_dir, meta);
    }
    if (mode == "whole") return whole_frame_segmentation(meta);
    if (mode.rfind("grid:", 0) == 0) {
        auto x = mode.find('x', 5);
        if (x == std::string::npos) throw InputError("grid spec must be grid:RxC");
        int rows = std::stoi(mode.substr(5, x - 5));
        int cols = std::stoi(mode.substr(x + 1));
        return grid_segmentation(meta, rows, cols);
    }
    throw InputError("unknown segmentation mode: " + mode);
}

CodecSpec parse_codec(const std::string& s, const Config& cfg,
                      const std::string& scratch) {
    CodecSpec spec;
    spec.scratch_dir = scratch;
    if (s.rfind("internal", 0) == 0) {
        spec.backend = CodecBackend::Internal;
        auto colon = s.find(':');
        if (colon != std::string::npos) {
            if (s[colon + 1] != 'q') throw InputError("internal codec spec is internal:qN");
            spec.quality = std::stoi(s.substr(colon + 2));
        }
        if (spec.quality < 1 || spec.quality > 64)
            throw InputError("internal quality must be in [1, 64]");
        return spec;
    }
    if (s == "external") {
        spec.backend = CodecBackend::External;
        spec.encode_cmd = cfg.get("codec.external.encode_cmd");
        spec.decode_cmd = cfg.get("codec.external.decode_cmd");
        if (spec.encode_cmd.empty() || spec.decode_cmd.empty())
            throw InputError("external codec needs [codec.external] encode_cmd/decode_cmd");
        spec.quality = std::stoi(cfg.get("codec.external.qp", "32"));
        return spec;
    }
    throw InputError("unknown codec: " + s);
}

void write_bytes(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

std::vector<uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), {});
    return bytes;
}

struct SweepRow {
    int w_max;
    double tau;
    int quality;
    double rate_kbps;
    double psnr;
    double chroma;
};

int run(int argc, char** argv) {
    CLI::App app{"controllable generative video compression toolkit"};
    app.require_subcommand(1);
    int jobs = 0;
    app.add_option("--jobs", jobs, "worker bound (processing is frame-sequential)");

    // ---- synth ----
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
    SynthSpec sspec;
    std::string kind = "constant", synth_out, synth_masks;
    int fps_num = 25;
    synth_cmd->add_option("--kind", kind, "constant|color-flip|moving-block|noise");
    synth_cmd->add_option("--width", sspec.meta.width);
    synth_cmd->add_option("--height", sspec.meta.height);
    synth_cmd->add_option("--frames", sspec.meta.frame_count);
    synth_cmd->add_option("--fps", fps_num);
    synth_cmd->add_option("--seed", sspec.seed);
    synth_cmd->add_option("--flip-at", sspec.flip_at);
    synth_cmd->add_option("--stable-sixteenths", sspec.stable_sixteenths);
    synth_cmd->add_option("--vel-x", sspec.vel_x);
    synth_cmd->add_option("--vel-y", sspec.vel_y);
    synth_cmd->add_option("--luma-noise", sspec.luma_noise_amplitude);
    synth_cmd->add_option("--out", synth_out)->required();
    synth_cmd->add_option("--masks-out", synth_masks);

    // ---- select-keyframes ----
    auto* sel_cmd = app.add_subcommand("select-keyframes", "compute a keyframe plan");
    VideoInput sel_in;
    std::string sel_masks, sel_seg, sel_out;
    SelectionParams sel_params;
    add_video_flags(sel_cmd, sel_in);
    sel_cmd->add_option("--masks", sel_masks);
    sel_cmd->add_option("--segmentation", sel_seg, "masks|whole|grid:RxC");
    sel_cmd->add_option("--w-min", sel_params.w_min);
    sel_cmd->add_option("--w-max", sel_params.w_max);
    sel_cmd->add_option("--tau", sel_params.tau);
    sel_cmd->add_flag("--candidate-dedup", sel_params.candidate_dedup);
    sel_cmd->add_option("--out", sel_out)->required();

    // ---- encode ----
    auto* enc_cmd = app.add_subcommand("encode", "encode a video to a .cgvc bitstream");
    VideoInput enc_in;
    std::string enc_masks, enc_seg, enc_out, enc_prior = "luma";
    std::string enc_codec = "internal:q1", enc_kf_codec, enc_prior_codec;
    std::string config_path, scratch_dir;
    EncodeConfig enc_cfg;
    double target_rate = 0.0;
    add_video_flags(enc_cmd, enc_in);
    enc_cmd->add_option("--masks", enc_masks);
    enc_cmd->add_option("--segmentation", enc_seg, "masks|whole|grid:RxC");
    enc_cmd->add_option("--w-min", enc_cfg.selection.w_min);
    enc_cmd->add_option("--w-max", enc_cfg.selection.w_max);
    enc_cmd->add_option("--tau", enc_cfg.selection.tau);
    enc_cmd->add_flag("--candidate-dedup", enc_cfg.selection.candidate_dedup);
    enc_cmd->add_option("--prior", enc_prior, "luma|edge");
    enc_cmd->add_option("--edge-threshold", enc_cfg.edge_threshold);
    enc_cmd->add_option("--codec", enc_codec, "internal:qN|external");
    enc_cmd->add_option("--kf-codec", enc_kf_codec, "override for keyframes");
    enc_cmd->add_option("--prior-codec", enc_prior_codec, "override for priors");
    enc_cmd->add_option("--target-rate", target_rate, "total kbps budget");
    enc_cmd->add_option("--luma-fraction", enc_cfg.luma_fraction);
    enc_cmd->add_option("--config", config_path);
    enc_cmd->add_option("--scratch-dir", scratch_dir);
    enc_cmd->add_option("--out", enc_out)->required();

    // ---- decode ----
    auto* dec_cmd = app.add_subcommand("decode", "decode a .cgvc bitstream");
    std::string dec_in, dec_out, dec_generator;
    dec_cmd->add_option("--input", dec_in)->required();
    dec_cmd->add_option("--out", dec_out)->required();
    dec_cmd->add_option("--generator", dec_generator, "external generator command");
    dec_cmd->add_option("--config", config_path);
    dec_cmd->add_option("--scratch-dir", scratch_dir);

    // ---- metrics ----
    auto* met_cmd = app.add_subcommand("metrics", "PSNR / MS-SSIM between two videos");
    VideoInput met_ref, met_dist;
    bool met_json = false;
    met_cmd->add_option("--ref", met_ref.path, "reference video")->required();
    met_cmd->add_option("--dist", met_dist.path, "distorted video")->required();
    met_cmd->add_option("--width", met_ref.width, "raw input width (both files)");
    met_cmd->add_option("--height", met_ref.height, "raw input height");
    met_cmd->add_option("--fps", met_ref.fps, "raw input frame rate num:den");
    met_cmd->add_flag("--json", met_json);

    // ---- bdrate ----
    auto* bd_cmd = app.add_subcommand("bdrate", "Bjontegaard deltas between curve CSVs");
    std::string bd_anchor, bd_test, bd_mode = "rate";
    bool bd_json = false;
    bd_cmd->add_option("--anchor", bd_anchor)->required();
    bd_cmd->add_option("--test", bd_test)->required();
    bd_cmd->add_option("--mode", bd_mode, "rate|metric");
    bd_cmd->add_flag("--json", bd_json);

    // ---- rd-plot ----
    auto* rd_cmd = app.add_subcommand("rd-plot", "emit curves.csv + curves.svg");
    std::string rd_in, rd_out_dir;
    rd_cmd->add_option("--input", rd_in, "curve CSV (label,rate_kbps,metric)")->required();
    rd_cmd->add_option("--out-dir", rd_out_dir)->required();

    // ---- sweep ----
    auto* sw_cmd = app.add_subcommand("sweep", "grid search over W_max and tau");
    VideoInput sw_in;
    std::string sw_masks, sw_seg, sw_out;
    std::vector<int> sw_wmax{45, 65, 85, 105};
    std::vector<double> sw_tau{0.2, 0.4, 0.6, 1.0};
    std::vector<int> sw_quality{1};
    add_video_flags(sw_cmd, sw_in);
    sw_cmd->add_option("--masks", sw_masks);
    sw_cmd->add_option("--segmentation", sw_seg, "masks|whole|grid:RxC");
    sw_cmd->add_option("--w-max", sw_wmax)->delimiter(',');
    sw_cmd->add_option("--tau", sw_tau)->delimiter(',');
    sw_cmd->add_option("--quality", sw_quality)->delimiter(',');
    sw_cmd->add_option("--out", sw_out)->required();

    CLI11_PARSE(app, argc, argv);

    Config cfg;
    if (!config_path.empty()) cfg = Config::from_file(config_path);

    if (synth_cmd->parsed()) {
        if (kind == "constant")
            sspec.kind = SynthKind::ConstantColor;
        else if (kind == "color-flip")
            sspec.kind = SynthKind::ColorFlip;
        else if (kind == "moving-block")
            sspec.kind = SynthKind::MovingBlock;
        else if (kind == "noise")
            sspec.kind = SynthKind::Noise;
        else
            throw InputError("unknown corpus kind: " + kind);
        sspec.meta.fps = {static_cast<uint32_t>(fps_num), 1};
        auto result = synth(sspec);
        write_video(result.frames, synth_out, VideoFormat::Y4M, result.meta);
        if (!synth_masks.empty()) write_label_maps(result.masks, synth_masks);
        return 0;
    }

    if (sel_cmd->parsed()) {
        auto [meta, frames] = load_video(sel_in);
        auto masks = load_masks(sel_masks, sel_seg, meta);
        auto plan = select_keyframes(to_rgb(frames), masks, sel_params);
        json doc;
        doc["keyframes"] = plan.keyframes;
        std::ofstream out(sel_out);
        if (!out) throw InputError("cannot open " + sel_out + " for writing");
        out << doc.dump(2) << "\n";
        return 0;
    }

    if (enc_cmd->parsed()) {
        auto [meta, frames] = load_video(enc_in);
        auto masks = load_masks(enc_masks, enc_seg, meta);
        if (enc_prior == "luma")
            enc_cfg.prior = PriorKind::Luma;
        else if (enc_prior == "edge")
            enc_cfg.prior = PriorKind::Edge;
        else
            throw InputError("unknown prior kind: " + enc_prior);
        enc_cfg.kf_codec = parse_codec(
            enc_kf_codec.empty() ? enc_codec : enc_kf_codec, cfg, scratch_dir);
        enc_cfg.prior_codec = parse_codec(
            enc_prior_codec.empty() ? enc_codec : enc_prior_codec, cfg, scratch_dir);
        if (target_rate > 0.0) enc_cfg.target_rate_kbps = target_rate;
        auto container = encode(frames, meta, masks, enc_cfg);
        write_bytes(enc_out, serialize(container));
        return 0;
    }

    if (dec_cmd->parsed()) {
        auto container = parse(read_bytes(dec_in));
        GeneratorConfig gen;
        gen.external_cmd =
            dec_generator.empty() ? cfg.get("generator.cmd") : dec_generator;
        gen.scratch_dir = scratch_dir;
        std::vector<Frame> frames;
        if (container.codec_id == uint8_t(CodecBackend::External)) {
            CodecSpec ext = parse_codec("external", cfg, scratch_dir);
            frames = decode(container, gen, ext, ext);
        } else {
            frames = decode(container, gen);
        }
        write_video(frames, dec_out, VideoFormat::Y4M, container.meta);
        return 0;
    }

    if (met_cmd->parsed()) {
        met_dist.width = met_ref.width;
        met_dist.height = met_ref.height;
        met_dist.fps = met_ref.fps;
        auto [mr, ref] = load_video(met_ref);
        auto [md, dist] = load_video(met_dist);
        if (ref.size() != dist.size() || mr.width != md.width ||
            mr.height != md.height)
            throw InputError("videos differ in geometry or frame count");
        auto ref_rgb = to_rgb(ref);
        auto dist_rgb = to_rgb(dist);
        double p = psnr_rgb_sequence(ref_rgb, dist_rgb);
        double cm = chroma_mse(ref, dist);
        std::optional<double> ssim;
        if (mr.width >= 176 && mr.height >= 176)
            ssim = ms_ssim_sequence(ref_rgb, dist_rgb);
        if (met_json) {
            json doc;
            doc["psnr"] = p;
            doc["chroma_mse"] = cm;
            if (ssim) doc["ms_ssim"] = *ssim;
            std::cout << doc.dump(2) << "\n";
        } else {
            std::cout << "psnr: " << p << "\nchroma_mse: " << cm << "\n";
            if (ssim) std::cout << "ms_ssim: " << *ssim << "\n";
        }
        return 0;
    }

    if (bd_cmd->parsed()) {
        auto anchors = read_rd_csv(bd_anchor);
        auto tests = read_rd_csv(bd_test);
        if (anchors.empty() || tests.empty())
            throw InputError("curve CSVs must contain at least one curve each");
        auto result = bd_mode == "metric" ? bd_metric(anchors[0], tests[0])
                                          : bd_rate(anchors[0], tests[0]);
        if (bd_json) {
            json doc;
            doc["applicable"] = result.applicable;
            doc["degraded"] = result.degraded;
            if (result.applicable) doc["value"] = result.value;
            std::cout << doc.dump(2) << "\n";
        } else if (result.applicable) {
            std::cout << (bd_mode == "metric" ? "bd_metric: " : "bd_rate: ")
                      << result.value << (bd_mode == "metric" ? "" : " %")
                      << (result.degraded ? " (degraded fit)" : "") << "\n";
        } else {
            std::cout << "N/A (no quality overlap)\n";
        }
        return 0;
    }

    if (rd_cmd->parsed()) {
        emit_rd_outputs(read_rd_csv(rd_in), rd_out_dir);
        return 0;
    }

    if (sw_cmd->parsed()) {
        auto [meta, frames] = load_video(sw_in);
        auto masks = load_masks(sw_masks, sw_seg, meta);
        auto rgb = to_rgb(frames);
        std::vector<SweepRow> rows;
        for (int w_max : sw_wmax)
            for (double tau : sw_tau)
                for (int q : sw_quality) {
                    EncodeConfig ec;
                    ec.selection.w_max = w_max;
                    ec.selection.tau = tau;
                    ec.kf_codec.quality = q;
                    ec.prior_codec.quality = q;
                    auto container = encode(frames, meta, masks, ec);
                    auto out = decode(container);
                    rows.push_back({w_max, tau, q, total_rate(container).total_kbps,
                                    psnr_rgb_sequence(rgb, to_rgb(out)),
                                    chroma_mse(frames, out)});
                }
        std::ofstream out(sw_out);
        if (!out) throw InputError("cannot open " + sw_out + " for writing");
        out << "w_max,tau,quality,rate_kbps,psnr,chroma_mse\n";
        for (const auto& r : rows)
            out << r.w_max << "," << r.tau << "," << r.quality << ","
                << r.rate_kbps << "," << r.psnr << "," << r.chroma << "\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ExternalToolError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CgvcError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
