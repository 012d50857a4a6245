#include "cgvc/generation.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "cgvc/errors.hpp"
#include "cgvc/frame_io.hpp"

namespace cgvc {

namespace {

void validate_request(const ClipGenRequest& req) {
    int interior = req.span_last - req.span_first - 1;
    if (interior < 0 || static_cast<int>(req.priors.size()) != interior)
        throw InputError("clip span (" + std::to_string(req.span_first) + ", " +
                         std::to_string(req.span_last) + ") does not match " +
                         std::to_string(req.priors.size()) + " priors");
    for (size_t i = 0; i < req.priors.size(); ++i)
        if (req.priors[i].index != req.span_first + 1 + static_cast<int>(i))
            throw InputError("priors are not sorted to the clip span");
}

}  // namespace

std::vector<Frame> baseline_generate(const ClipGenRequest& req) {
    validate_request(req);
    for (const PriorFrame& p : req.priors)
        if (p.kind != PriorKind::Luma)
            throw InputError("baseline generator accepts Luma priors only");
    const int kf = req.span_first, kl = req.span_last;
    const int span = kl - kf;
    std::vector<Frame> out;
    out.reserve(req.priors.size());
    for (const PriorFrame& prior : req.priors) {
        const int t = prior.index;
        Frame f;
        f.index = t;
        f.y = prior.plane;
        f.u = Plane(req.first_kf.u.w, req.first_kf.u.h);
        f.v = Plane(req.first_kf.v.w, req.first_kf.v.h);
        for (size_t i = 0; i < f.u.size(); ++i) {
            f.u.data[i] = static_cast<uint8_t>(std::lround(
                ((kl - t) * double(req.first_kf.u.data[i]) +
                 (t - kf) * double(req.last_kf.u.data[i])) /
                span));
            f.v.data[i] = static_cast<uint8_t>(std::lround(
                ((kl - t) * double(req.first_kf.v.data[i]) +
                 (t - kf) * double(req.last_kf.v.data[i])) /
                span));
        }
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<Frame> external_generate(const ClipGenRequest& req,
                                     const std::string& generator_cmd,
                                     const std::string& scratch_dir) {
    validate_request(req);
    if (req.priors.empty()) return {};
    if (generator_cmd.find("{workdir}") == std::string::npos)
        throw InputError("generator command template is missing {workdir}");

    std::filesystem::path base = scratch_dir.empty()
                                     ? std::filesystem::temp_directory_path()
                                     : std::filesystem::path(scratch_dir);
    static int counter = 0;
    auto dir = base / ("cgvc_gen_" + std::to_string(::getpid()) + "_" +
                       std::to_string(counter++));
    std::filesystem::create_directories(dir);

    VideoMeta meta{req.first_kf.y.w, req.first_kf.y.h, 1, {}};
    write_video({req.first_kf}, (dir / "first.y4m").string(), VideoFormat::Y4M, meta);
    write_video({req.last_kf}, (dir / "last.y4m").string(), VideoFormat::Y4M, meta);
    std::vector<Frame> prior_frames;
    for (const PriorFrame& p : req.priors) prior_frames.push_back(prior_to_frame(p));
    VideoMeta pmeta = meta;
    pmeta.frame_count = static_cast<int>(prior_frames.size());
    if (!prior_frames.empty())
        write_video(prior_frames, (dir / "priors.y4m").string(), VideoFormat::Y4M, pmeta);

    std::string cmd = generator_cmd;
    for (auto [key, val] :
         {std::pair<std::string, std::string>{"{workdir}", dir.string()},
          {"{frames}", std::to_string(req.priors.size())}}) {
        size_t pos;
        while ((pos = cmd.find(key)) != std::string::npos)
            cmd.replace(pos, key.size(), val);
    }
    int rc = std::system(cmd.c_str());
    if (rc != 0) {
        int status = WIFEXITED(rc) ? WEXITSTATUS(rc) : rc;
        throw GeneratorFailed("generator exited with status " +
                              std::to_string(status) + ": " + cmd);
    }

    auto out_path = dir / "out.y4m";
    if (!std::filesystem::exists(out_path))
        throw GeneratorOutputMismatch("generator produced no out.y4m");
    auto [out_meta, frames] = read_video(out_path.string());
    if (static_cast<int>(frames.size()) != static_cast<int>(req.priors.size()) ||
        out_meta.width != meta.width || out_meta.height != meta.height)
        throw GeneratorOutputMismatch(
            "generator output does not match the requested clip: got " +
            std::to_string(frames.size()) + " frames at " +
            std::to_string(out_meta.width) + "x" + std::to_string(out_meta.height));
    for (size_t i = 0; i < frames.size(); ++i)
        frames[i].index = req.span_first + 1 + static_cast<int>(i);
    std::filesystem::remove_all(dir);
    return frames;
}

}  // namespace cgvc
