#pragma once

#include <string>
#include <vector>

#include "cgvc/control_prior.hpp"
#include "cgvc/types.hpp"

namespace cgvc {

struct ClipGenRequest {
    Frame first_kf;
    Frame last_kf;
    std::vector<PriorFrame> priors;  // one per interior frame, sorted by index
    int span_first = 0;              // keyframe indices bounding the clip
    int span_last = 0;
};

// Deterministic stand-in generator: luma is the decoded prior verbatim,
// chroma is the temporal linear blend of the two keyframes' chroma planes.
std::vector<Frame> baseline_generate(const ClipGenRequest& request);

// Command-template contract for a real first/last-frame generator. The
// workdir receives first.y4m, last.y4m and priors.y4m; the command must
// leave out.y4m behind. Placeholders: {workdir}, {frames}.
std::vector<Frame> external_generate(const ClipGenRequest& request,
                                     const std::string& generator_cmd,
                                     const std::string& scratch_dir = "");

}  // namespace cgvc
