#pragma once

#include <stdexcept>
#include <string>

namespace cgvc {

struct CgvcError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input / file errors (exit code 2 at the CLI).
struct InputError : CgvcError {
    using CgvcError::CgvcError;
};
struct TruncatedInput : InputError {
    using InputError::InputError;
};
struct MissingLabelMap : InputError {
    int frame;
    explicit MissingLabelMap(int frame_)
        : InputError("missing label map for frame " + std::to_string(frame_)),
          frame(frame_) {}
};

// Bitstream / container errors.
struct CorruptStream : CgvcError {
    using CgvcError::CgvcError;
};
struct BadMagic : CorruptStream {
    BadMagic() : CorruptStream("bad container magic") {}
};
struct UnsupportedVersion : CorruptStream {
    explicit UnsupportedVersion(int v)
        : CorruptStream("unsupported container version " + std::to_string(v)) {}
};
struct CrcMismatch : CorruptStream {
    std::string section;
    explicit CrcMismatch(std::string section_)
        : CorruptStream("CRC mismatch in section " + section_),
          section(std::move(section_)) {}
};
struct TruncatedSection : CorruptStream {
    using CorruptStream::CorruptStream;
};
struct PlanOutOfRange : CorruptStream {
    using CorruptStream::CorruptStream;
};
struct PlanStreamMismatch : CorruptStream {
    using CorruptStream::CorruptStream;
};

// External tool errors (exit code 3 at the CLI).
struct ExternalToolError : CgvcError {
    using CgvcError::CgvcError;
};
struct GeneratorFailed : ExternalToolError {
    using ExternalToolError::ExternalToolError;
};
struct GeneratorOutputMismatch : ExternalToolError {
    using ExternalToolError::ExternalToolError;
};

struct UnreachableRate : CgvcError {
    double min_kbps;
    double max_kbps;
    UnreachableRate(double min_kbps_, double max_kbps_)
        : CgvcError("target rate unreachable; achievable range [" +
                    std::to_string(min_kbps_) + ", " + std::to_string(max_kbps_) +
                    "] kbps"),
          min_kbps(min_kbps_),
          max_kbps(max_kbps_) {}
};

struct DegenerateCurve : CgvcError {
    using CgvcError::CgvcError;
};

}  // namespace cgvc
