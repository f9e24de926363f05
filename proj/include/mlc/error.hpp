#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mlc {

enum class ErrorCode : int {
    InvalidArgument = 1,
    Layout,
    UndefinedRatio,
    NotApplicable,
    Unsupported,
    Malformed,
    Io,
    Stream,
    Empty,
};

const char *error_code_name(ErrorCode code) noexcept;

/// Every failure in the library is reported through this type; the C API
/// maps `code()` onto its status enum.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Decoder failure tied to a position in the stream.
class StreamError : public Error {
public:
    StreamError(std::int64_t frame, const std::string &what)
        : Error(ErrorCode::Stream,
                frame >= 0 ? "frame " + std::to_string(frame) + ": " + what : what),
          frame_(frame) {}

    /// -1 when the failure is in the container header.
    std::int64_t frame() const noexcept { return frame_; }

private:
    std::int64_t frame_;
};

} // namespace mlc
