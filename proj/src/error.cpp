#include "mlc/error.hpp"

namespace mlc {

const char *error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Layout: return "layout error";
    case ErrorCode::UndefinedRatio: return "undefined ratio";
    case ErrorCode::NotApplicable: return "not applicable";
    case ErrorCode::Unsupported: return "unsupported format";
    case ErrorCode::Malformed: return "malformed input";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::Stream: return "stream error";
    case ErrorCode::Empty: return "empty input";
    }
    return "unknown error";
}

} // namespace mlc
