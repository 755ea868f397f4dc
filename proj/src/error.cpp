#include "crashvol/error.hpp"

namespace crashvol {

std::string_view error_tag(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Parse: return "E_PARSE";
        case ErrorCode::Gap: return "E_GAP";
        case ErrorCode::Validation: return "E_VALIDATION";
        case ErrorCode::Range: return "E_RANGE";
        case ErrorCode::Domain: return "E_DOMAIN";
        case ErrorCode::InsufficientData: return "E_INSUFFICIENT_DATA";
        case ErrorCode::DegenerateVariance: return "E_DEGENERATE_VARIANCE";
        case ErrorCode::Convergence: return "E_CONVERGENCE";
        case ErrorCode::Alignment: return "E_ALIGNMENT";
        case ErrorCode::Io: return "E_IO";
        case ErrorCode::Usage: return "E_USAGE";
    }
    return "E_UNKNOWN";
}

}  // namespace crashvol
