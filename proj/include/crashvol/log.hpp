#pragma once

#include <spdlog/spdlog.h>

namespace crashvol {

/// Shared stderr logger. Verbosity comes from the CRASHVOL_LOG environment
/// variable (trace|debug|info|warn|error|off); default is warn.
spdlog::logger& logger();

}  // namespace crashvol
