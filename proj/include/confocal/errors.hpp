#pragma once

#include <stdexcept>
#include <string>

namespace confocal {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct PoleError : Error { using Error::Error; };
struct OffQuadricError : Error { using Error::Error; };
struct ZeroNormalError : Error { using Error::Error; };
struct DegenerateLineError : Error { using Error::Error; };
struct InterlacingError : Error { using Error::Error; };
struct CoordinatePlaneError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct IntervalError : Error { using Error::Error; };
struct SeparationError : Error { using Error::Error; };
struct BranchPoleError : Error { using Error::Error; };
struct HypothesisError : Error { using Error::Error; };
struct NoRealTangentError : Error { using Error::Error; };
struct ConeDegeneracyError : Error { using Error::Error; };
struct InfeasibleThreadError : Error { using Error::Error; };
struct ClosureResidualError : Error { using Error::Error; };
struct StiffnessError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct EmptySceneError : Error { using Error::Error; };

} // namespace confocal
