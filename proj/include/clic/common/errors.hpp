#pragma once

#include <stdexcept>
#include <string>

namespace clic {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// dataset
struct MalformedHeader : Error { using Error::Error; };
struct UnsupportedFormat : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct MissingSample : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct InvalidFold : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };

// textgen
struct NonPositiveDimension : Error { using Error::Error; };
struct HttpError : Error { using Error::Error; };
struct TimeoutError : Error { using Error::Error; };
struct EmptyCompletion : Error { using Error::Error; };

// textenc
struct ProviderUnavailable : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct InvalidInput : Error { using Error::Error; };
struct BadMagic : Error { using Error::Error; };
struct VersionMismatch : Error { using Error::Error; };
struct TruncatedFile : Error { using Error::Error; };

// model / training
struct NonFiniteInput : Error { using Error::Error; };
struct SignalTooShort : Error { using Error::Error; };
struct ModeMismatch : Error { using Error::Error; };
struct NonFiniteLogits : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct EmptySplit : Error { using Error::Error; };
struct CheckpointError : Error { using Error::Error; };

// metrics
struct EmptyInput : Error { using Error::Error; };

// cli / io
struct ConfigParseError : Error { using Error::Error; };
struct ConfigValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace clic
