#pragma once

#include <stdexcept>
#include <string>

namespace ehk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct DegreeError : Error { using Error::Error; };
struct MetricError : Error { using Error::Error; };
struct NotPositiveError : Error { using Error::Error; };
struct DegenerateScaleError : Error { using Error::Error; };
struct ScheduleError : Error { using Error::Error; };
struct NormError : Error { using Error::Error; };
struct AliasError : Error { using Error::Error; };
struct ClassError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace ehk
