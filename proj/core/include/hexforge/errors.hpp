#pragma once

#include <stdexcept>
#include <string>

namespace hexforge {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct MixedElementError : ParseError { using ParseError::ParseError; };
struct UnsupportedCellType : ParseError { using ParseError::ParseError; };
struct NonManifoldError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct SolveFailure : Error { using Error::Error; };
struct FlippedTriangles : Error { using Error::Error; };
struct LocationFailure : Error { using Error::Error; };
struct PatchCornerCount : Error { using Error::Error; };
struct NonConformal : Error { using Error::Error; };
struct UncoveredBoundary : Error { using Error::Error; };
struct MissingNeighbor : Error { using Error::Error; };
struct InactiveElement : Error { using Error::Error; };
struct InvalidRefineList : Error { using Error::Error; };

} // namespace hexforge
