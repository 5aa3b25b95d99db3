#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tubefocal {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// expression layer ----------------------------------------------------------

struct SyntaxError : Error {
  SyntaxError(const std::string& msg, std::size_t position)
      : Error(msg + " (at offset " + std::to_string(position) + ")"), position(position) {}
  std::size_t position;
};

struct UnknownIdentifier : Error {
  UnknownIdentifier(const std::string& name, std::size_t position)
      : Error("unknown identifier '" + name + "' (at offset " + std::to_string(position) + ")"),
        name(name),
        position(position) {}
  std::string name;
  std::size_t position;
};

struct DomainError : Error {
  using Error::Error;
};

// frame layer ----------------------------------------------------------------

struct NotUnitSpeed : Error {
  using Error::Error;
};

struct VanishingCurvature : Error {
  using Error::Error;
};

struct NotPlanar : Error {
  using Error::Error;
};

struct DegenerateHost : Error {
  using Error::Error;
};

struct FrameInconsistent : Error {
  FrameInconsistent(const std::string& row, const std::string& msg)
      : Error("frame inconsistent in " + row + ": " + msg), row(row) {}
  std::string row;
};

// surface layer ---------------------------------------------------------------

struct SingularPoint : Error {
  using Error::Error;
};

struct FocalPoleV : Error {
  using Error::Error;
};

struct FocalPoleB : Error {
  using Error::Error;
};

struct FocalDegenerate : Error {
  using Error::Error;
};

struct QuadratureFailure : Error {
  using Error::Error;
};

// pipeline layer ---------------------------------------------------------------

struct ConfigParseError : Error {
  ConfigParseError(const std::string& field, const std::string& msg)
      : Error("config field '" + field + "': " + msg), field(field) {}
  std::string field;
};

struct EmptyMesh : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace tubefocal
