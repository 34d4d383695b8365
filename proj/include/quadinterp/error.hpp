#pragma once

#include <stdexcept>
#include <string>

namespace quadinterp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unsupported file content (PNG, flow files, configs).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Raster or field dimensions that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Parameter values outside their documented domain.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace quadinterp
