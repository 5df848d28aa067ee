#pragma once

#include <stdexcept>
#include <string>

namespace vmphase {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside its domain (negative concentration, bad bin width, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Input too short for the requested analysis.
class SizeError : public Error {
public:
  using Error::Error;
};

/// Matrix or vector dimensions disagree.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// File I/O failure (open, read, write).
class IoError : public Error {
public:
  using Error::Error;
};

/// Malformed binary file: bad magic or inconsistent header.
class FormatError : public Error {
public:
  using Error::Error;
};

/// Binary file written by an unsupported format version.
class VersionError : public FormatError {
public:
  using FormatError::FormatError;
};

/// Binary file ends before its header says it should.
class TruncatedError : public FormatError {
public:
  using FormatError::FormatError;
};

/// WAV header rejected (not 16-bit PCM mono, or wrong sample rate).
class WavError : public Error {
public:
  using Error::Error;
};

/// Bad configuration file or command-line value.
class ConfigError : public Error {
public:
  using Error::Error;
};

namespace detail {
[[noreturn]] void throw_shape(const std::string& what, long long expected_rows,
                              long long expected_cols, long long rows,
                              long long cols);
}

} // namespace vmphase
