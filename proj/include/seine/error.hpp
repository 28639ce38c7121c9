// Exception types shared by all seine modules.

#pragma once

#include <stdexcept>
#include <string>

namespace seine {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operands disagree in height, width, or channel count.
class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

/// A requested instance id does not occur in the label map.
class UnknownInstance : public Error {
public:
    explicit UnknownInstance(const std::string& what) : Error(what) {}
};

/// A multi-scale loss was asked for a block that has no prediction or target.
class MissingScale : public Error {
public:
    explicit MissingScale(const std::string& what) : Error(what) {}
};

/// No instance is large enough for an interior-gradient computation.
class TooSmallInstance : public Error {
public:
    explicit TooSmallInstance(const std::string& what) : Error(what) {}
};

/// Filesystem-level failure (open, read, write).
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

/// A file exists but its contents do not match the expected format.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& what) : Error(what) {}
};

/// The fixture generator could not place all instances.
class InfeasiblePacking : public Error {
public:
    explicit InfeasiblePacking(const std::string& what) : Error(what) {}
};

}  // namespace seine
