#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bskms {

// Raised when an input is outside the mathematical domain of an operation
// (e.g. inverse temperature at or below the critical value, or a moment
// reconstruction requested in the regime where the linear system is not
// triangular).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an enumeration or matrix build would exceed a configured cap.
struct SizeCapError : std::runtime_error {
  explicit SizeCapError(const std::string& what) : std::runtime_error(what) {}
};

// Raised on malformed word text or measure files; `position` is the byte
// offset of the first offending character where applicable (npos otherwise).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what,
                      std::size_t position = std::string::npos)
      : std::runtime_error(what), position(position) {}
  std::size_t position;
};

}  // namespace bskms
