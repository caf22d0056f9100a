#pragma once

#include <stdexcept>
#include <string>

namespace netscale {

// Error taxonomy mirrors the CLI exit codes: I/O = 2, format = 3, domain = 4.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable/unwritable files and streams.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

// Malformed input content (bad header, unparseable line, ...).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(what) {}
};

// Precondition or statistical-validity violation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

}  // namespace netscale
