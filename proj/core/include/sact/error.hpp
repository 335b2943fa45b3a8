#ifndef SACT_ERROR_HPP_
#define SACT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace sact {

// Error categories map one-to-one onto the CLI exit codes.
enum class ErrorKind {
  kUsage = 2,
  kData = 3,
  kResource = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message)
      : Error(ErrorKind::kUsage, message) {}
};

// Malformed or inconsistent input data (corpora, archives, vectors).
class DataError : public Error {
 public:
  explicit DataError(const std::string& message)
      : Error(ErrorKind::kData, message) {}
};

// Missing or unreadable resource files (dictionaries, word lists, models).
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& message)
      : Error(ErrorKind::kResource, message) {}
};

}  // namespace sact

#endif  // SACT_ERROR_HPP_
