#pragma once

#include <stdexcept>
#include <string>

namespace muskat {

// Error taxonomy mirrors the CLI exit codes: 1 validation, 2 numerical, 3 check.
enum class ErrorKind { Validation = 1, Numerical = 2, CheckFailed = 3, Io = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class CheckError : public Error {
 public:
  explicit CheckError(const std::string& what) : Error(ErrorKind::CheckFailed, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace muskat
