#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sf {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TooShort : public Error {
 public:
  using Error::Error;
};

class ScreenMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class EmptyPool : public Error {
 public:
  using Error::Error;
};

class FlatMap : public Error {
 public:
  using Error::Error;
};

class NotSquare : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class BadRatios : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class CorruptCheckpoint : public Error {
 public:
  CorruptCheckpoint(std::string field, const std::string& detail)
      : Error("corrupt checkpoint field '" + field + "': " + detail), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& detail)
      : Error("line " + std::to_string(line) + ": parse error: " + detail), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::size_t line, std::string reason)
      : Error("line " + std::to_string(line) + ": invalid record: " + reason),
        line_(line),
        reason_(std::move(reason)) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class MissingImage : public Error {
 public:
  explicit MissingImage(std::string id)
      : Error("no feature entry for image '" + id + "'"), id_(std::move(id)) {}
  const std::string& image_id() const noexcept { return id_; }

 private:
  std::string id_;
};

class NonFiniteLoss : public Error {
 public:
  NonFiniteLoss(const std::string& what, std::string dump_path)
      : Error(what), dump_path_(std::move(dump_path)) {}
  const std::string& dump_path() const noexcept { return dump_path_; }

 private:
  std::string dump_path_;
};

}  // namespace sf
