#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace chaininf {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on incompatible spaces, or an argument is outside the
/// operation's domain (unknown variable, bad permutation, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Conditioning on a predicate whose validity is zero. `source()` names the
/// evidence that made the update undefined, when known.
class InconsistentEvidence : public Error {
 public:
  explicit InconsistentEvidence(std::string source)
      : Error("inconsistent evidence" + (source.empty() ? std::string{} : ": " + source)),
        source_(std::move(source)) {}

  const std::string& source() const noexcept { return source_; }

 private:
  std::string source_;
};

/// Malformed network text. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that uses a construct we do not support (continuous
/// variables, conditional `table` blocks, ...).
class UnsupportedFeature : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Structural graph problems: cycles, dangling parents, non-topological orders.
class GraphError : public Error {
 public:
  using Error::Error;
};

/// A dense object would exceed the configured entry cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace chaininf
