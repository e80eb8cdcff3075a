#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Field or table length does not match the grid.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Both cells adjacent to a face are vacuum, so the log-pressure flux is undefined.
class VacuumFluxError : public Error {
 public:
  VacuumFluxError(std::size_t face, const std::string& what)
      : Error(what), face_(face) {}
  std::size_t face() const noexcept { return face_; }

 private:
  std::size_t face_;
};

/// A step kept producing negative densities after every allowed dt halving.
class PositivityError : public Error {
 public:
  PositivityError(std::size_t cell, const std::string& what)
      : Error(what), cell_(cell) {}
  std::size_t cell() const noexcept { return cell_; }

 private:
  std::size_t cell_;
};

/// The transformed right-hand side needs an unclamped state.
class TransformUnavailableError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration; carries the dotted key path of the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace cdlab
