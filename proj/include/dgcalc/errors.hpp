#pragma once

#include <stdexcept>
#include <string>

namespace dgcalc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AmbientMismatch : public Error {
 public:
  AmbientMismatch() : Error("operands live in different algebras") {}
};

class DegreeMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownGenerator : public Error {
 public:
  explicit UnknownGenerator(const std::string& name)
      : Error("unknown generator '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Raised when a declared differential fails d(d(g)) = 0 on some generator.
class NotSquareZero : public Error {
 public:
  NotSquareZero(std::string generator, std::string residue)
      : Error("d^2 != 0 on generator '" + generator + "': d(d " + generator + ") = " + residue),
        generator_(std::move(generator)),
        residue_(std::move(residue)) {}
  const std::string& generator() const noexcept { return generator_; }
  const std::string& residue() const noexcept { return residue_; }

 private:
  std::string generator_;
  std::string residue_;
};

class MaurerCartanError : public Error {
 public:
  MaurerCartanError(std::string generator, std::string residue)
      : Error("Q^2 != 0 on generator '" + generator + "': Q(Q " + generator + ") = " + residue),
        generator_(std::move(generator)),
        residue_(std::move(residue)) {}
  const std::string& generator() const noexcept { return generator_; }
  const std::string& residue() const noexcept { return residue_; }

 private:
  std::string generator_;
  std::string residue_;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class NotNilpotent : public Error {
 public:
  using Error::Error;
};

class NotACocycle : public Error {
 public:
  using Error::Error;
};

class NotClosed : public Error {
 public:
  using Error::Error;
};

/// Two independent evaluation routes produced different answers.
class InconsistentRoutes : public Error {
 public:
  using Error::Error;
};

}  // namespace dgcalc
