#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phcausal {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed files, out-of-range parameters, shape mismatches.
class ValidationFailure : public Error {
 public:
  using Error::Error;
};

/// The inputs were well formed but the computation cannot proceed.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public ValidationFailure {
 public:
  using ValidationFailure::ValidationFailure;
};

class ValidationError : public ValidationFailure {
 public:
  using ValidationFailure::ValidationFailure;
};

class ParseError : public ValidationFailure {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationFailure("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DegenerateCovariate : public NumericalFailure {
 public:
  explicit DegenerateCovariate(std::string covariate)
      : NumericalFailure("covariate '" + covariate + "' has zero sample variance"),
        covariate_(std::move(covariate)) {}
  const std::string& covariate() const noexcept { return covariate_; }

 private:
  std::string covariate_;
};

class NoEventsError : public NumericalFailure {
 public:
  NoEventsError() : NumericalFailure("dataset contains no events") {}
};

/// Linear predictor overflow; usually fixed by rescaling covariates.
class NumericalGuardError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class MonotoneLikelihoodError : public NumericalFailure {
 public:
  explicit MonotoneLikelihoodError(std::string covariate)
      : NumericalFailure("monotone likelihood: coefficient of '" + covariate +
                         "' diverges (|beta| > 50); data may be separable"),
        covariate_(std::move(covariate)) {}
  const std::string& covariate() const noexcept { return covariate_; }

 private:
  std::string covariate_;
};

class EmptyStratumError : public NumericalFailure {
 public:
  explicit EmptyStratumError(std::size_t bin)
      : NumericalFailure("exposure bin " + std::to_string(bin) + " is empty"), bin_(bin) {}
  std::size_t bin() const noexcept { return bin_; }

 private:
  std::size_t bin_;
};

class DegenerateOracleError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace phcausal
