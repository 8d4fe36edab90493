#pragma once

#include <stdexcept>
#include <string>

namespace granular
{

//! Caller supplied malformed or out-of-range input.
class InputError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//! A documented precondition of an operation was violated.
class PreconditionError : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

//! Internal invariant failure (e.g. a sampler that never terminates).
class InternalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Base class for failures of a numerical run (exit code 1 in the CLI).
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Rescaled energy left the admissible band.
class DivergenceError : public NumericalError
{
  public:
    DivergenceError(std::string const& what, double s, double energy)
        : NumericalError(what), s_(s), energy_(energy)
    {
    }
    double s() const { return s_; }
    double energy() const { return energy_; }

  private:
    double s_;
    double energy_;
};

}  // namespace granular
