// Copyright 2026 The hawkesq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HAWKESQ_ERROR_HPP_
#define HAWKESQ_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace hawkesq {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: invalid parameters, violated preconditions, malformed
// configuration. The CLI maps these to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The stability condition lambda0 / (1 - m) < mu_lo - eps does not hold.
class Unstable : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InvalidHorizon : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Not enough samples / arrivals / gaps for a statistic.
class InsufficientData : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Numerical failures. The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A single cluster exceeded the hard event cap.
class ClusterExplosion : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Argument outside the domain of a moment generating function.
class OutOfDomain : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A root that the constants solver needs does not exist in the domain.
class NoRoot : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace hawkesq

#endif  // HAWKESQ_ERROR_HPP_
