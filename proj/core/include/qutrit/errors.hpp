// Copyright 2026 The qutrit-wh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qutrit {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (bad matrix, wrong dimension, bad file).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The requested physics lies outside the model's domain of validity,
// e.g. a vanishing perturbative denominator at exact single-photon resonance.
class ModelValidityError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure failed to deliver a result (step-size underflow,
// optimizer non-convergence, ambiguous level tracking).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qutrit
