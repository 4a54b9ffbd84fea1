// Copyright 2026 The rcds Authors.
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

namespace rcds {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidNodeError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Conditioning on an observation no stored scenario extends.
class ZeroMassError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// An exact solver hit its explored-node budget.
class SolverLimitError : public Error {
 public:
  using Error::Error;
};

// The oracle refuses instances above its configured size.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

// A comparison found rows without the baseline algorithm's row.
class MissingBaselineError : public Error {
 public:
  using Error::Error;
};

}  // namespace rcds
