// Copyright 2026 The appa-ed Authors
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

#ifndef APPA_ERRORS_HPP
#define APPA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace appa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument (bounds, sizes, parameters) was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An objective value was NaN or infinite.
class InvalidObjective : public Error {
 public:
  using Error::Error;
};

/// Demand cannot be met within the aggregate generator limits.
class InfeasibleDemand : public Error {
 public:
  using Error::Error;
};

/// The instance is outside what a solver supports (e.g. a non-convex unit).
class UnsupportedInstance : public Error {
 public:
  using Error::Error;
};

/// A dispatch violates a unit limit or the power balance tolerance.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A problem file could not be read or decoded.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace appa

#endif  // APPA_ERRORS_HPP
