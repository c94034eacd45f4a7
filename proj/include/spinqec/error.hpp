// Copyright 2026 The spinqec Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace spinqec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (bad spin value, dimension
/// mismatch, unnormalized input, unknown name, ...).
class PreconditionError : public Error {
   public:
    using Error::Error;
};

/// A numerical procedure failed: non-convergence, verification failure,
/// synthesis failure.
class NumericalError : public Error {
   public:
    using Error::Error;
};

/// Dressed eigenstates could not be mapped one-to-one onto product labels.
class LabelingError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

}  // namespace spinqec
