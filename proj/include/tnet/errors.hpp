// Copyright 2026 The tnet Authors
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

namespace tnet {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string &message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string &kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define TNET_DEFINE_ERROR(Name, tag)                                                  \
    class Name : public Error {                                                      \
    public:                                                                          \
        explicit Name(const std::string &message) : Error(tag, message) {}          \
    }

TNET_DEFINE_ERROR(DimensionError, "dimension");
TNET_DEFINE_ERROR(LabelError, "label");
TNET_DEFINE_ERROR(BipartitionError, "bipartition");
TNET_DEFINE_ERROR(SymmetryError, "symmetry");
TNET_DEFINE_ERROR(SizeError, "size");
TNET_DEFINE_ERROR(NormalizationError, "normalization");
TNET_DEFINE_ERROR(InvertibilityError, "invertibility");
TNET_DEFINE_ERROR(BoundaryError, "unsupported-boundary");
TNET_DEFINE_ERROR(ShapeError, "shape");
TNET_DEFINE_ERROR(SpecError, "invalid-spec");
TNET_DEFINE_ERROR(FitError, "fit");
TNET_DEFINE_ERROR(DegenerateSpectrumError, "degenerate-spectrum");
TNET_DEFINE_ERROR(RangeError, "range");
TNET_DEFINE_ERROR(UnsupportedError, "unsupported");
TNET_DEFINE_ERROR(FormatError, "format");
TNET_DEFINE_ERROR(InternalError, "internal");
TNET_DEFINE_ERROR(UsageError, "usage");

#undef TNET_DEFINE_ERROR

/// Raised by iterative solvers that hit their iteration cap.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string &message, double best_residual)
        : Error("convergence", message), best_residual_(best_residual) {}

    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

} // namespace tnet
