// Copyright 2026 The nlsdp authors
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

#include <Eigen/Dense>

#include <any>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace nlsdp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Opaque user payload threaded by reference through every callback of a
/// solve. The solver never inspects it.
using UserData = std::any;

/// Sink for human-readable progress lines. An empty function means silent.
using Logger = std::function<void(const std::string&)>;

/// Thrown when an evaluation leaves the domain of a penalty or barrier term
/// (e.g. lambda_max(A) too close to the matrix-penalty asymptote, or a
/// barrier argument that is not positive definite). The term tag names the
/// violated piece so line searches and callers can report it.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string term, const std::string& what)
      : std::runtime_error(what), term_(std::move(term)) {}

  const std::string& term() const { return term_; }

 private:
  std::string term_;
};

/// Thrown when the inertia-corrected KKT factorization cannot reach the
/// target inertia within the attempt budget.
class FactorizationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nlsdp
