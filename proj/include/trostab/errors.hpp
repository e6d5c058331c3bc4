// Copyright 2026 The trostab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace trostab {

/// Shape mismatch between operands (rows/cols do not conform).
class dimension_error : public std::invalid_argument {
 public:
  explicit dimension_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Operation applied to an object that cannot support it
/// (e.g. derived binary product on a non-square space).
class model_error : public std::logic_error {
 public:
  explicit model_error(const std::string& what) : std::logic_error(what) {}
};

/// Scalar parameter outside its admissible range (p = 1, negative theta, ...).
class parameter_error : public std::invalid_argument {
 public:
  explicit parameter_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or out-of-contract experiment configuration.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace trostab
