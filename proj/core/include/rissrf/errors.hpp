// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

// Argument validation failures throw std::invalid_argument. The types below
// flag numerical conditions that callers may want to tell apart.

namespace rissrf {

/// A surface element receives no power from the feed (pattern gain is zero).
class UnilluminatedElement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The symbol vector handed to the tuner is identically zero.
class DegenerateSymbol : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A direction or matrix that must be nonzero vanished (H̃w = 0, H^H s = 0, zero matrix).
class DegenerateDirection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The amplification gain is exactly zero, so the step size is undefined.
class StalledGain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A block of gains is all zero, so peak-to-average power is undefined.
class DegenerateBlock : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rissrf
