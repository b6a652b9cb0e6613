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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qutrit/core.hpp"

namespace qutrit::cli {

inline constexpr const char* kToolVersion = "0.3.0";

std::uint64_t fnv1a64(const std::string& text);

/// Provenance block written as '#' lines ahead of every table.
struct Manifest {
  std::string command;
  std::string config;  // canonical key=value lines, hashed
  std::uint64_t seed = 0;

  void write(std::ostream& out) const;
};

/// "a:b:n" -> n evenly spaced values from a to b inclusive.
std::vector<double> parse_range(const std::string& text);

/// Whitespace-separated (re, im) pairs, row-major; '#' starts a comment.
CMatrix read_matrix(std::istream& in, const std::string& source);
CMatrix load_matrix(const std::string& path);

/// Worker count from QUTRIT_WORKERS, else the hardware concurrency.
int worker_count();

/// Runs job(i) for i in [0, n) on `workers` threads. Results land by index,
/// so the output does not depend on scheduling. The first exception is
/// rethrown after every worker stops.
void parallel_for(int n, int workers, const std::function<void(int)>& job);

}  // namespace qutrit::cli
