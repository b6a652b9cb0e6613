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

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qutrit/core.hpp"
#include "qutrit_cli/io.hpp"

namespace CLI {
class App;
}

namespace qutrit::cli {

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::string command_line;
  int workers = 1;
};

/// Device from --profile, or the built-in device when the flag is absent.
DeviceSpec resolve_device(const std::string& profile_path);
std::string device_config(const DeviceSpec& device);

/// Table destination: the file named by --out, else the context stream.
class Sink {
 public:
  Sink(const Context& ctx, const std::string& path);
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ostream> file_;
  std::ostream* stream_;
};

/// Each registrar adds a subcommand and returns the action bound to its
/// parsed flags.
using Action = std::function<void(const Context&)>;
Action add_decompose(CLI::App& app);
Action add_shifts(CLI::App& app);
Action add_simulate(CLI::App& app);
Action add_tomo(CLI::App& app);

}  // namespace qutrit::cli
