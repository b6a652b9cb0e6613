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

#include "qutrit_cli/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "qutrit_cli/profile.hpp"

namespace qutrit::cli {

DeviceSpec resolve_device(const std::string& profile_path) {
  return profile_path.empty() ? paper_device() : load_profile(profile_path);
}

std::string device_config(const DeviceSpec& device) {
  std::ostringstream s;
  write_profile(s, device);
  return s.str();
}

Sink::Sink(const Context& ctx, const std::string& path) : stream_(&ctx.out) {
  if (path.empty()) return;
  auto file = std::make_unique<std::ofstream>(path);
  if (!*file) throw ValidationError("cannot write '" + path + "'");
  stream_ = file.get();
  file_ = std::move(file);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Qutrit gate synthesis, simulation and tomography"};
  app.name("qutrit");
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  const Action decompose = add_decompose(app);
  const Action shifts = add_shifts(app);
  const Action simulate = add_simulate(app);
  const Action tomo = add_tomo(app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::string line = "qutrit";
  for (const std::string& a : args) line += " " + a;
  try {
    const Context ctx{out, err, line, worker_count()};
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "decompose") decompose(ctx);
    if (name == "shifts") shifts(ctx);
    if (name == "simulate") simulate(ctx);
    if (name == "tomo") tomo(ctx);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ModelValidityError& e) {
    err << "model validity error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 4;
  }
  return 0;
}

}  // namespace qutrit::cli
