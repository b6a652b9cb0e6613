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

#include "qutrit_cli/profile.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace qutrit::cli {
namespace {

namespace pt = boost::property_tree;

constexpr double kGHz = kTwoPi * 1e9;
constexpr double kMHz = kTwoPi * 1e6;
constexpr double kkHz = 1e3;

std::vector<double> parse_list(const std::string& text, const std::string& where) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    double v = 0.0;
    std::string rest;
    if (!(is >> v) || (is >> rest)) throw ValidationError(where + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError(where + ": empty list");
  return out;
}

double parse_number(const std::string& text, const std::string& where) {
  const std::vector<double> v = parse_list(text, where);
  if (v.size() != 1) throw ValidationError(where + ": expected a single number");
  return v[0];
}

}  // namespace

DeviceSpec parse_profile(std::istream& in, const std::string& source) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(source + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  const std::set<std::string> sections{"levels", "couplings", "decoherence", "readout", "thermal"};
  for (const auto& [name, _] : tree)
    if (!sections.count(name)) throw ValidationError(source + ": unknown section [" + name + "]");
  auto where = [&](const std::string& section, const std::string& key) {
    return source + ": [" + section + "] " + key;
  };

  DeviceSpec d;
  const auto levels = tree.get_child_optional("levels");
  if (!levels) throw ValidationError(source + ": missing [levels] section");
  for (const auto& [key, value] : *levels) {
    if (key != "transitions_ghz") throw ValidationError(where("levels", key) + ": unknown key");
    const std::vector<double> f = parse_list(value.data(), where("levels", key));
    d.level_freqs = RVector::Zero(static_cast<Eigen::Index>(f.size() + 1));
    for (std::size_t i = 0; i < f.size(); ++i)
      d.level_freqs(static_cast<Eigen::Index>(i + 1)) = d.level_freqs(static_cast<Eigen::Index>(i)) + f[i] * kGHz;
  }
  if (d.level_freqs.size() == 0) throw ValidationError(where("levels", "transitions_ghz") + ": missing");
  const int n = d.n_levels();

  d.drive_couplings = RMatrix::Zero(n, n);
  const auto couplings = tree.get_child_optional("couplings");
  if (!couplings) throw ValidationError(source + ": missing [couplings] section");
  double scale = 0.0;
  const std::regex pair_key("([0-9])([0-9])");
  std::vector<std::tuple<int, int, double>> pairs;
  for (const auto& [key, value] : *couplings) {
    std::smatch m;
    if (key == "scale_mhz") {
      scale = parse_number(value.data(), where("couplings", key)) * kMHz;
    } else if (std::regex_match(key, m, pair_key)) {
      const int j = std::stoi(m[1]);
      const int k = std::stoi(m[2]);
      if (j >= k || k >= n) throw ValidationError(where("couplings", key) + ": pair must be jk with j < k < n_levels");
      pairs.emplace_back(j, k, parse_number(value.data(), where("couplings", key)));
    } else {
      throw ValidationError(where("couplings", key) + ": unknown key");
    }
  }
  if (!(scale > 0.0)) throw ValidationError(where("couplings", "scale_mhz") + ": must be given and positive");
  for (const auto& [j, k, rel] : pairs) d.drive_couplings(j, k) = d.drive_couplings(k, j) = rel * scale;

  if (const auto dec = tree.get_child_optional("decoherence")) {
    const std::regex rate_key("(gamma|dephasing)_([0-2])([0-2])_khz");
    for (const auto& [key, value] : *dec) {
      std::smatch m;
      if (key == "coherence_shape") {
        if (value.data() == "gaussian") {
          d.decoherence.coherence_shape = CoherenceShape::kGaussian;
        } else if (value.data() == "exponential") {
          d.decoherence.coherence_shape = CoherenceShape::kExponential;
        } else {
          throw ValidationError(where("decoherence", key) + ": expected gaussian or exponential");
        }
      } else if (std::regex_match(key, m, rate_key)) {
        const int i = std::stoi(m[2]);
        const int j = std::stoi(m[3]);
        if (i == j) throw ValidationError(where("decoherence", key) + ": levels must differ");
        const double r = parse_number(value.data(), where("decoherence", key)) * kkHz;
        if (m[1] == "gamma") {
          d.decoherence.gamma(i, j) = r;
        } else {
          if (i > j) throw ValidationError(where("decoherence", key) + ": dephasing pair must be ij with i < j");
          d.decoherence.pure_dephasing(i, j) = d.decoherence.pure_dephasing(j, i) = r;
        }
      } else {
        throw ValidationError(where("decoherence", key) + ": unknown key");
      }
    }
  }

  if (const auto ro = tree.get_child_optional("readout")) {
    for (const auto& [key, value] : *ro) {
      if (key == "levels_mv") {
        const std::vector<double> v = parse_list(value.data(), where("readout", key));
        if (v.size() != 3) throw ValidationError(where("readout", key) + ": expected three voltages");
        d.readout.voltage_levels = {v[0] * 1e-3, v[1] * 1e-3, v[2] * 1e-3};
      } else if (key == "noise_mv") {
        d.readout.noise_sigma = parse_number(value.data(), where("readout", key)) * 1e-3;
      } else {
        throw ValidationError(where("readout", key) + ": unknown key");
      }
    }
  }

  if (const auto th = tree.get_child_optional("thermal")) {
    for (const auto& [key, value] : *th) {
      if (key != "p_th0") throw ValidationError(where("thermal", key) + ": unknown key");
      d.readout.thermal_p0 = parse_number(value.data(), where("thermal", key));
    }
  }

  d.validate();
  return d;
}

DeviceSpec load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open profile '" + path + "'");
  return parse_profile(in, path);
}

void write_profile(std::ostream& out, const DeviceSpec& d) {
  out << std::setprecision(12);
  out << "[levels]\ntransitions_ghz = ";
  for (int j = 1; j < d.n_levels(); ++j)
    out << (j > 1 ? ", " : "") << d.transition_freq(j - 1, j) / kGHz;
  double scale = 0.0;
  for (int j = 0; j < d.n_levels(); ++j)
    for (int k = j + 1; k < d.n_levels(); ++k)
      if (scale == 0.0 && d.drive_couplings(j, k) != 0.0) scale = std::abs(d.drive_couplings(j, k));
  if (scale == 0.0) scale = kMHz;
  out << "\n\n[couplings]\nscale_mhz = " << scale / kMHz << '\n';
  for (int j = 0; j < d.n_levels(); ++j)
    for (int k = j + 1; k < d.n_levels(); ++k) out << j << k << " = " << d.drive_couplings(j, k) / scale << '\n';
  out << "\n[decoherence]\ncoherence_shape = "
      << (d.decoherence.coherence_shape == CoherenceShape::kGaussian ? "gaussian" : "exponential") << '\n';
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) out << "gamma_" << i << j << "_khz = " << d.decoherence.gamma(i, j) / kkHz << '\n';
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) out << "dephasing_" << i << j << "_khz = " << d.decoherence.pure_dephasing(i, j) / kkHz << '\n';
  const auto& v = d.readout.voltage_levels;
  out << "\n[readout]\nlevels_mv = " << v[0] * 1e3 << ", " << v[1] * 1e3 << ", " << v[2] * 1e3
      << "\nnoise_mv = " << d.readout.noise_sigma * 1e3 << "\n\n[thermal]\np_th0 = " << d.readout.thermal_p0 << '\n';
}

}  // namespace qutrit::cli
