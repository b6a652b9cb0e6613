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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "qutrit_cli/cli.hpp"
#include "qutrit_cli/io.hpp"
#include "qutrit_cli/profile.hpp"

namespace qutrit::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

/// First line that is not a manifest comment.
std::string header(const std::string& text) {
  for (const std::string& l : lines(text))
    if (!l.empty() && l[0] != '#') return l;
  return {};
}

std::vector<std::string> body(const std::string& text) {
  std::vector<std::string> v;
  bool seen_header = false;
  for (const std::string& l : lines(text)) {
    if (l.empty() || l[0] == '#') continue;
    if (seen_header) v.push_back(l);
    seen_header = true;
  }
  return v;
}

std::string without_timestamp(const std::string& text) {
  std::string s;
  for (const std::string& l : lines(text))
    if (l.rfind("# timestamp:", 0) != 0) s += l + '\n';
  return s;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qutrit_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    ::setenv(name, value, 1);
  }
  ~ScopedEnv() {
    if (old_.empty()) {
      ::unsetenv(name_);
    } else {
      ::setenv(name_, old_.c_str(), 1);
    }
  }

 private:
  const char* name_;
  std::string old_;
};

TEST(Cli, VersionAndHelpExitZero) {
  const Result v = invoke({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, std::string(kToolVersion) + "\n");
  const Result h = invoke({"decompose", "--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("--grid"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"decompose", "--grid", "many"}).code, 2);
  EXPECT_EQ(invoke({"decompose", "--grid", "4"}).code, 2);
  EXPECT_EQ(invoke({"shifts", "--carrier-ghz", "3", "--detuning-mhz", "10"}).code, 2);
  EXPECT_EQ(invoke({"shifts", "--pair", "20"}).code, 2);
  EXPECT_EQ(invoke({"simulate", "--initial", "hot"}).code, 2);
}

TEST(Cli, DecomposeTableHasPublishedShape) {
  const Result r = invoke({"decompose"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(header(r.out),
            "index,m01_re,m01_im,m12_re,m12_im,m02_re,m02_im,phi0_rad,phi1_rad,phi2_rad,residual,degenerate,selected");
  const auto rows = body(r.out);
  EXPECT_EQ(rows.size(), 5u);
  int selected = 0;
  for (const std::string& row : rows) selected += row.back() == '1';
  EXPECT_EQ(selected, 1);
  const auto manifest = lines(r.out);
  EXPECT_EQ(manifest[0], std::string("# qutrit ") + kToolVersion);
  EXPECT_EQ(manifest[1].rfind("# command: qutrit decompose", 0), 0u);
  EXPECT_EQ(manifest[2].rfind("# config_hash: ", 0), 0u);
}

TEST(Cli, CoarseGridWarnsAndFindsFewerRows) {
  const Result r = invoke({"decompose", "--grid", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(body(r.out).size(), 5u);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(Cli, RerunsAreIdenticalApartFromTimestamp) {
  const Result a = invoke({"decompose", "--grid", "12"});
  const Result b = invoke({"decompose", "--grid", "12"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(without_timestamp(a.out), without_timestamp(b.out));
  const Result c = invoke({"decompose", "--grid", "13"});
  EXPECT_NE(lines(a.out)[2], lines(c.out)[2]);
}

TEST(Cli, MatrixTargets) {
  const fs::path id = scratch("identity.mat");
  write_file(id, "# identity\n1 0 0 0 0 0\n0 0 1 0 0 0\n0 0 0 0 1 0\n");
  const Result r = invoke({"decompose", "--target", id.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(body(r.out).size(), 1u);

  const fs::path bad = scratch("bad.mat");
  write_file(bad, "1 0 0 0\n0 0 1 0\n");
  EXPECT_EQ(invoke({"decompose", "--target", bad.string()}).code, 2);
  write_file(bad, "2 0 0 0 0 0\n0 0 1 0 0 0\n0 0 0 0 1 0\n");
  EXPECT_EQ(invoke({"decompose", "--target", bad.string()}).code, 2);
  EXPECT_EQ(invoke({"decompose", "--target", scratch("absent.mat").string()}).code, 2);
}

TEST(Cli, ShiftsReport) {
  const Result r = invoke({"shifts"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(header(r.out), "quantity,perturbative_mhz,numeric_mhz,relative_deviation");
  EXPECT_NE(r.out.find("# tracking_ambiguous: false"), std::string::npos);
  bool found = false;
  for (const std::string& row : body(r.out)) {
    if (row.rfind("transition_01,", 0) != 0) continue;
    found = true;
    EXPECT_EQ(row[std::string("transition_01,").size()], '-');
  }
  EXPECT_TRUE(found);
}

TEST(Cli, ShiftsResonantCarrierIsAModelError) {
  const Result r = invoke({"shifts", "--pair", "01", "--carrier-ghz", "5.693", "--no-numeric"});
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST(Cli, ShiftsSweepShape) {
  const Result r = invoke({"shifts", "--sweep", "--delta01-mhz", "-10:10:5", "--delta02-mhz", "-40:40:3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(header(r.out), "delta02_mhz,delta01_mhz,shift01_mhz,rabi01_mhz,tracking_ambiguous");
  EXPECT_EQ(body(r.out).size(), 15u);
  EXPECT_EQ(invoke({"shifts", "--sweep", "--delta01-mhz", "1:2"}).code, 2);
}

TEST(Cli, SimulateClosedSystem) {
  const fs::path states = scratch("states.csv");
  const Result r = invoke({"simulate", "--no-decoherence", "--preparations", "0,3", "--states", states.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(header(r.out), "prep,label,fidelity,trace_error,min_eigenvalue,ode_steps");
  const auto rows = body(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].rfind("0,p0,0.9999", 0), 0u) << rows[0];
  EXPECT_NE(r.out.find("# average_fidelity: "), std::string::npos);
  const std::string s = read_file(states);
  EXPECT_EQ(header(s), "prep,row,col,re,im");
  EXPECT_EQ(body(s).size(), 18u);
}

TEST(Cli, SimulateIntegratorFailureExitsFour) {
  const Result r = invoke({"simulate", "--no-decoherence", "--preparations", "0", "--rtol", "1e-300", "--atol", "1e-300"});
  EXPECT_EQ(r.code, 4) << r.err;
}

TEST(Cli, SimulateZeroDurationIsThePhaseGateAlone) {
  const Result r = invoke({"simulate", "--no-decoherence", "--preparations", "0", "--duration-ns", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(body(r.out).size(), 1u);
}

TEST(Cli, TomoStateSelfGenerated) {
  const fs::path rec = scratch("records.csv");
  const Result r = invoke({"tomo", "--self-generate", "--no-decoherence", "--prep", "1", "--write-records", rec.string(),
                           "--restarts", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(header(r.out), "row,col,re,im,ideal_re,ideal_im,diff_re,diff_im");
  EXPECT_EQ(body(r.out).size(), 9u);
  const std::string fid = r.out.substr(r.out.find("# fidelity: ") + 12, 6);
  EXPECT_GE(std::stod(fid), 0.999);

  const Result again = invoke({"tomo", "--records", rec.string(), "--prep", "1", "--no-decoherence", "--restarts", "3"});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(body(again.out), body(r.out));
}

TEST(Cli, TomoMissingRecordsAreListed) {
  const fs::path rec = scratch("partial.csv");
  write_file(rec, "prep_index,analyzer_index,voltage_volts\n0,0,0.1\n0,1,0.2\n");
  const Result r = invoke({"tomo", "--records", rec.string(), "--prep", "0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("(0,2)"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("(0,8)"), std::string::npos) << r.err;
  EXPECT_EQ(invoke({"tomo"}).code, 2);
  EXPECT_EQ(invoke({"tomo", "--self-generate", "--records", rec.string()}).code, 2);
}

TEST(Cli, InvalidWorkerCountExitsTwo) {
  ScopedEnv env("QUTRIT_WORKERS", "zero");
  const Result r = invoke({"decompose", "--grid", "8"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("QUTRIT_WORKERS"), std::string::npos);
}

TEST(Cli, ExecutableReportsExitCodes) {
  const std::string exe = QUTRIT_EXECUTABLE;
  EXPECT_EQ(std::system((exe + " --version > /dev/null").c_str()), 0);
  const int status = std::system((exe + " shifts --pair 01 --carrier-ghz 5.693 --no-numeric > /dev/null 2>&1").c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 3);
}

TEST(Profile, BundledProfileMatchesBuiltInDevice) {
  const DeviceSpec a = load_profile(std::string(QUTRIT_PROFILE_DIR) + "/paper.device");
  const DeviceSpec b = paper_device();
  ASSERT_EQ(a.n_levels(), b.n_levels());
  EXPECT_LT((a.level_freqs - b.level_freqs).norm(), 1e-6 * b.level_freqs.norm());
  EXPECT_LT((a.drive_couplings - b.drive_couplings).norm(), 1e-9 * b.drive_couplings.norm());
  EXPECT_LT((a.decoherence.gamma - b.decoherence.gamma).norm(), 1e-9 * b.decoherence.gamma.norm());
  EXPECT_LT((a.decoherence.pure_dephasing - b.decoherence.pure_dephasing).norm(),
            1e-9 * b.decoherence.pure_dephasing.norm());
  EXPECT_EQ(a.decoherence.coherence_shape, b.decoherence.coherence_shape);
  EXPECT_DOUBLE_EQ(a.readout.thermal_p0, b.readout.thermal_p0);
}

TEST(Profile, WriteThenParseRoundTrips) {
  const DeviceSpec d = paper_device();
  std::stringstream s;
  write_profile(s, d);
  const DeviceSpec back = parse_profile(s);
  EXPECT_LT((back.level_freqs - d.level_freqs).norm(), 1e-6 * d.level_freqs.norm());
  EXPECT_LT((back.drive_couplings - d.drive_couplings).norm(), 1e-9 * d.drive_couplings.norm());
  std::stringstream again;
  write_profile(again, back);
  EXPECT_EQ(again.str(), [&] {
    std::stringstream t;
    write_profile(t, d);
    return t.str();
  }());
}

TEST(Profile, RejectsUnknownAndMissingEntries) {
  std::istringstream unknown_key("[levels]\ntransitions_ghz = 1, 5\ncolour = red\n[couplings]\nscale_mhz = 100\n01 = 1\n");
  EXPECT_THROW(parse_profile(unknown_key), ValidationError);
  std::istringstream unknown_section("[levels]\ntransitions_ghz = 1, 5\n[couplings]\nscale_mhz = 100\n[extra]\nk = 1\n");
  EXPECT_THROW(parse_profile(unknown_section), ValidationError);
  std::istringstream no_levels("[couplings]\nscale_mhz = 100\n01 = 1\n");
  EXPECT_THROW(parse_profile(no_levels), ValidationError);
  EXPECT_THROW(load_profile(scratch("absent.device").string()), ValidationError);
}

TEST(Io, ParseRange) {
  EXPECT_EQ(parse_range("0:1:3"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(parse_range("2:2:1"), (std::vector<double>{2.0}));
  EXPECT_THROW(parse_range("0:1"), ValidationError);
  EXPECT_THROW(parse_range("0:1:0"), ValidationError);
  EXPECT_THROW(parse_range("a:1:3"), ValidationError);
}

TEST(Io, ReadMatrix) {
  std::istringstream in("0 1  1 0 # row one\n-1 0 0 -1\n");
  const CMatrix m = read_matrix(in, "test");
  ASSERT_EQ(m.rows(), 2);
  EXPECT_EQ(m(0, 0), Complex(0.0, 1.0));
  EXPECT_EQ(m(1, 1), Complex(0.0, -1.0));
  std::istringstream odd("1 0 0\n");
  EXPECT_THROW(read_matrix(odd, "odd"), ValidationError);
}

TEST(Io, ParallelForIsOrderedAndPropagatesErrors) {
  std::vector<int> v(100, -1);
  parallel_for(100, 4, [&](int i) { v[static_cast<std::size_t>(i)] = i * i; });
  for (int i = 0; i < 100; ++i) EXPECT_EQ(v[static_cast<std::size_t>(i)], i * i);
  EXPECT_THROW(parallel_for(10, 3,
                            [](int i) {
                              if (i == 7) throw NumericalError("job 7");
                            }),
               NumericalError);
}

TEST(Io, ManifestHashTracksConfig) {
  std::ostringstream a, b;
  Manifest{"qutrit x", "k=1\n", 3}.write(a);
  Manifest{"qutrit x", "k=2\n", 3}.write(b);
  EXPECT_NE(lines(a.str())[2], lines(b.str())[2]);
  EXPECT_EQ(lines(a.str())[3], "# seed: 3");
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
}

}  // namespace
}  // namespace qutrit::cli
