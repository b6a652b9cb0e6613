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

#include "qutrit_cli/io.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace qutrit::cli {

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void Manifest::write(std::ostream& out) const {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  out << "# qutrit " << kToolVersion << '\n'
      << "# command: " << command << '\n'
      << "# config_hash: " << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(config) << std::dec
      << std::setfill(' ') << '\n'
      << "# seed: " << seed << '\n'
      << "# timestamp: " << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ") << '\n';
}

std::vector<double> parse_range(const std::string& text) {
  std::istringstream ss(text);
  double a = 0.0, b = 0.0;
  long n = 0;
  char c1 = 0, c2 = 0;
  std::string rest;
  if (!(ss >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || (ss >> rest))
    throw ValidationError("range '" + text + "' must look like start:stop:count");
  if (n < 1) throw ValidationError("range '" + text + "': count must be at least 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

CMatrix read_matrix(std::istream& in, const std::string& source) {
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        throw ValidationError(source + ":" + std::to_string(lineno) + ": '" + tok + "' is not a number");
      values.push_back(v);
    }
  }
  if (values.empty() || values.size() % 2 != 0)
    throw ValidationError(source + ": expected an even, non-zero count of numbers (re im pairs)");
  const std::size_t n2 = values.size() / 2;
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n2))));
  if (static_cast<std::size_t>(n * n) != n2)
    throw ValidationError(source + ": " + std::to_string(n2) + " entries do not form a square matrix");
  CMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      const std::size_t i = 2 * static_cast<std::size_t>(r * n + c);
      m(r, c) = Complex(values[i], values[i + 1]);
    }
  return m;
}

CMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open matrix file '" + path + "'");
  return read_matrix(in, path);
}

int worker_count() {
  if (const char* env = std::getenv("QUTRIT_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1)
      throw ValidationError(std::string("QUTRIT_WORKERS='") + env + "' must be a positive integer");
    return static_cast<int>(n);
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

void parallel_for(int n, int workers, const std::function<void(int)>& job) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    for (int i = next++; i < n && !failed; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace qutrit::cli
