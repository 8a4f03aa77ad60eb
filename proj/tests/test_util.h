// Copyright (c) 2026 The svs Authors
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

#ifndef SVS_TESTS_TEST_UTIL_H_
#define SVS_TESTS_TEST_UTIL_H_

#include <cmath>
#include <complex>
#include <unistd.h>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

namespace svs::testing {

// Fresh scratch directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    namespace fs = std::filesystem;
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("svs_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

inline std::vector<float> Sine(double hz, double seconds, int sr,
                               double amp = 0.5) {
  std::vector<float> out(static_cast<size_t>(std::llround(seconds * sr)));
  for (size_t n = 0; n < out.size(); ++n) {
    out[n] = static_cast<float>(amp * std::sin(2.0 * M_PI * hz * n / sr));
  }
  return out;
}

// Brute-force DFT magnitudes of one Hann-windowed frame (bins 0..n/2).
inline std::vector<double> NaiveDftMagnitude(const std::vector<float>& x,
                                             size_t start, size_t n) {
  std::vector<double> mag(n / 2 + 1);
  for (size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (size_t j = 0; j < n; ++j) {
      const double w = 0.5 - 0.5 * std::cos(2.0 * M_PI * j / n);
      acc += w * x[start + j] *
             std::polar(1.0, -2.0 * M_PI * static_cast<double>(k * j) / n);
    }
    mag[k] = std::abs(acc);
  }
  return mag;
}

// Fixture corpus location when a real Opencpop tree is configured.
inline std::string OpencpopDir() {
  const char* env = std::getenv("OPENCPOP_DIR");
  return env ? env : "";
}

}  // namespace svs::testing

#endif  // SVS_TESTS_TEST_UTIL_H_
