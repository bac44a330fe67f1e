// Copyright 2026 The bbcstl Authors
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

// Line-protocol test system: echoes every STEP input back as its output.
//
//   echo_plant [--bad-reset] [--die-after N] [--hang-after N] [--garbage-after N]

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

int main(int argc, char** argv) {
  bool bad_reset = false;
  long die_after = -1, hang_after = -1, garbage_after = -1;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    auto count = [&]() -> long {
      if (i + 1 >= argc) {
        std::cerr << "missing value for " << arg << "\n";
        std::exit(1);
      }
      return std::atol(argv[++i]);
    };
    if (arg == "--bad-reset") bad_reset = true;
    else if (arg == "--die-after") die_after = count();
    else if (arg == "--hang-after") hang_after = count();
    else if (arg == "--garbage-after") garbage_after = count();
    else {
      std::cerr << "unknown option " << arg << "\n";
      return 1;
    }
  }

  long steps = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line == "RESET") {
      std::cout << (bad_reset ? "NO" : "OK") << std::endl;
      continue;
    }
    if (line.rfind("STEP", 0) == 0) {
      if (steps == die_after) return 3;
      if (steps == hang_after) std::this_thread::sleep_for(std::chrono::hours(1));
      if (steps == garbage_after) {
        std::cout << "Y not-a-number" << std::endl;
        ++steps;
        continue;
      }
      ++steps;
      std::cout << "Y" << line.substr(4) << std::endl;
      continue;
    }
    std::cout << "ERR unknown command" << std::endl;
  }
  return 0;
}
