// Copyright 2026 The bdris Authors
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

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bdris::experiment {

/// Comma-separated output with RFC 4180 quoting: fields holding a comma,
/// quote, CR or LF are wrapped in quotes with inner quotes doubled. Lines end
/// in "\n".
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

std::string csv_escape(std::string_view field);

/// Shortest round-trip decimal for finite values; "inf", "-inf", "nan"
/// otherwise. Platform independent, so files compare byte for byte.
std::string format_number(double x);

/// Worker count from BDRIS_WORKERS, else the hardware concurrency (at least
/// one). Throws InvalidArgument if the variable is set but not a positive
/// integer.
std::size_t worker_count();

/// Runs task(i) for i in [0, n) on up to `workers` threads. Every task runs;
/// afterwards the exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& task);

}  // namespace bdris::experiment
