// Copyright 2026 The ibra Authors
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

#ifndef IBRA_MPS_HPP_
#define IBRA_MPS_HPP_

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ibra/instance.hpp"

namespace ibra {

// Parse failure in free-format MPS input, tagged with a 1-based line number.
class MpsError : public std::runtime_error {
 public:
  MpsError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Reads free-format MPS (NAME, ROWS, COLUMNS with INTORG/INTEND markers,
// RHS, RANGES, BOUNDS, ENDATA). Variables default to [0, +inf) and
// continuous; L/G/E rows map to (-inf, rhs], [rhs, +inf), [rhs, rhs].
MipInstance parse_mps(std::string_view text);

// Emits free-format MPS; parse_mps(write_mps(x)) reproduces x exactly for
// instances whose names contain no whitespace.
std::string write_mps(const MipInstance& inst);

// File helpers. read_mps_file throws std::runtime_error when the file cannot
// be opened and MpsError on malformed content.
MipInstance read_mps_file(const std::filesystem::path& path);
void write_mps_file(const std::filesystem::path& path, const MipInstance& inst);

}  // namespace ibra

#endif  // IBRA_MPS_HPP_
