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

#ifndef IBRA_SERIES_HPP_
#define IBRA_SERIES_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ibra/instance.hpp"
#include "json.hpp"

namespace ibra {

// Which components of the base instance a series perturbs.
enum class PerturbMode { kBnd, kObj, kRhs, kMat, kCombined };

std::string_view to_string(PerturbMode mode);
PerturbMode perturb_mode_from_string(std::string_view text);

struct SeriesSpec {
  MipInstance base_instance;
  PerturbMode mode = PerturbMode::kObj;
  std::size_t count = 50;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
};

// Throws std::invalid_argument unless count >= 1 and 0 <= epsilon < 1.
void validate(const SeriesSpec& spec);

// Instance i (1-based) scales the selected components by independent draws
// from U[1 - eps, 1 + eps]. Deterministic in (seed, i); the sparsity pattern
// and b- <= b+, l <= u always survive.
std::vector<MipInstance> generate_series(const SeriesSpec& spec);

// One member of the series; generate_series(spec)[i - 1] == series_member(spec, i).
MipInstance series_member(const SeriesSpec& spec, std::size_t index);

// Manifest sidecar written next to the series files. It embeds the base
// instance as MPS text so the series can be regenerated from it alone.
inline constexpr std::string_view kSidecarName = "series.json";

nlohmann::json sidecar_json(const SeriesSpec& spec,
                             const std::vector<std::string>& files);
SeriesSpec spec_from_sidecar(const nlohmann::json& sidecar);

// Writes <name>_<i>.mps for i = 1..count plus the sidecar; returns file names.
std::vector<std::string> write_series(const SeriesSpec& spec,
                                      const std::filesystem::path& dir);

// Instance files of a manifest directory in series order: the sidecar's list
// when present, otherwise *.mps sorted by their trailing _<i> index.
std::vector<std::filesystem::path> manifest_files(const std::filesystem::path& dir);

}  // namespace ibra

#endif  // IBRA_SERIES_HPP_
