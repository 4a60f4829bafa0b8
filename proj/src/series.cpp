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

#include "ibra/series.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "ibra/mps.hpp"

namespace ibra {

std::string_view to_string(PerturbMode mode) {
  switch (mode) {
    case PerturbMode::kBnd: return "bnd";
    case PerturbMode::kObj: return "obj";
    case PerturbMode::kRhs: return "rhs";
    case PerturbMode::kMat: return "mat";
    case PerturbMode::kCombined: return "combined";
  }
  return "?";
}

PerturbMode perturb_mode_from_string(std::string_view text) {
  for (auto mode : {PerturbMode::kBnd, PerturbMode::kObj, PerturbMode::kRhs,
                    PerturbMode::kMat, PerturbMode::kCombined}) {
    if (to_string(mode) == text) return mode;
  }
  throw std::invalid_argument("unknown perturbation mode '" + std::string(text) + "'");
}

void validate(const SeriesSpec& spec) {
  if (spec.count < 1) throw std::invalid_argument("series count must be >= 1");
  if (!(spec.epsilon >= 0.0 && spec.epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1)");
  }
  validate(spec.base_instance);
}

namespace {

class Perturber {
 public:
  Perturber(std::uint64_t seed, std::size_t index, double epsilon)
      : dist_(1.0 - epsilon, 1.0 + epsilon) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
    rng_.seed(seq);
  }

  double factor() { return dist_(rng_); }

  void objective(MipInstance& inst) {
    for (double& c : inst.objective) {
      if (c != 0.0) c *= factor();
    }
  }

  void rhs(MipInstance& inst) {
    for (std::size_t k = 0; k < inst.num_rows(); ++k) {
      perturb_pair(inst.row_lower[k], inst.row_upper[k], false);
    }
  }

  void bounds(MipInstance& inst) {
    for (std::size_t j = 0; j < inst.num_vars(); ++j) {
      perturb_pair(inst.var_lower[j], inst.var_upper[j], inst.integer_mask[j]);
    }
  }

  void matrix(MipInstance& inst) {
    for (std::size_t k = 0; k < inst.num_rows(); ++k) {
      for (auto& e : inst.rows.mutable_row(k)) e.value *= factor();
    }
  }

 private:
  // Equal sides share one draw so equalities and fixings survive.
  void perturb_pair(double& lo, double& up, bool integral) {
    if (lo == up) {
      if (std::isfinite(lo)) {
        double v = lo * factor();
        if (integral) v = std::round(v);
        lo = up = v;
      }
      return;
    }
    if (std::isfinite(lo)) lo *= factor();
    if (std::isfinite(up)) up *= factor();
    if (lo > up) std::swap(lo, up);
    if (integral) {
      lo = std::floor(lo);
      up = std::ceil(up);
    }
  }

  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> dist_;
};

}  // namespace

MipInstance series_member(const SeriesSpec& spec, std::size_t index) {
  MipInstance inst = spec.base_instance;
  inst.name = (spec.base_instance.name.empty() ? std::string("series")
                                               : spec.base_instance.name) +
              "_" + std::to_string(index);
  if (spec.epsilon == 0.0) return inst;
  Perturber p(spec.seed, index, spec.epsilon);
  const bool all = spec.mode == PerturbMode::kCombined;
  if (all || spec.mode == PerturbMode::kObj) p.objective(inst);
  if (all || spec.mode == PerturbMode::kRhs) p.rhs(inst);
  if (all || spec.mode == PerturbMode::kBnd) p.bounds(inst);
  if (all || spec.mode == PerturbMode::kMat) p.matrix(inst);
  return inst;
}

std::vector<MipInstance> generate_series(const SeriesSpec& spec) {
  validate(spec);
  std::vector<MipInstance> out;
  out.reserve(spec.count);
  for (std::size_t i = 1; i <= spec.count; ++i) out.push_back(series_member(spec, i));
  return out;
}

nlohmann::json sidecar_json(const SeriesSpec& spec,
                            const std::vector<std::string>& files) {
  return nlohmann::json{{"base_name", spec.base_instance.name},
                        {"mode", std::string(to_string(spec.mode))},
                        {"count", spec.count},
                        {"epsilon", spec.epsilon},
                        {"seed", spec.seed},
                        {"files", files},
                        {"base_mps", write_mps(spec.base_instance)}};
}

SeriesSpec spec_from_sidecar(const nlohmann::json& sidecar) {
  SeriesSpec spec;
  spec.base_instance = parse_mps(sidecar.at("base_mps").get<std::string>());
  spec.mode = perturb_mode_from_string(sidecar.at("mode").get<std::string>());
  spec.count = sidecar.at("count").get<std::size_t>();
  spec.epsilon = sidecar.at("epsilon").get<double>();
  spec.seed = sidecar.at("seed").get<std::uint64_t>();
  validate(spec);
  return spec;
}

std::vector<std::string> write_series(const SeriesSpec& spec,
                                      const std::filesystem::path& dir) {
  auto series = generate_series(spec);
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (const auto& inst : series) {
    std::string file = inst.name + ".mps";
    write_mps_file(dir / file, inst);
    files.push_back(std::move(file));
  }
  std::ofstream side(dir / std::string(kSidecarName), std::ios::binary);
  if (!side) throw std::runtime_error("cannot write sidecar in " + dir.string());
  side << sidecar_json(spec, files).dump(2) << '\n';
  return files;
}

std::vector<std::filesystem::path> manifest_files(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<fs::path> out;
  const fs::path sidecar = dir / std::string(kSidecarName);
  if (fs::exists(sidecar)) {
    std::ifstream in(sidecar);
    auto j = nlohmann::json::parse(in);
    for (const auto& f : j.at("files")) out.push_back(dir / f.get<std::string>());
    return out;
  }
  std::vector<std::pair<long long, fs::path>> keyed;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".mps") continue;
    const std::string stem = entry.path().stem().string();
    const auto us = stem.rfind('_');
    long long idx = -1;
    if (us != std::string::npos) {
      try {
        idx = std::stoll(stem.substr(us + 1));
      } catch (const std::exception&) {
        idx = -1;
      }
    }
    keyed.emplace_back(idx, entry.path());
  }
  std::sort(keyed.begin(), keyed.end());
  for (auto& [idx, path] : keyed) out.push_back(std::move(path));
  return out;
}

}  // namespace ibra
