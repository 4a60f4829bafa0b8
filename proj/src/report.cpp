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

#include "ibra/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ibra/online.hpp"

namespace ibra {

std::optional<double> InstanceRecord::speedup() const {
  if (!baseline_f) return std::nullopt;
  return score.f - *baseline_f;
}

std::vector<std::pair<std::size_t, std::size_t>> batch_windows(std::size_t length,
                                                               std::size_t parts) {
  if (parts == 0) throw std::invalid_argument("need at least one window");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t base = length / parts;
  const std::size_t extra = length % parts;
  std::size_t first = 1;
  for (std::size_t p = 0; p < parts; ++p) {
    const std::size_t size = base + (p < extra ? 1 : 0);
    if (size == 0) continue;
    out.emplace_back(first, first + size - 1);
    first += size;
  }
  return out;
}

WindowStats window_stats(const std::vector<InstanceRecord>& records, std::size_t first,
                         std::size_t last) {
  WindowStats w;
  w.first = first;
  w.last = last;
  double speedup_sum = 0.0;
  std::size_t speedup_count = 0;
  for (const auto& r : records) {
    if (r.index < first || r.index > last) continue;
    ++w.count;
    w.f += r.score.f;
    w.reltime += r.score.reltime;
    w.gap += r.score.gap;
    w.nofeas += r.score.nofeas;
    w.tree_size += static_cast<double>(r.score.tree_size);
    if (auto s = r.speedup()) {
      speedup_sum += *s;
      ++speedup_count;
    }
  }
  if (w.count > 0) {
    const double c = static_cast<double>(w.count);
    w.f /= c;
    w.reltime /= c;
    w.gap /= c;
    w.nofeas /= c;
    w.tree_size /= c;
  }
  if (speedup_count > 0 && speedup_count == w.count) {
    w.speedup = speedup_sum / static_cast<double>(speedup_count);
  }
  return w;
}

namespace {

std::pair<double, double> mean_and_stderr(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

std::string num(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

nlohmann::ordered_json window_json(const WindowStats& w) {
  nlohmann::ordered_json j;
  j["first"] = w.first;
  j["last"] = w.last;
  j["count"] = w.count;
  j["f"] = w.f;
  j["reltime"] = w.reltime;
  j["gap"] = w.gap;
  j["nofeas"] = w.nofeas;
  j["tree_size"] = w.tree_size;
  if (w.speedup) {
    j["speedup"] = *w.speedup;
  } else {
    j["speedup"] = nullptr;
  }
  return j;
}

std::string clean_field(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

}  // namespace

SeriesReport build_report(std::string bandit, std::uint64_t seed,
                          std::vector<InstanceRecord> records) {
  SeriesReport report;
  report.bandit = std::move(bandit);
  report.seed = seed;
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return a.run != b.run ? a.run < b.run : a.index < b.index;
  });
  for (const auto& r : records) {
    report.runs = std::max(report.runs, r.run + 1);
    report.length = std::max(report.length, r.index);
  }
  report.records = std::move(records);
  report.overall = window_stats(report.records, 1, report.length);
  for (auto [first, last] : batch_windows(report.length)) {
    report.windows.push_back(window_stats(report.records, first, last));
  }

  std::map<std::size_t, std::vector<const InstanceRecord*>> by_run;
  for (const auto& r : report.records) by_run[r.run].push_back(&r);
  std::vector<double> run_means;
  std::vector<double> run_speedups;
  bool all_speedups = true;
  for (const auto& [run, recs] : by_run) {
    std::vector<double> f;
    double speed = 0.0;
    for (const auto* r : recs) {
      f.push_back(r->score.f);
      if (auto s = r->speedup()) {
        speed += *s;
      } else {
        all_speedups = false;
      }
    }
    report.weighted_objectives.push_back(weighted_objective(f));
    run_means.push_back(mean_and_stderr(f).first);
    run_speedups.push_back(speed / static_cast<double>(recs.size()));
  }
  std::tie(report.mean_f, report.stderr_f) = mean_and_stderr(run_means);
  if (all_speedups && !run_speedups.empty()) {
    auto [m, se] = mean_and_stderr(run_speedups);
    report.mean_speedup = m;
    report.stderr_speedup = se;
  }
  return report;
}

nlohmann::ordered_json to_json(const SeriesReport& report) {
  nlohmann::ordered_json j;
  j["bandit"] = report.bandit;
  j["seed"] = report.seed;
  j["runs"] = report.runs;
  j["length"] = report.length;
  if (!report.settings.is_null()) j["settings"] = report.settings;
  j["mean_f"] = report.mean_f;
  j["stderr_f"] = report.stderr_f;
  if (report.mean_speedup) {
    j["mean_speedup"] = *report.mean_speedup;
    j["stderr_speedup"] = *report.stderr_speedup;
  } else {
    j["mean_speedup"] = nullptr;
    j["stderr_speedup"] = nullptr;
  }
  j["weighted_objective"] = report.weighted_objectives;
  j["overall"] = window_json(report.overall);
  auto windows = nlohmann::ordered_json::array();
  for (const auto& w : report.windows) windows.push_back(window_json(w));
  j["windows"] = windows;
  auto recs = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    nlohmann::ordered_json x;
    x["run"] = r.run;
    x["index"] = r.index;
    x["instance"] = r.instance;
    x["arm"] = r.arm;
    x["action"] = r.action;
    x["reltime"] = r.score.reltime;
    x["gap"] = r.score.gap;
    x["nofeas"] = r.score.nofeas;
    x["tree_size"] = r.score.tree_size;
    x["f"] = r.score.f;
    x["status"] = r.status;
    x["incumbent_value"] = r.incumbent_value ? nlohmann::ordered_json(*r.incumbent_value) : nullptr;
    x["baseline_f"] = r.baseline_f ? nlohmann::ordered_json(*r.baseline_f) : nullptr;
    auto s = r.speedup();
    x["speedup"] = s ? nlohmann::ordered_json(*s) : nullptr;
    if (r.error) x["error"] = *r.error;
    recs.push_back(std::move(x));
  }
  j["records"] = recs;
  return j;
}

namespace {

constexpr std::string_view kRecordHeader =
    "run,index,instance,arm,action,reltime,gap,nofeas,tree_size,f,status,incumbent_value,"
    "baseline_f,speedup,error";

}  // namespace

std::string records_csv(const std::vector<InstanceRecord>& records) {
  std::ostringstream out;
  out << kRecordHeader << '\n';
  for (const auto& r : records) {
    out << r.run << ',' << r.index << ',' << clean_field(r.instance) << ',' << r.arm << ','
        << r.action << ',' << num(r.score.reltime) << ',' << num(r.score.gap) << ','
        << num(r.score.nofeas) << ',' << r.score.tree_size << ',' << num(r.score.f) << ','
        << r.status << ',' << (r.incumbent_value ? num(*r.incumbent_value) : "") << ','
        << (r.baseline_f ? num(*r.baseline_f) : "") << ','
        << (r.speedup() ? num(*r.speedup()) : "") << ','
        << (r.error ? clean_field(*r.error) : "") << '\n';
  }
  return out.str();
}

std::vector<InstanceRecord> parse_records_csv(std::string_view csv) {
  std::vector<InstanceRecord> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error("records line " + std::to_string(line_no) + ": " + msg);
  };
  while (pos < csv.size()) {
    auto end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kRecordHeader) fail("unexpected header");
      continue;
    }
    std::vector<std::string> f;
    std::size_t p = 0;
    while (true) {
      auto c = line.find(',', p);
      if (c == std::string_view::npos) {
        f.emplace_back(line.substr(p));
        break;
      }
      f.emplace_back(line.substr(p, c - p));
      p = c + 1;
    }
    if (f.size() != 15) fail("expected 15 fields");
    auto to_d = [&](const std::string& s) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) fail("bad number '" + s + "'");
      return v;
    };
    auto to_u = [&](const std::string& s) {
      std::size_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) fail("bad integer '" + s + "'");
      return v;
    };
    InstanceRecord r;
    r.run = to_u(f[0]);
    r.index = to_u(f[1]);
    r.instance = f[2];
    r.arm = to_u(f[3]);
    r.action = f[4];
    r.score = make_score(to_d(f[5]), to_d(f[6]), to_d(f[7]), to_u(f[8]));
    r.status = f[10];
    if (!f[11].empty()) r.incumbent_value = to_d(f[11]);
    if (!f[12].empty()) r.baseline_f = to_d(f[12]);
    if (!f[14].empty()) r.error = f[14];
    out.push_back(std::move(r));
  }
  return out;
}

std::string windows_csv(const SeriesReport& report) {
  std::ostringstream out;
  out << "window,count,f,reltime,gap,nofeas,tree_size,speedup\n";
  auto row = [&](const std::string& name, const WindowStats& w) {
    out << name << ',' << w.count << ',' << num(w.f) << ',' << num(w.reltime) << ','
        << num(w.gap) << ',' << num(w.nofeas) << ',' << num(w.tree_size) << ','
        << (w.speedup ? num(*w.speedup) : "") << '\n';
  };
  row(std::to_string(report.overall.first) + "-" + std::to_string(report.overall.last),
      report.overall);
  for (const auto& w : report.windows) {
    row(std::to_string(w.first) + "-" + std::to_string(w.last), w);
  }
  return out.str();
}

std::string format_table(const SeriesReport& report) {
  std::ostringstream out;
  char buf[64];
  auto label = [](const WindowStats& w) {
    return std::to_string(w.first) + "-" + std::to_string(w.last);
  };
  std::snprintf(buf, sizeof buf, "%-10s", "metric");
  out << buf;
  std::snprintf(buf, sizeof buf, "%20s", label(report.overall).c_str());
  out << buf;
  for (const auto& w : report.windows) {
    std::snprintf(buf, sizeof buf, "%12s", label(w).c_str());
    out << buf;
  }
  out << '\n';
  auto line = [&](const char* name, auto get, const char* fmt) {
    std::snprintf(buf, sizeof buf, "%-10s", name);
    out << buf;
    std::snprintf(buf, sizeof buf, fmt, get(report.overall));
    std::string overall = buf;
    if (std::string_view(name) == "f") {
      std::snprintf(buf, sizeof buf, " +- %.3f", report.stderr_f);
      overall += buf;
    }
    std::snprintf(buf, sizeof buf, "%20s", overall.c_str());
    out << buf;
    for (const auto& w : report.windows) {
      std::snprintf(buf, sizeof buf, fmt, get(w));
      std::string cell = buf;
      std::snprintf(buf, sizeof buf, "%12s", cell.c_str());
      out << buf;
    }
    out << '\n';
  };
  line("f", [](const WindowStats& w) { return w.f; }, "%.3f");
  line("reltime", [](const WindowStats& w) { return w.reltime; }, "%.3f");
  line("gap", [](const WindowStats& w) { return w.gap; }, "%.3f");
  line("nofeas", [](const WindowStats& w) { return w.nofeas; }, "%.3f");
  line("tree_size", [](const WindowStats& w) { return w.tree_size; }, "%.0f");
  if (report.overall.speedup) {
    line("speedup", [](const WindowStats& w) { return w.speedup.value_or(0.0); }, "%+.4f");
  }
  return out.str();
}

}  // namespace ibra
