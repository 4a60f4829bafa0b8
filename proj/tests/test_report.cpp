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

#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "ibra/online.hpp"
#include "ibra/report.hpp"

using namespace ibra;

namespace {

std::vector<InstanceRecord> synthetic_records(std::size_t runs, std::size_t length) {
  std::vector<InstanceRecord> out;
  for (std::size_t r = 0; r < runs; ++r) {
    for (std::size_t i = 1; i <= length; ++i) {
      InstanceRecord rec;
      rec.run = r;
      rec.index = i;
      rec.instance = "inst_" + std::to_string(i);
      rec.arm = (i + r) % 3;
      rec.action = "count:" + std::to_string(rec.arm + 1);
      const double rel = 0.01 * static_cast<double>((i * 7 + r * 3) % 50);
      const double gap = (i % 9 == 0) ? 0.25 : 0.0;
      const double nofeas = (i % 17 == 0) ? 1.0 : 0.0;
      rec.score = make_score(rel, nofeas > 0.0 ? 1.0 : gap, nofeas, 10 * i + r);
      rec.status = nofeas > 0.0 ? "node_limit" : "optimal";
      if (nofeas == 0.0) rec.incumbent_value = -static_cast<double>(i) - 0.125;
      rec.baseline_f = 0.3 + 0.001 * static_cast<double>(i);
      out.push_back(rec);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("batch windows partition the series") {
  const auto w50 = batch_windows(50);
  REQUIRE(w50.size() == 5);
  for (std::size_t p = 0; p < 5; ++p) {
    CHECK(w50[p].first == 10 * p + 1);
    CHECK(w50[p].second == 10 * p + 10);
  }
  const auto w20 = batch_windows(20);
  REQUIRE(w20.size() == 5);
  CHECK(w20[4] == std::pair<std::size_t, std::size_t>{17, 20});
  const auto w7 = batch_windows(7);
  REQUIRE(w7.size() == 5);
  CHECK(w7[0] == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(w7[1] == std::pair<std::size_t, std::size_t>{3, 4});
  CHECK(w7[4] == std::pair<std::size_t, std::size_t>{7, 7});
  CHECK(batch_windows(3).size() == 3);
  CHECK_THROWS_AS(batch_windows(10, 0), std::invalid_argument);
}

TEST_CASE("window averages recompute from the records") {
  const auto records = synthetic_records(3, 50);
  const SeriesReport report = build_report("thompson", 1, records);
  CHECK(report.runs == 3);
  CHECK(report.length == 50);
  REQUIRE(report.windows.size() == 5);
  for (const auto& w : report.windows) {
    double f = 0.0, rel = 0.0, gap = 0.0, nofeas = 0.0, tree = 0.0, speed = 0.0;
    std::size_t count = 0;
    for (const auto& r : records) {
      if (r.index < w.first || r.index > w.last) continue;
      f += r.score.reltime + r.score.gap + r.score.nofeas;
      rel += r.score.reltime;
      gap += r.score.gap;
      nofeas += r.score.nofeas;
      tree += static_cast<double>(r.score.tree_size);
      speed += r.score.f - *r.baseline_f;
      ++count;
    }
    CHECK(w.count == 30);
    CHECK(count == 30);
    CHECK(w.f == doctest::Approx(f / count).epsilon(1e-12));
    CHECK(w.reltime == doctest::Approx(rel / count).epsilon(1e-12));
    CHECK(w.gap == doctest::Approx(gap / count).epsilon(1e-12));
    CHECK(w.nofeas == doctest::Approx(nofeas / count).epsilon(1e-12));
    CHECK(w.tree_size == doctest::Approx(tree / count).epsilon(1e-12));
    REQUIRE(w.speedup);
    CHECK(*w.speedup == doctest::Approx(speed / count).epsilon(1e-12));
  }
}

TEST_CASE("across-run statistics") {
  const auto records = synthetic_records(4, 20);
  const SeriesReport report = build_report("ucb2", 2, records);
  std::map<std::size_t, std::vector<double>> per_run;
  for (const auto& r : records) per_run[r.run].push_back(r.score.f);
  std::vector<double> means;
  for (auto& [run, f] : per_run) {
    double s = 0.0;
    for (double v : f) s += v;
    means.push_back(s / static_cast<double>(f.size()));
    CHECK(report.weighted_objectives[run] == doctest::Approx(weighted_objective(f)));
  }
  double m = 0.0;
  for (double v : means) m += v;
  m /= 4.0;
  double var = 0.0;
  for (double v : means) var += (v - m) * (v - m);
  var /= 3.0;
  CHECK(report.mean_f == doctest::Approx(m));
  CHECK(report.stderr_f == doctest::Approx(std::sqrt(var / 4.0)));
  REQUIRE(report.mean_speedup);
  CHECK(report.overall.f == doctest::Approx(m));
}

TEST_CASE("speedup is absent without baseline scores") {
  auto records = synthetic_records(1, 10);
  for (auto& r : records) r.baseline_f.reset();
  const SeriesReport report = build_report("thompson", 0, records);
  CHECK_FALSE(report.mean_speedup);
  CHECK_FALSE(report.overall.speedup);
  CHECK(to_json(report)["mean_speedup"].is_null());
}

TEST_CASE("records CSV round trip preserves every field") {
  auto records = synthetic_records(2, 15);
  records[3].error = "lp failed, at node 3";
  const std::string csv = records_csv(records);
  const auto back = parse_records_csv(csv);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].run == records[i].run);
    CHECK(back[i].index == records[i].index);
    CHECK(back[i].instance == records[i].instance);
    CHECK(back[i].arm == records[i].arm);
    CHECK(back[i].action == records[i].action);
    CHECK(back[i].score.reltime == records[i].score.reltime);
    CHECK(back[i].score.gap == records[i].score.gap);
    CHECK(back[i].score.nofeas == records[i].score.nofeas);
    CHECK(back[i].score.tree_size == records[i].score.tree_size);
    CHECK(back[i].score.f == records[i].score.f);
    CHECK(back[i].status == records[i].status);
    CHECK(back[i].incumbent_value == records[i].incumbent_value);
    CHECK(back[i].baseline_f == records[i].baseline_f);
  }
  CHECK(back[3].error == std::optional<std::string>("lp failed; at node 3"));
  CHECK(records_csv(back) == csv);
  const SeriesReport a = build_report("x", 0, records);
  const SeriesReport b = build_report("x", 0, back);
  CHECK(windows_csv(a) == windows_csv(b));
}

TEST_CASE("malformed records are rejected") {
  CHECK_THROWS(parse_records_csv("nope\n"));
  const std::string header = records_csv({});
  CHECK_THROWS(parse_records_csv(header + "0,1,a,0,count:1,x,0,0,1,0,optimal,,,,\n"));
  CHECK_THROWS(parse_records_csv(header + "0,1,a\n"));
}

TEST_CASE("table lists the overall column and five windows") {
  const SeriesReport report = build_report("thompson", 0, synthetic_records(1, 50));
  const std::string table = format_table(report);
  CHECK(table.find("1-50") != std::string::npos);
  CHECK(table.find("41-50") != std::string::npos);
  CHECK(table.find("speedup") != std::string::npos);
  const std::string csv = windows_csv(report);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}
