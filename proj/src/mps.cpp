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

#include "ibra/mps.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ibra {

MpsError::MpsError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

namespace {

enum class Section { kNone, kName, kRows, kColumns, kRhs, kRanges, kBounds, kEnd };

std::optional<Section> section_from(std::string_view word) {
  if (word == "NAME") return Section::kName;
  if (word == "ROWS") return Section::kRows;
  if (word == "COLUMNS") return Section::kColumns;
  if (word == "RHS") return Section::kRhs;
  if (word == "RANGES") return Section::kRanges;
  if (word == "BOUNDS") return Section::kBounds;
  if (word == "ENDATA") return Section::kEnd;
  return std::nullopt;
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::optional<double> to_number(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || std::isnan(v)) return std::nullopt;
  return v;
}

// Values at or beyond 1e30 are the customary MPS spelling of infinity.
double clamp_infinite(double v) {
  if (v >= 1e30) return kInf;
  if (v <= -1e30) return -kInf;
  return v;
}

enum class RowType { kL, kG, kE };

class Parser {
 public:
  MipInstance run(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      line_ = line_no;
      handle_line(line);
      if (section_ == Section::kEnd) break;
      if (end == text.size()) break;
      pos = end + 1;
    }
    if (section_ != Section::kEnd) fail("missing ENDATA");
    return finish();
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw MpsError(line_, msg); }

  void handle_line(std::string_view line) {
    if (line.empty() || line.front() == '*') return;
    auto tokens = tokenize(line);
    if (tokens.empty()) return;
    const bool indented = std::isspace(static_cast<unsigned char>(line.front()));
    auto next = indented ? std::nullopt : section_from(tokens[0]);
    if (!indented && !next &&
        (section_ == Section::kNone || tokens[0] == "OBJSENSE" ||
         tokens[0] == "SOS")) {
      fail("unknown or unsupported section '" + std::string(tokens[0]) + "'");
    }
    if (next) {
      if (*next <= section_) {
        fail("section " + std::string(tokens[0]) + " out of order");
      }
      if (*next > Section::kRows && section_ < Section::kRows) {
        fail("ROWS section must precede " + std::string(tokens[0]));
      }
      if (*next > Section::kColumns && section_ < Section::kColumns) {
        fail("COLUMNS section must precede " + std::string(tokens[0]));
      }
      section_ = *next;
      if (section_ == Section::kName) {
        if (tokens.size() > 2) fail("NAME takes a single identifier");
        name_ = tokens.size() == 2 ? std::string(tokens[1]) : std::string();
      } else if (tokens.size() > 1) {
        fail("unexpected tokens after section header");
      }
      return;
    }
    switch (section_) {
      case Section::kRows: row_line(tokens); break;
      case Section::kColumns: column_line(tokens); break;
      case Section::kRhs: rhs_line(tokens); break;
      case Section::kRanges: range_line(tokens); break;
      case Section::kBounds: bound_line(tokens); break;
      default: fail("data line outside of a section");
    }
  }

  double number(std::string_view s) const {
    auto v = to_number(s);
    if (!v) fail("non-numeric value '" + std::string(s) + "'");
    return *v;
  }

  void row_line(const std::vector<std::string_view>& t) {
    if (t.size() != 2) fail("ROWS line expects <type> <name>");
    std::string type(t[0]);
    std::transform(type.begin(), type.end(), type.begin(), ::toupper);
    std::string name(t[1]);
    if (row_index_.contains(name) || name == objective_name_) {
      fail("duplicate row '" + name + "'");
    }
    if (type == "N") {
      if (objective_name_.empty()) {
        objective_name_ = name;
      } else {
        free_rows_.insert(name);
      }
      return;
    }
    RowType rt;
    if (type == "L") rt = RowType::kL;
    else if (type == "G") rt = RowType::kG;
    else if (type == "E") rt = RowType::kE;
    else fail("unknown row type '" + type + "'");
    row_index_.emplace(name, row_types_.size());
    row_names_.push_back(name);
    row_types_.push_back(rt);
    row_entries_.emplace_back();
    rhs_.push_back(0.0);
    range_.push_back(std::nullopt);
  }

  // Returns the row index, -1 for the objective row, -2 for ignored N rows.
  long long lookup_row(std::string_view name) const {
    std::string key(name);
    if (key == objective_name_) return -1;
    if (free_rows_.contains(key)) return -2;
    auto it = row_index_.find(key);
    if (it == row_index_.end()) fail("unknown row '" + key + "'");
    return static_cast<long long>(it->second);
  }

  std::size_t lookup_col(std::string_view name) const {
    auto it = col_index_.find(std::string(name));
    if (it == col_index_.end()) fail("unknown column '" + std::string(name) + "'");
    return it->second;
  }

  static std::string_view strip_quotes(std::string_view s) {
    if (s.size() >= 2 && s.front() == '\'' && s.back() == '\'') return s.substr(1, s.size() - 2);
    return s;
  }

  void column_line(const std::vector<std::string_view>& t) {
    if (t.size() == 3 && strip_quotes(t[1]) == "MARKER") {
      if (strip_quotes(t[2]) == "INTORG") {
        in_integer_block_ = true;
      } else if (strip_quotes(t[2]) == "INTEND") {
        in_integer_block_ = false;
      } else {
        fail("unknown marker " + std::string(t[2]));
      }
      return;
    }
    if (t.size() != 3 && t.size() != 5) {
      fail("COLUMNS line expects <col> <row> <value> [<row> <value>]");
    }
    std::string col(t[0]);
    auto [it, inserted] = col_index_.emplace(col, col_names_.size());
    if (inserted) {
      col_names_.push_back(col);
      objective_.push_back(0.0);
      integer_.push_back(in_integer_block_);
      lower_.push_back(0.0);
      upper_.push_back(kInf);
      lower_set_.push_back(false);
    }
    const std::size_t j = it->second;
    for (std::size_t k = 1; k + 1 < t.size(); k += 2) {
      const long long r = lookup_row(t[k]);
      const double v = number(t[k + 1]);
      const std::uint64_t key =
          (static_cast<std::uint64_t>(r + 2) << 32) | static_cast<std::uint64_t>(j);
      if (!seen_entries_.insert(key).second) {
        fail("duplicate entry for column '" + col + "' in row '" +
             std::string(t[k]) + "'");
      }
      if (r == -1) {
        objective_[j] = v;
      } else if (r >= 0 && v != 0.0) {
        row_entries_[static_cast<std::size_t>(r)].push_back({j, v});
      }
    }
  }

  // RHS and RANGES share a layout: an optional set name, then pairs.
  template <typename Fn>
  void pair_line(const std::vector<std::string_view>& t, const char* what, Fn&& fn) {
    std::size_t first = t.size() % 2 == 1 ? 1 : 0;
    if (t.size() < 2 || t.size() > 5 || t.size() - first < 2) {
      fail(std::string(what) + " line expects [<set>] <row> <value> [<row> <value>]");
    }
    for (std::size_t k = first; k + 1 < t.size(); k += 2) {
      fn(lookup_row(t[k]), t[k], number(t[k + 1]));
    }
  }

  void rhs_line(const std::vector<std::string_view>& t) {
    pair_line(t, "RHS", [&](long long r, std::string_view name, double v) {
      if (r == -2) return;
      std::string key(name);
      if (!rhs_seen_.insert(key).second) fail("duplicate RHS for row '" + key + "'");
      if (r == -1) {
        objective_offset_ = -v;
      } else {
        rhs_[static_cast<std::size_t>(r)] = v;
      }
    });
  }

  void range_line(const std::vector<std::string_view>& t) {
    pair_line(t, "RANGES", [&](long long r, std::string_view name, double v) {
      if (r < 0) fail("RANGES entry on objective or free row '" + std::string(name) + "'");
      auto& slot = range_[static_cast<std::size_t>(r)];
      if (slot) fail("duplicate RANGES entry for row '" + std::string(name) + "'");
      slot = v;
    });
  }

  void bound_line(const std::vector<std::string_view>& t) {
    if (t.size() < 2) fail("BOUNDS line too short");
    std::string type(t[0]);
    std::transform(type.begin(), type.end(), type.begin(), ::toupper);
    static const std::array<std::string_view, 5> kValued = {"LO", "UP", "FX", "LI", "UI"};
    static const std::array<std::string_view, 4> kBare = {"MI", "PL", "FR", "BV"};
    const bool valued = std::find(kValued.begin(), kValued.end(), type) != kValued.end();
    const bool bare = std::find(kBare.begin(), kBare.end(), type) != kBare.end();
    if (!valued && !bare) fail("unknown bound type '" + type + "'");

    std::string_view col_name;
    std::optional<double> value;
    if (valued) {
      if (t.size() == 4) {
        col_name = t[2];
      } else if (t.size() == 3) {
        col_name = t[1];
      } else {
        fail("BOUNDS " + type + " expects [<set>] <col> <value>");
      }
      value = clamp_infinite(number(t.back()));
    } else if (t.size() == 2) {
      col_name = t[1];
    } else if (t.size() == 3) {
      if (col_index_.contains(std::string(t[1])) && to_number(t[2])) {
        col_name = t[1];
        value = number(t[2]);
      } else {
        col_name = t[2];
      }
    } else if (t.size() == 4) {
      col_name = t[2];
      value = number(t[3]);
    } else {
      fail("BOUNDS " + type + " has too many fields");
    }
    const std::size_t j = lookup_col(col_name);
    if (type == "LO" || type == "LI") {
      lower_[j] = *value;
      lower_set_[j] = true;
      if (type == "LI") integer_[j] = true;
    } else if (type == "UP" || type == "UI") {
      upper_[j] = *value;
      if (*value < 0.0 && lower_[j] == 0.0 && !lower_set_[j]) lower_[j] = -kInf;
      if (type == "UI") integer_[j] = true;
    } else if (type == "FX") {
      lower_[j] = upper_[j] = *value;
      lower_set_[j] = true;
    } else if (type == "MI") {
      lower_[j] = -kInf;
      lower_set_[j] = true;
    } else if (type == "PL") {
      upper_[j] = kInf;
    } else if (type == "FR") {
      lower_[j] = -kInf;
      upper_[j] = kInf;
      lower_set_[j] = true;
    } else {  // BV
      if (value && *value != 0.0 && *value != 1.0) fail("BV bound value must be 0 or 1");
      lower_[j] = 0.0;
      upper_[j] = 1.0;
      lower_set_[j] = true;
      integer_[j] = true;
    }
  }

  MipInstance finish() {
    MipInstance inst;
    inst.name = name_;
    inst.var_names = col_names_;
    inst.row_names = row_names_;
    inst.objective = objective_;
    inst.objective_offset = objective_offset_;
    inst.var_lower = lower_;
    inst.var_upper = upper_;
    inst.integer_mask = integer_;
    const std::size_t m = row_types_.size();
    inst.rows = SparseMatrix(m, col_names_.size());
    inst.row_lower.resize(m);
    inst.row_upper.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double rhs = clamp_infinite(rhs_[k]);
      double lo = rhs;
      double up = rhs;
      switch (row_types_[k]) {
        case RowType::kL: lo = -kInf; break;
        case RowType::kG: up = kInf; break;
        case RowType::kE: break;
      }
      if (range_[k]) {
        const double r = *range_[k];
        switch (row_types_[k]) {
          case RowType::kL: lo = rhs - std::abs(r); break;
          case RowType::kG: up = rhs + std::abs(r); break;
          case RowType::kE:
            if (r >= 0.0) up = rhs + r; else lo = rhs + r;
            break;
        }
      }
      inst.row_lower[k] = lo;
      inst.row_upper[k] = up;
      try {
        inst.rows.set_row(k, std::move(row_entries_[k]));
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    }
    try {
      validate(inst);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    return inst;
  }

  std::size_t line_ = 0;
  Section section_ = Section::kNone;
  std::string name_;
  std::string objective_name_;
  std::unordered_set<std::string> free_rows_;
  std::unordered_map<std::string, std::size_t> row_index_;
  std::vector<std::string> row_names_;
  std::vector<RowType> row_types_;
  std::vector<std::vector<Entry>> row_entries_;
  std::vector<double> rhs_;
  std::vector<std::optional<double>> range_;
  std::unordered_set<std::string> rhs_seen_;
  std::unordered_map<std::string, std::size_t> col_index_;
  std::vector<std::string> col_names_;
  std::vector<double> objective_;
  std::vector<bool> integer_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<bool> lower_set_;
  std::unordered_set<std::uint64_t> seen_entries_;
  double objective_offset_ = 0.0;
  bool in_integer_block_ = false;
};

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string sanitize(std::string name, const std::string& fallback) {
  if (name.empty()) return fallback;
  for (char& ch : name) {
    if (std::isspace(static_cast<unsigned char>(ch))) ch = '_';
  }
  return name;
}

}  // namespace

MipInstance parse_mps(std::string_view text) { return Parser{}.run(text); }

std::string write_mps(const MipInstance& inst) {
  const std::size_t n = inst.num_vars();
  const std::size_t m = inst.num_rows();
  std::vector<std::string> cols(n);
  std::vector<std::string> rows(m);
  for (std::size_t j = 0; j < n; ++j) {
    cols[j] = sanitize(j < inst.var_names.size() ? inst.var_names[j] : "",
                       "x" + std::to_string(j));
  }
  std::unordered_set<std::string> row_set;
  for (std::size_t k = 0; k < m; ++k) {
    rows[k] = sanitize(k < inst.row_names.size() ? inst.row_names[k] : "",
                       "c" + std::to_string(k));
    row_set.insert(rows[k]);
  }
  std::string obj = "OBJ";
  while (row_set.contains(obj)) obj += '_';

  std::ostringstream out;
  out << "NAME";
  if (!inst.name.empty()) out << ' ' << sanitize(inst.name, "");
  out << "\nROWS\n N  " << obj << '\n';

  // Two-sided rows become G rows with a range; choose the encoding that
  // reproduces both sides exactly when one exists.
  std::vector<double> rhs(m, 0.0);
  std::vector<std::optional<double>> range(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double lo = inst.row_lower[k];
    const double up = inst.row_upper[k];
    char type;
    if (lo == up) {
      type = 'E';
      rhs[k] = lo;
    } else if (lo == -kInf) {
      type = 'L';
      rhs[k] = up;
    } else if (up == kInf) {
      type = 'G';
      rhs[k] = lo;
    } else {
      const double width = up - lo;
      if (lo + width == up || up - width != lo) {
        type = 'G';
        rhs[k] = lo;
      } else {
        type = 'L';
        rhs[k] = up;
      }
      range[k] = width;
    }
    out << ' ' << type << "  " << rows[k] << '\n';
  }

  out << "COLUMNS\n";
  const auto by_col = inst.rows.columns();
  bool in_block = false;
  std::size_t marker = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (inst.integer_mask[j] != in_block) {
      out << "    M" << marker++ << " 'MARKER' "
          << (inst.integer_mask[j] ? "'INTORG'" : "'INTEND'") << '\n';
      in_block = inst.integer_mask[j];
    }
    bool wrote = false;
    if (inst.objective[j] != 0.0) {
      out << "    " << cols[j] << ' ' << obj << ' ' << format_number(inst.objective[j]) << '\n';
      wrote = true;
    }
    for (const auto& e : by_col[j]) {
      out << "    " << cols[j] << ' ' << rows[e.col] << ' ' << format_number(e.value) << '\n';
      wrote = true;
    }
    if (!wrote) out << "    " << cols[j] << ' ' << obj << " 0\n";
  }
  if (in_block) out << "    M" << marker++ << " 'MARKER' 'INTEND'\n";

  out << "RHS\n";
  if (inst.objective_offset != 0.0) {
    out << "    RHS " << obj << ' ' << format_number(-inst.objective_offset) << '\n';
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (rhs[k] != 0.0) out << "    RHS " << rows[k] << ' ' << format_number(rhs[k]) << '\n';
  }
  bool any_range = std::any_of(range.begin(), range.end(), [](const auto& r) { return r.has_value(); });
  if (any_range) {
    out << "RANGES\n";
    for (std::size_t k = 0; k < m; ++k) {
      if (range[k]) out << "    RNG " << rows[k] << ' ' << format_number(*range[k]) << '\n';
    }
  }

  out << "BOUNDS\n";
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = inst.var_lower[j];
    const double up = inst.var_upper[j];
    const std::string& c = cols[j];
    if (lo == up) {
      out << " FX BND " << c << ' ' << format_number(lo) << '\n';
      continue;
    }
    if (lo == -kInf && up == kInf) {
      out << " FR BND " << c << '\n';
      continue;
    }
    if (lo == -kInf) {
      out << " MI BND " << c << '\n';
    } else if (lo != 0.0) {
      out << " LO BND " << c << ' ' << format_number(lo) << '\n';
    }
    if (up != kInf) out << " UP BND " << c << ' ' << format_number(up) << '\n';
  }
  out << "ENDATA\n";
  return out.str();
}

MipInstance read_mps_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_mps(buf.str());
}

void write_mps_file(const std::filesystem::path& path, const MipInstance& inst) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << write_mps(inst);
}

}  // namespace ibra
