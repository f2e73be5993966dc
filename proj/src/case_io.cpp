// Copyright 2026 The gridctl Authors
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

#include "gridctl/case_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "gridctl/error.hpp"

namespace gridctl {
namespace {

struct Row {
  std::vector<double> cells;
  int line = 0;
};

struct Matrix {
  std::vector<Row> rows;
  int line = 0;  // line of the opening bracket
};

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double ParseNumber(std::string_view token, int line) {
  std::string lower(token);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "inf" || lower == "+inf") return std::numeric_limits<double>::infinity();
  if (lower == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw MalformedCaseError(line, "non-numeric cell '" + std::string(token) + "'");
  }
  return value;
}

// Splits the text into the scalar assignments and matrices it defines.
class CaseReader {
 public:
  explicit CaseReader(std::string_view text) : text_(text) {}

  void Read() {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      const std::size_t nl = text_.find('\n', pos);
      std::string_view line =
          text_.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      ++line_no;
      HandleLine(StripComment(line), line_no);
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    if (in_matrix_) throw MalformedCaseError(current_.line, "matrix '" + matrix_name_ + "' is not closed");
  }

  std::string name;
  std::map<std::string, std::pair<double, int>> scalars;
  std::map<std::string, Matrix> matrices;

 private:
  static std::string_view StripComment(std::string_view line) {
    const auto pct = line.find('%');
    return pct == std::string_view::npos ? line : line.substr(0, pct);
  }

  void HandleLine(std::string_view line, int line_no) {
    if (skipping_cell_) {
      if (line.find('}') != std::string_view::npos) skipping_cell_ = false;
      return;
    }
    if (in_matrix_) {
      ConsumeMatrixText(line, line_no);
      return;
    }
    const std::string_view t = Trim(line);
    if (t.empty()) return;
    if (t.rfind("function", 0) == 0) {
      const auto eq = t.find('=');
      if (eq != std::string_view::npos) name = std::string(Trim(t.substr(eq + 1)));
      return;
    }
    if (t.rfind("mpc.", 0) != 0) return;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) return;
    const std::string key(Trim(t.substr(4, eq - 4)));
    std::string_view rhs = Trim(t.substr(eq + 1));
    if (!rhs.empty() && rhs.front() == '[') {
      in_matrix_ = true;
      matrix_name_ = key;
      current_ = Matrix{};
      current_.line = line_no;
      row_ = Row{};
      ConsumeMatrixText(rhs.substr(1), line_no);
      return;
    }
    if (!rhs.empty() && rhs.front() == '{') {
      if (rhs.find('}') == std::string_view::npos) skipping_cell_ = true;
      return;
    }
    if (!rhs.empty() && rhs.back() == ';') rhs = Trim(rhs.substr(0, rhs.size() - 1));
    if (!rhs.empty() && rhs.front() != '\'' && rhs.front() != '"') {
      scalars[key] = {ParseNumber(rhs, line_no), line_no};
    }
  }

  void FinishRow() {
    if (!row_.cells.empty()) current_.rows.push_back(std::move(row_));
    row_ = Row{};
  }

  void ConsumeMatrixText(std::string_view text, int line_no) {
    std::size_t i = 0;
    while (i < text.size()) {
      const char c = text[i];
      if (c == ' ' || c == '\t' || c == '\r' || c == ',') {
        ++i;
        continue;
      }
      if (c == ';') {
        FinishRow();
        ++i;
        continue;
      }
      if (c == ']') {
        FinishRow();
        matrices[matrix_name_] = std::move(current_);
        in_matrix_ = false;
        return;
      }
      std::size_t j = i;
      while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\r' &&
             text[j] != ',' && text[j] != ';' && text[j] != ']') {
        ++j;
      }
      if (row_.cells.empty()) row_.line = line_no;
      row_.cells.push_back(ParseNumber(text.substr(i, j - i), line_no));
      i = j;
    }
    // A line break inside brackets also ends a row.
    FinishRow();
  }

  std::string_view text_;
  bool in_matrix_ = false;
  bool skipping_cell_ = false;
  std::string matrix_name_;
  Matrix current_;
  Row row_;
};

const Matrix& Require(const CaseReader& reader, const std::string& key, std::size_t min_columns) {
  const auto it = reader.matrices.find(key);
  if (it == reader.matrices.end()) {
    throw MalformedCaseError(0, "missing matrix mpc." + key);
  }
  const Matrix& m = it->second;
  std::size_t width = 0;
  for (const Row& row : m.rows) {
    if (width == 0) width = row.cells.size();
    if (row.cells.size() != width) {
      throw MalformedCaseError(row.line, "mpc." + key + " row has " +
                                             std::to_string(row.cells.size()) +
                                             " columns, expected " + std::to_string(width));
    }
    if (row.cells.size() < min_columns) {
      throw MalformedCaseError(row.line, "mpc." + key + " row needs at least " +
                                             std::to_string(min_columns) + " columns");
    }
  }
  return m;
}

int AsInt(double v, int line, const char* what) {
  if (!std::isfinite(v) || v != std::round(v)) {
    throw MalformedCaseError(line, std::string(what) + " must be an integer");
  }
  return static_cast<int>(v);
}

}  // namespace

RawCase ParseCase(std::string_view text) {
  CaseReader reader(text);
  reader.Read();
  RawCase raw;
  raw.name = reader.name;
  const auto base = reader.scalars.find("baseMVA");
  if (base == reader.scalars.end()) throw MalformedCaseError(0, "missing mpc.baseMVA");
  raw.base_mva = base->second.first;
  if (!(raw.base_mva > 0.0) || !std::isfinite(raw.base_mva)) {
    throw MalformedCaseError(base->second.second, "baseMVA must be positive");
  }

  const Matrix& bus = Require(reader, "bus", 3);
  const Matrix& gen = Require(reader, "gen", 9);
  const Matrix& branch = Require(reader, "branch", 6);
  const Matrix& gencost = Require(reader, "gencost", 4);

  std::set<int> ids;
  for (const Row& r : bus.rows) {
    RawBus b;
    b.id = AsInt(r.cells[0], r.line, "bus number");
    b.type = AsInt(r.cells[1], r.line, "bus type");
    b.pd = r.cells[2];
    b.line = r.line;
    if (!std::isfinite(b.pd)) throw MalformedCaseError(r.line, "bus demand must be finite");
    if (!ids.insert(b.id).second) {
      throw MalformedCaseError(r.line, "duplicate bus number " + std::to_string(b.id));
    }
    raw.buses.push_back(b);
  }
  for (const Row& r : gen.rows) {
    RawGenerator g;
    g.bus = AsInt(r.cells[0], r.line, "generator bus");
    g.in_service = r.cells[7] > 0.0;
    g.pmax = r.cells[8];
    g.pmin = r.cells.size() > 9 ? r.cells[9] : 0.0;
    g.line = r.line;
    if (!(g.pmax >= 0.0) || !std::isfinite(g.pmax)) {
      throw MalformedCaseError(r.line, "generator Pmax must be finite and non-negative");
    }
    if (!ids.count(g.bus)) {
      throw Error(ErrorCode::kUnknownBus, "line " + std::to_string(r.line) +
                                              ": generator references unknown bus " +
                                              std::to_string(g.bus));
    }
    raw.generators.push_back(g);
  }
  for (const Row& r : branch.rows) {
    RawBranch b;
    b.from = AsInt(r.cells[0], r.line, "branch endpoint");
    b.to = AsInt(r.cells[1], r.line, "branch endpoint");
    b.r = r.cells[2];
    b.x = r.cells[3];
    b.rate_a = r.cells[5];
    b.in_service = r.cells.size() > 10 ? r.cells[10] > 0.0 : true;
    b.line = r.line;
    if (!(b.rate_a >= 0.0) || !std::isfinite(b.rate_a)) {
      throw MalformedCaseError(r.line, "branch rateA must be finite and non-negative");
    }
    for (int end : {b.from, b.to}) {
      if (!ids.count(end)) {
        throw Error(ErrorCode::kDanglingBranch, "line " + std::to_string(r.line) +
                                                    ": branch references unknown bus " +
                                                    std::to_string(end));
      }
    }
    raw.branches.push_back(b);
  }
  if (gencost.rows.size() < gen.rows.size()) {
    throw MalformedCaseError(gencost.line, "mpc.gencost needs one row per generator");
  }
  for (std::size_t k = 0; k < gen.rows.size(); ++k) {
    const Row& r = gencost.rows[k];
    RawGenCost c;
    c.model = AsInt(r.cells[0], r.line, "cost model");
    c.n = AsInt(r.cells[3], r.line, "cost size");
    c.line = r.line;
    const std::size_t needed = 4 + static_cast<std::size_t>(c.model == 1 ? 2 * c.n : c.n);
    if (c.n < 0 || r.cells.size() < needed) {
      throw MalformedCaseError(r.line, "mpc.gencost row too short for its cost size");
    }
    c.coefficients.assign(r.cells.begin() + 4, r.cells.begin() + static_cast<long>(needed));
    raw.gencost.push_back(std::move(c));
  }
  return raw;
}

RawCase ReadCaseFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open case file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  RawCase raw = ParseCase(buffer.str());
  if (raw.name.empty()) raw.name = path.stem().string();
  return raw;
}

namespace {

PiecewiseLinearConvex SampleFunction(double domain_max, int points, auto&& f) {
  if (domain_max <= 0.0) {
    return PiecewiseLinearConvex::FromPieces({{0.0, f(0.0)}}, 0.0);
  }
  std::vector<double> xs(points), ys(points);
  for (int i = 0; i < points; ++i) {
    xs[i] = i + 1 == points ? domain_max : domain_max * i / (points - 1);
    ys[i] = f(xs[i]);
  }
  return PiecewiseLinearConvex::FromSamples(xs, ys);
}

PiecewiseLinearConvex GeneratorCost(const RawGenCost& c, double pmax, int points) {
  if (c.model == 2) {
    const auto poly = [&](double p) {
      double value = 0.0;
      for (double coef : c.coefficients) value = value * p + coef;
      return value;
    };
    if (c.n == 0) return PiecewiseLinearConvex::FromPieces({{0.0, 0.0}}, pmax);
    return SampleFunction(pmax, points, poly);
  }
  if (c.model == 1) {
    if (c.n < 2) throw Error(ErrorCode::kInvalidArgument, "piecewise-linear cost needs two points");
    std::vector<PiecewiseLinearConvex::Piece> pieces;
    double previous = -std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < c.n; ++i) {
      const double x0 = c.coefficients[2 * i], y0 = c.coefficients[2 * i + 1];
      const double x1 = c.coefficients[2 * i + 2], y1 = c.coefficients[2 * i + 3];
      if (!(x1 > x0)) throw Error(ErrorCode::kInvalidArgument, "cost breakpoints must increase");
      const double slope = (y1 - y0) / (x1 - x0);
      if (previous - slope > 1e-9 * (1.0 + std::abs(previous))) {
        throw Error(ErrorCode::kNonConvexCost, "piecewise-linear cost is not convex");
      }
      previous = std::max(previous, slope);
      pieces.push_back({slope, y0 - slope * x0});
    }
    return PiecewiseLinearConvex::FromPieces(std::move(pieces), pmax);
  }
  throw Error(ErrorCode::kInvalidArgument, "unsupported cost model " + std::to_string(c.model));
}

}  // namespace

PowerGrid BuildGrid(const RawCase& raw, const BuildOptions& options) {
  if (options.sampling_points < 2) {
    throw Error(ErrorCode::kInvalidArgument, "at least two sampling points are required");
  }
  std::unordered_map<int, int> index;
  std::vector<Bus> buses;
  double total_demand = 0.0;
  for (const RawBus& b : raw.buses) {
    index[b.id] = static_cast<int>(buses.size());
    buses.push_back(Bus{b.id, b.pd});
    total_demand += b.pd;
  }

  std::vector<Branch> branches;
  for (const RawBranch& rb : raw.branches) {
    if (!rb.in_service) continue;
    const auto from = index.find(rb.from);
    const auto to = index.find(rb.to);
    if (from == index.end() || to == index.end()) {
      throw Error(ErrorCode::kDanglingBranch, "branch references an unknown bus");
    }
    Branch br;
    br.from = from->second;
    br.to = to->second;
    br.resistance = rb.r;
    br.reactance = rb.x;
    br.capacity = options.ignore_line_ratings || rb.rate_a == 0.0 ? Capacity::Unbounded()
                                                                   : Capacity::Finite(rb.rate_a);
    const double domain = std::min(br.capacity.value(), 2.0 * total_demand);
    if (rb.r == 0.0) {
      br.loss = PiecewiseLinearConvex::FromPieces({{0.0, 0.0}}, domain);
    } else {
      br.loss = SampleFunction(domain, options.sampling_points,
                               [&](double f) { return rb.r * f * f / raw.base_mva; });
    }
    branches.push_back(std::move(br));
  }

  // Merge units per bus, in order of first appearance.
  std::map<int, std::vector<PiecewiseLinearConvex>> units;
  std::map<int, double> pmax;
  std::vector<int> order;
  for (std::size_t k = 0; k < raw.generators.size(); ++k) {
    const RawGenerator& g = raw.generators[k];
    if (!g.in_service) continue;
    const int v = index.at(g.bus);
    if (!units.count(v)) order.push_back(v);
    units[v].push_back(GeneratorCost(raw.gencost.at(k), g.pmax, options.sampling_points));
    pmax[v] += g.pmax;
  }
  std::vector<Generator> generators;
  for (int v : order) {
    Generator g;
    g.bus = v;
    g.pmax = pmax[v];
    g.cost = units[v].size() == 1 ? units[v].front()
                                  : PiecewiseLinearConvex::InfimalConvolution(units[v]);
    generators.push_back(std::move(g));
  }
  return PowerGrid(raw.name, raw.base_mva, std::move(buses), std::move(branches),
                   std::move(generators));
}

CaseStatistics ComputeStatistics(const RawCase& raw) {
  CaseStatistics s;
  s.buses = static_cast<int>(raw.buses.size());
  std::set<std::pair<int, int>> pairs;
  for (const RawBranch& b : raw.branches) {
    if (!b.in_service) continue;
    pairs.insert({std::min(b.from, b.to), std::max(b.from, b.to)});
  }
  s.lines = static_cast<int>(pairs.size());
  for (const RawGenerator& g : raw.generators) s.generators += g.in_service ? 1 : 0;
  for (const RawBus& b : raw.buses) s.total_demand += b.pd;
  return s;
}

}  // namespace gridctl
