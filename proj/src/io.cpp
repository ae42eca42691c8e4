#include "npclust/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace npclust {
namespace {

[[noreturn]] void fail_at(const std::string& name, int line, const std::string& msg) {
  throw std::runtime_error(name + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_number(const std::string& name, int line, const std::string& field) {
  if (field.empty()) fail_at(name, line, "empty field");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || errno == ERANGE)
    fail_at(name, line, "expected a number, got '" + field + "'");
  if (!std::isfinite(v)) fail_at(name, line, "non-finite value '" + field + "'");
  return v;
}

long long parse_integer(const std::string& name, int line, const std::string& field) {
  const double v = parse_number(name, line, field);
  if (v != std::floor(v) || std::fabs(v) > 1e15)
    fail_at(name, line, "expected an integer, got '" + field + "'");
  return static_cast<long long>(v);
}

struct RawRows {
  std::vector<std::vector<double>> rows;
  std::vector<int> lines;
};

RawRows read_rows(std::istream& in, const std::string& name) {
  RawRows raw;
  std::string line;
  int lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::vector<std::string> fields = split_fields(t);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const std::string& f : fields) row.push_back(parse_number(name, lineno, f));
    if (raw.rows.empty())
      width = row.size();
    else if (row.size() != width)
      fail_at(name, lineno,
              "expected " + std::to_string(width) + " fields, got " + std::to_string(row.size()));
    raw.rows.push_back(std::move(row));
    raw.lines.push_back(lineno);
  }
  if (raw.rows.empty()) throw std::runtime_error(name + ": no data rows");
  return raw;
}

Matrix rows_to_matrix(const std::vector<std::vector<double>>& rows, std::size_t begin_col,
                      std::size_t end_col) {
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(end_col - begin_col));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = begin_col; j < end_col; ++j)
      m(static_cast<int>(i), static_cast<int>(j - begin_col)) = rows[i][j];
  return m;
}

}  // namespace

PointSet read_points(std::istream& in, const std::string& name) {
  const RawRows raw = read_rows(in, name);
  return PointSet(rows_to_matrix(raw.rows, 0, raw.rows[0].size()));
}

PointSet read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  return read_points(in, path);
}

LabeledDataset read_labeled_points(std::istream& in, const std::string& name) {
  const RawRows raw = read_rows(in, name);
  const std::size_t width = raw.rows[0].size();
  if (width < 2) throw std::runtime_error(name + ": labeled rows need at least two columns");
  LabeledDataset out;
  out.labels.reserve(raw.rows.size());
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    const double lab = raw.rows[i][width - 1];
    if (lab != std::floor(lab) || std::fabs(lab) > 1e9)
      fail_at(name, raw.lines[i], "label column must hold integers");
    out.labels.push_back(static_cast<int>(lab));
  }
  out.points = PointSet(rows_to_matrix(raw.rows, 0, width - 1));
  return out;
}

LabeledDataset read_labeled_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  return read_labeled_points(in, path);
}

GroupedDataset read_grouped_points(std::istream& in, const std::string& name) {
  const RawRows raw = read_rows(in, name);
  const std::size_t width = raw.rows[0].size();
  if (width < 2) throw std::runtime_error(name + ": grouped rows need an id column plus coordinates");
  GroupedDataset out;
  std::vector<std::vector<std::vector<double>>> groups;
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    const double idv = raw.rows[i][0];
    if (idv != std::floor(idv) || std::fabs(idv) > 1e15)
      fail_at(name, raw.lines[i], "dataset id column must hold integers");
    const long long id = static_cast<long long>(idv);
    std::size_t g = 0;
    for (; g < out.ids.size(); ++g)
      if (out.ids[g] == id) break;
    if (g == out.ids.size()) {
      out.ids.push_back(id);
      groups.emplace_back();
    }
    groups[g].push_back(std::vector<double>(raw.rows[i].begin() + 1, raw.rows[i].end()));
  }
  std::vector<PointSet> datasets;
  datasets.reserve(groups.size());
  for (const auto& rows : groups) datasets.emplace_back(rows_to_matrix(rows, 0, width - 1));
  out.data = DatasetCollection(std::move(datasets));
  return out;
}

GroupedDataset read_grouped_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  return read_grouped_points(in, path);
}

GroupedLabeled read_grouped_labeled_points(std::istream& in, const std::string& name) {
  const RawRows raw = read_rows(in, name);
  const std::size_t width = raw.rows[0].size();
  if (width < 3)
    throw std::runtime_error(name + ": grouped labeled rows need id, coordinates, and a label");
  GroupedLabeled out;
  std::vector<std::vector<std::vector<double>>> groups;
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    const double idv = raw.rows[i][0];
    if (idv != std::floor(idv) || std::fabs(idv) > 1e15)
      fail_at(name, raw.lines[i], "dataset id column must hold integers");
    const double lab = raw.rows[i][width - 1];
    if (lab != std::floor(lab) || std::fabs(lab) > 1e9)
      fail_at(name, raw.lines[i], "label column must hold integers");
    const long long id = static_cast<long long>(idv);
    std::size_t g = 0;
    for (; g < out.ids.size(); ++g)
      if (out.ids[g] == id) break;
    if (g == out.ids.size()) {
      out.ids.push_back(id);
      groups.emplace_back();
      out.labels.emplace_back();
    }
    groups[g].push_back(std::vector<double>(raw.rows[i].begin() + 1, raw.rows[i].end() - 1));
    out.labels[g].push_back(static_cast<int>(lab));
  }
  std::vector<PointSet> datasets;
  datasets.reserve(groups.size());
  for (const auto& rows : groups) datasets.emplace_back(rows_to_matrix(rows, 0, width - 2));
  out.data = DatasetCollection(std::move(datasets));
  return out;
}

GroupedLabeled read_grouped_labeled_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  return read_grouped_labeled_points(in, path);
}

std::string format_double(double x) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  return buf;
}

void write_points_csv(const std::string& path, const PointSet& points,
                      const std::vector<int>* labels) {
  if (labels && static_cast<int>(labels->size()) != points.n())
    throw std::invalid_argument("label count must match point count");
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  for (int i = 0; i < points.n(); ++i) {
    for (int j = 0; j < points.dim(); ++j) {
      if (j) out << ',';
      out << format_double(points.point(i)[j]);
    }
    if (labels) out << ',' << (*labels)[i];
    out << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

void write_grouped_csv(const std::string& path, const DatasetCollection& data,
                       const std::vector<std::vector<int>>* labels) {
  if (labels && static_cast<int>(labels->size()) != data.size())
    throw std::invalid_argument("label group count must match dataset count");
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  for (int j = 0; j < data.size(); ++j) {
    const PointSet& ps = data.datasets[j];
    if (labels && static_cast<int>((*labels)[j].size()) != ps.n())
      throw std::invalid_argument("label count must match point count");
    for (int i = 0; i < ps.n(); ++i) {
      out << j;
      for (int c = 0; c < ps.dim(); ++c) out << ',' << format_double(ps.point(i)[c]);
      if (labels) out << ',' << (*labels)[j][i];
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<int> read_labels_any(const std::string& path) {
  const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (is_json) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ": " + e.what());
    }
    const nlohmann::json* arr = nullptr;
    if (doc.is_array())
      arr = &doc;
    else if (doc.contains("assignments") && doc["assignments"].is_array())
      arr = &doc["assignments"];
    else if (doc.contains("labels") && doc["labels"].is_array())
      arr = &doc["labels"];
    if (!arr) throw std::runtime_error(path + ": no assignments or labels array");
    std::vector<int> out;
    out.reserve(arr->size());
    for (const auto& v : *arr) {
      if (!v.is_number_integer())
        throw std::runtime_error(path + ": labels must be integers");
      out.push_back(v.get<int>());
    }
    if (out.empty()) throw std::runtime_error(path + ": empty label array");
    return out;
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<int> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::vector<std::string> fields = split_fields(t);
    out.push_back(static_cast<int>(parse_integer(path, lineno, fields.back())));
  }
  if (out.empty()) throw std::runtime_error(path + ": no labels found");
  return out;
}

}  // namespace npclust
