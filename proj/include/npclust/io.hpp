#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "npclust/core.hpp"
#include "npclust/hdpmeans.hpp"
#include "npclust/synth.hpp"

namespace npclust {

// CSV of numeric rows, one point per line. Blank lines and lines starting
// with '#' are skipped. Errors carry 1-based line numbers.
PointSet read_points(std::istream& in, const std::string& name);
PointSet read_points_file(const std::string& path);

// Same format with a trailing integer label column.
LabeledDataset read_labeled_points(std::istream& in, const std::string& name);
LabeledDataset read_labeled_points_file(const std::string& path);

// Grouped rows: leading integer dataset-id column, then coordinates.
// Datasets are ordered by first appearance of their id; ids[j] records the
// original id of dataset j.
struct GroupedDataset {
  DatasetCollection data;
  std::vector<long long> ids;
};

GroupedDataset read_grouped_points(std::istream& in, const std::string& name);
GroupedDataset read_grouped_points_file(const std::string& path);

// Grouped rows with a trailing integer label column.
struct GroupedLabeled {
  DatasetCollection data;
  std::vector<std::vector<int>> labels;
  std::vector<long long> ids;
};

GroupedLabeled read_grouped_labeled_points(std::istream& in, const std::string& name);
GroupedLabeled read_grouped_labeled_points_file(const std::string& path);

void write_points_csv(const std::string& path, const PointSet& points,
                      const std::vector<int>* labels = nullptr);
void write_grouped_csv(const std::string& path, const DatasetCollection& data,
                       const std::vector<std::vector<int>>* labels = nullptr);

// Shortest round-trip-exact decimal form of x.
std::string format_double(double x);

// Label sequence from any of: a JSON result ("assignments" or "labels"
// array), a CSV whose last column is the label, or one label per line.
std::vector<int> read_labels_any(const std::string& path);

}  // namespace npclust
