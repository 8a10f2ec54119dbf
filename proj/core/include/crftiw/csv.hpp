#pragma once

#include <string>
#include <vector>

#include "crftiw/evaluate.hpp"
#include "crftiw/types.hpp"

namespace crftiw::csv {

/// Full-precision decimal rendering (17 significant digits): parsing the
/// result recovers the exact double.
std::string format_double(double value);
double parse_double(const std::string& text, const std::string& context);

/// Labeled numeric matrix: one id column followed by named value columns.
struct Table {
  std::vector<std::string> ids;
  std::vector<std::string> columns;
  Mat values;
};

Table read_table(const std::string& path);
void write_table(const std::string& path, const Table& table,
                 const std::string& id_header = "region");

/// Column names prefix<start>, prefix<start+1>, ... (e.g. t1..tT, y0..yJ).
std::vector<std::string> indexed_names(const std::string& prefix, Index count, Index start);

struct PartitionTable {
  std::vector<std::string> ids;
  std::vector<int> labels;  // 1-based cluster ids
  Mat posteriors;           // n x L, or n x 0 when absent
};

PartitionTable read_partition(const std::string& path);
void write_partition(const std::string& path, const PartitionTable& partition);

void write_benchmark(const std::string& path, const std::vector<evaluate::BenchmarkRow>& rows);
std::vector<evaluate::BenchmarkRow> read_benchmark(const std::string& path);

void write_benchmark_summary(const std::string& path,
                             const std::vector<evaluate::SummaryRow>& rows);

void write_cluster_summary(const std::string& path,
                           const std::vector<evaluate::ClusterSummaryRow>& rows);

}  // namespace crftiw::csv
