#include "crftiw/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "crftiw/errors.hpp"

namespace crftiw::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw IoError(path + " is empty");
  return lines;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void check_id(const std::string& id, const std::string& path) {
  if (id.find(',') != std::string::npos || id.find('\n') != std::string::npos)
    throw IoError("id '" + id + "' contains a separator (" + path + ")");
}

long parse_long(const std::string& text, const std::string& context) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw IoError("cannot parse integer '" + text + "' in " + context);
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

double parse_double(const std::string& text, const std::string& context) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw IoError("cannot parse number '" + text + "' in " + context);
  return value;
}

Table read_table(const std::string& path) {
  const auto lines = read_lines(path);
  const auto header = split(lines[0]);
  if (header.size() < 2) throw IoError(path + ": header needs an id and at least one column");

  Table table;
  table.columns.assign(header.begin() + 1, header.end());
  const auto n_cols = static_cast<Index>(table.columns.size());
  const auto n_rows = static_cast<Index>(lines.size() - 1);
  if (n_rows == 0) throw IoError(path + " has no data rows");
  table.values.resize(n_rows, n_cols);
  table.ids.reserve(static_cast<std::size_t>(n_rows));

  for (Index r = 0; r < n_rows; ++r) {
    const auto fields = split(lines[static_cast<std::size_t>(r) + 1]);
    if (static_cast<Index>(fields.size()) != n_cols + 1)
      throw IoError(path + ": row " + std::to_string(r + 2) + " has " +
                    std::to_string(fields.size()) + " fields, expected " +
                    std::to_string(n_cols + 1));
    table.ids.push_back(fields[0]);
    for (Index c = 0; c < n_cols; ++c)
      table.values(r, c) = parse_double(fields[static_cast<std::size_t>(c) + 1],
                                        path + ":" + std::to_string(r + 2));
  }
  return table;
}

void write_table(const std::string& path, const Table& table, const std::string& id_header) {
  if (static_cast<Index>(table.ids.size()) != table.values.rows() ||
      static_cast<Index>(table.columns.size()) != table.values.cols())
    throw LengthMismatch("table ids/columns do not match the value matrix");
  auto out = open_out(path);
  out << id_header;
  for (const auto& col : table.columns) out << ',' << col;
  out << '\n';
  for (Index r = 0; r < table.values.rows(); ++r) {
    check_id(table.ids[static_cast<std::size_t>(r)], path);
    out << table.ids[static_cast<std::size_t>(r)];
    for (Index c = 0; c < table.values.cols(); ++c)
      out << ',' << format_double(table.values(r, c));
    out << '\n';
  }
}

std::vector<std::string> indexed_names(const std::string& prefix, Index count, Index start) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(count));
  for (Index k = 0; k < count; ++k) names.push_back(prefix + std::to_string(start + k));
  return names;
}

PartitionTable read_partition(const std::string& path) {
  const auto lines = read_lines(path);
  const auto header = split(lines[0]);
  if (header.size() < 2 || header[1] != "cluster")
    throw IoError(path + ": expected header region,cluster[,t_1...]");

  PartitionTable part;
  const auto n_rows = static_cast<Index>(lines.size() - 1);
  const auto n_post = static_cast<Index>(header.size() - 2);
  if (n_rows == 0) throw IoError(path + " has no data rows");
  part.posteriors.resize(n_rows, n_post);
  for (Index r = 0; r < n_rows; ++r) {
    const auto fields = split(lines[static_cast<std::size_t>(r) + 1]);
    if (fields.size() != header.size())
      throw IoError(path + ": row " + std::to_string(r + 2) + " is ragged");
    part.ids.push_back(fields[0]);
    part.labels.push_back(
        static_cast<int>(parse_long(fields[1], path + ":" + std::to_string(r + 2))));
    for (Index c = 0; c < n_post; ++c)
      part.posteriors(r, c) = parse_double(fields[static_cast<std::size_t>(c) + 2],
                                           path + ":" + std::to_string(r + 2));
  }
  return part;
}

void write_partition(const std::string& path, const PartitionTable& partition) {
  const auto n = static_cast<Index>(partition.ids.size());
  if (static_cast<Index>(partition.labels.size()) != n ||
      (partition.posteriors.size() > 0 && partition.posteriors.rows() != n))
    throw LengthMismatch("partition ids/labels/posteriors sizes disagree");
  auto out = open_out(path);
  out << "region,cluster";
  for (Index l = 0; l < partition.posteriors.cols(); ++l) out << ",t_" << (l + 1);
  out << '\n';
  for (Index r = 0; r < n; ++r) {
    check_id(partition.ids[static_cast<std::size_t>(r)], path);
    out << partition.ids[static_cast<std::size_t>(r)] << ','
        << partition.labels[static_cast<std::size_t>(r)];
    for (Index c = 0; c < partition.posteriors.cols(); ++c)
      out << ',' << format_double(partition.posteriors(r, c));
    out << '\n';
  }
}

void write_benchmark(const std::string& path, const std::vector<evaluate::BenchmarkRow>& rows) {
  auto out = open_out(path);
  out << "scenario,n,replica,method,ari,gamma1_err,link_err,seconds\n";
  for (const auto& row : rows) {
    out << row.scenario << ',' << row.n << ',' << row.replica << ',' << row.method << ','
        << format_double(row.ari) << ',' << format_double(row.gamma1_err) << ','
        << format_double(row.link_err) << ',' << format_double(row.seconds) << '\n';
  }
}

std::vector<evaluate::BenchmarkRow> read_benchmark(const std::string& path) {
  const auto lines = read_lines(path);
  if (split(lines[0]) !=
      std::vector<std::string>{"scenario", "n", "replica", "method", "ari", "gamma1_err",
                               "link_err", "seconds"})
    throw IoError(path + ": unexpected benchmark header");
  std::vector<evaluate::BenchmarkRow> rows;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split(lines[r]);
    if (fields.size() != 8) throw IoError(path + ": row " + std::to_string(r + 1) + " is ragged");
    const std::string ctx = path + ":" + std::to_string(r + 1);
    evaluate::BenchmarkRow row;
    row.scenario = static_cast<int>(parse_long(fields[0], ctx));
    row.n = static_cast<Index>(parse_long(fields[1], ctx));
    row.replica = static_cast<int>(parse_long(fields[2], ctx));
    row.method = fields[3];
    row.ari = parse_double(fields[4], ctx);
    row.gamma1_err = parse_double(fields[5], ctx);
    row.link_err = parse_double(fields[6], ctx);
    row.seconds = parse_double(fields[7], ctx);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_benchmark_summary(const std::string& path,
                             const std::vector<evaluate::SummaryRow>& rows) {
  auto out = open_out(path);
  out << "scenario,n,method,metric,count,q1,median,q3\n";
  for (const auto& row : rows) {
    out << row.scenario << ',' << row.n << ',' << row.method << ',' << row.metric << ','
        << row.count << ',' << format_double(row.q1) << ',' << format_double(row.median) << ','
        << format_double(row.q3) << '\n';
  }
}

void write_cluster_summary(const std::string& path,
                           const std::vector<evaluate::ClusterSummaryRow>& rows) {
  auto out = open_out(path);
  out << "cluster,count,proportion,total_mean,total_sd,effect_mean,effect_sd\n";
  for (const auto& row : rows) {
    out << row.cluster << ',' << row.count << ',' << format_double(row.proportion) << ','
        << format_double(row.total_mean) << ',' << format_double(row.total_sd) << ','
        << format_double(row.effect_mean) << ',' << format_double(row.effect_sd) << '\n';
  }
}

}  // namespace crftiw::csv
