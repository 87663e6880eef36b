#include "stereotest/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace stereo {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

DatasetError::DatasetError(int line, const std::string& message)
    : Error(ErrorCode::MalformedDataset, "line " + std::to_string(line) + ": " + message),
      line_(line) {}

std::vector<MeasurementRecord> read_dataset(std::istream& in) {
  std::vector<MeasurementRecord> records;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto fields = split(row);
    if (!header_seen) {
      if (fields.size() != 4 || fields[0] != "subject_id" || fields[1] != "test" ||
          fields[2] != "day" || fields[3] != "value") {
        throw DatasetError(line_no, std::string("expected header '") + kDatasetHeader + "'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) {
      throw DatasetError(line_no, "expected 4 fields, found " + std::to_string(fields.size()));
    }
    MeasurementRecord r;
    if (fields[0].empty()) throw DatasetError(line_no, "empty subject_id");
    r.subject_id = std::string(fields[0]);
    const auto test = parse_test_kind(fields[1]);
    if (!test) throw DatasetError(line_no, "unknown test '" + std::string(fields[1]) + "'");
    r.test = *test;
    int day = 0;
    auto [ptr, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), day);
    if (ec != std::errc{} || ptr != fields[2].data() + fields[2].size() || (day != 1 && day != 2)) {
      throw DatasetError(line_no, "day must be 1 or 2, got '" + std::string(fields[2]) + "'");
    }
    r.day = day;
    try {
      r.value = Acuity::parse(fields[3]);
    } catch (const Error&) {
      throw DatasetError(line_no, "value must be arcsec >= 0 or OL, got '" + std::string(fields[3]) + "'");
    }
    records.push_back(std::move(r));
  }
  if (!header_seen) throw DatasetError(std::max(line_no, 1), "missing header");
  return records;
}

std::vector<MeasurementRecord> read_dataset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
  return read_dataset(in);
}

void write_dataset(std::ostream& out, std::span<const MeasurementRecord> records) {
  out << kDatasetHeader << '\n';
  for (const MeasurementRecord& r : records) {
    out << r.subject_id << ',' << to_string(r.test) << ',' << r.day << ',' << r.value.to_string()
        << '\n';
  }
}

void write_dataset_file(const std::filesystem::path& path,
                        std::span<const MeasurementRecord> records) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string() + " for writing");
  write_dataset(out, records);
}

}  // namespace stereo
