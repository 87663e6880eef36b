#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "stereotest/error.hpp"
#include "stereotest/stats.hpp"

namespace stereo {

/// MalformedDataset with the 1-based line number of the offending row.
class DatasetError : public Error {
 public:
  DatasetError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

inline constexpr const char* kDatasetHeader = "subject_id,test,day,value";

/// CSV with the header subject_id,test,day,value; value is decimal arcsec or OL.
std::vector<MeasurementRecord> read_dataset(std::istream& in);
std::vector<MeasurementRecord> read_dataset_file(const std::filesystem::path& path);

void write_dataset(std::ostream& out, std::span<const MeasurementRecord> records);
void write_dataset_file(const std::filesystem::path& path, std::span<const MeasurementRecord> records);

}  // namespace stereo
