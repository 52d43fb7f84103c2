#pragma once

#include <string>
#include <vector>

#include "cinewild/harness.hpp"

namespace cinewild {

// Malformed CSV input: message names the line and column.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Fixed metrics schema, one row per control step.  Pixel columns may hold
// "nan".  Numbers are written with round-trip precision, so identical runs
// produce byte-identical files.
extern const char* const kMetricsHeader;

std::string records_to_csv(const std::vector<StepRecord>& records);
std::vector<StepRecord> records_from_csv(const std::string& text);

// File I/O via a temp file + rename, so readers never observe a partial
// file.  Throws std::runtime_error on I/O failure, SchemaError on parse
// failure.
void write_csv(const std::vector<StepRecord>& records, const std::string& path);
std::vector<StepRecord> read_csv(const std::string& path);

// Shared atomic write used for every artifact the tools emit.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace cinewild
