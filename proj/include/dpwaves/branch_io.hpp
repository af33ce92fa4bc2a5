#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dpwaves/continuation.hpp"

namespace dpwaves {

inline constexpr int kBranchSchemaVersion = 1;

/// One self-contained line of the branch file.
nlohmann::json to_record(const BranchPoint& point, int mode_k);
/// Throws SchemaError on missing or mistyped fields.
BranchPoint from_record(const nlohmann::json& record);

struct BranchFile {
  std::vector<BranchPoint> points;
  int mode_k = 1;
  double period = 0.0;
  double a = 0.0;
  /// Bytes up to the end of the last complete record.
  std::uintmax_t complete_bytes = 0;
  /// A trailing partial line was dropped.
  bool truncated_tail = false;
};

/// Reads newline-delimited records. A final line without its newline is an
/// interrupted write; it is dropped when allow_partial_tail, otherwise it is
/// a SchemaError like any other malformed line. Errors name the line number.
BranchFile read_branch_file(const std::filesystem::path& path, bool allow_partial_tail = false);

/// Appends records, flushing after each so every complete line is durable.
class BranchWriter {
 public:
  /// truncate_to: keep only this many leading bytes of an existing file
  /// (resume); a negative value starts a fresh file.
  BranchWriter(const std::filesystem::path& path, int mode_k, std::intmax_t truncate_to = -1);
  void write(const BranchPoint& point);

 private:
  std::ofstream out_;
  int mode_k_;
};

}  // namespace dpwaves
