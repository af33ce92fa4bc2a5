#include "dpwaves/branch_io.hpp"

#include <cmath>
#include <limits>

#include "dpwaves/errors.hpp"

namespace dpwaves {

namespace {

// JSON has no NaN; a missing crest fit is stored as null.
nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

double read_number(const nlohmann::json& r, const char* key, bool nullable = false) {
  if (!r.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  const auto& v = r.at(key);
  if (nullable && v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) throw SchemaError(std::string("field '") + key + "' is not a number");
  return v.get<double>();
}

}  // namespace

nlohmann::json to_record(const BranchPoint& p, int mode_k) {
  const WaveState& s = p.state;
  return {{"schema_version", kBranchSchemaVersion},
          {"P", s.grid().period()},
          {"a", s.a()},
          {"mu", s.mu()},
          {"n_modes", s.n_modes()},
          {"cosine_coeffs", s.coefficient_vector()},
          {"gap_crest", p.gap_crest},
          {"gap_trough", p.gap_trough},
          {"residual_norm", number_or_null(s.residual_norm())},
          {"crest_exponent", number_or_null(p.crest_exponent)},
          {"s_arclength", p.s_arclength},
          {"newton_iters", p.newton_iters},
          {"mode_k", mode_k}};
}

BranchPoint from_record(const nlohmann::json& r) {
  if (!r.is_object()) throw SchemaError("record is not an object");
  const double version = read_number(r, "schema_version");
  if (version != kBranchSchemaVersion) {
    throw SchemaError("unsupported schema_version " + std::to_string(version));
  }
  const double period = read_number(r, "P");
  const double a = read_number(r, "a");
  const double mu = read_number(r, "mu");
  const double n_modes = read_number(r, "n_modes");
  if (!r.contains("cosine_coeffs") || !r.at("cosine_coeffs").is_array()) {
    throw SchemaError("field 'cosine_coeffs' missing or not an array");
  }
  std::vector<double> coeffs;
  for (const auto& c : r.at("cosine_coeffs")) {
    if (!c.is_number()) throw SchemaError("non-numeric entry in 'cosine_coeffs'");
    coeffs.push_back(c.get<double>());
  }
  if (static_cast<double>(coeffs.size()) != n_modes) {
    throw SchemaError("n_modes does not match the length of cosine_coeffs");
  }
  BranchPoint p{WaveState::constant(PeriodicGrid(1.0, 8), 0.0, 1.0, 0.0)};
  try {
    const PeriodicGrid grid(period, 2 * static_cast<int>(coeffs.size()));
    p.state = WaveState(grid, std::move(coeffs), mu, a, read_number(r, "residual_norm", true));
  } catch (const DomainError& e) {
    throw SchemaError(std::string("invalid state: ") + e.what());
  }
  p.gap_crest = read_number(r, "gap_crest");
  p.gap_trough = read_number(r, "gap_trough");
  p.crest_exponent = read_number(r, "crest_exponent", true);
  p.s_arclength = read_number(r, "s_arclength");
  p.newton_iters = r.contains("newton_iters") ? static_cast<int>(read_number(r, "newton_iters")) : 0;
  return p;
}

BranchFile read_branch_file(const std::filesystem::path& path, bool allow_partial_tail) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open branch file " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  BranchFile file;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    const std::size_t nl = text.find('\n', pos);
    const bool complete = nl != std::string::npos;
    const std::string line = text.substr(pos, complete ? nl - pos : std::string::npos);
    const std::size_t next = complete ? nl + 1 : text.size();
    if (!complete && allow_partial_tail) {
      file.truncated_tail = true;
      break;
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      pos = next;
      file.complete_bytes = next;
      continue;
    }
    try {
      const auto record = nlohmann::json::parse(line);
      BranchPoint p = from_record(record);
      const int k = record.contains("mode_k") ? static_cast<int>(read_number(record, "mode_k")) : 1;
      if (file.points.empty()) {
        file.mode_k = k;
        file.period = p.state.grid().period();
        file.a = p.state.a();
      } else if (k != file.mode_k || p.state.grid().period() != file.period || p.state.a() != file.a) {
        throw SchemaError("record belongs to a different (P, a, k) branch");
      }
      file.points.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(path.string() + ": line " + std::to_string(line_no) + ": " + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError(path.string() + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    pos = next;
    file.complete_bytes = next;
  }
  return file;
}

BranchWriter::BranchWriter(const std::filesystem::path& path, int mode_k, std::intmax_t truncate_to)
    : mode_k_(mode_k) {
  if (truncate_to >= 0) {
    std::filesystem::resize_file(path, static_cast<std::uintmax_t>(truncate_to));
    out_.open(path, std::ios::binary | std::ios::app);
  } else {
    out_.open(path, std::ios::binary | std::ios::trunc);
  }
  if (!out_) throw ConfigError("cannot open " + path.string() + " for writing");
}

void BranchWriter::write(const BranchPoint& point) {
  out_ << to_record(point, mode_k_).dump() << '\n';
  out_.flush();
  if (!out_) throw Error("write to branch file failed");
}

}  // namespace dpwaves
