#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dpwaves/bifurcation.hpp"
#include "dpwaves/branch_io.hpp"
#include "dpwaves/errors.hpp"

using namespace dpwaves;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "dpwaves_test_branch_io";
  fs::create_directories(d);
  const fs::path p = d / name;
  fs::remove(p);
  return p;
}

const Branch& short_branch() {
  static const Branch b = [] {
    ContinuationConfig cfg;
    cfg.max_points = 5;
    cfg.initial_grid = 64;
    return continue_branch(bifurcation_mu(1, 1.0, 1.0), cfg);
  }();
  return b;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("record round trip is bit exact") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(16);
  for (auto& x : c) x = u(rng) / 3.0;
  const PeriodicGrid g(1.7, 32);
  const WaveState s(g, c, 1.2345678901234567, 0.3, 1.1e-13);
  const BranchPoint p = make_branch_point(s, 0.123456789, 4);
  const BranchPoint q = from_record(nlohmann::json::parse(to_record(p, 2).dump()));
  CHECK(q.state.mu() == p.state.mu());
  CHECK(q.state.a() == p.state.a());
  CHECK(q.state.grid().period() == g.period());
  CHECK(q.state.residual_norm() == p.state.residual_norm());
  CHECK(q.s_arclength == p.s_arclength);
  CHECK(q.newton_iters == 4);
  for (std::size_t k = 0; k < c.size(); ++k) CHECK(q.state.coefficients()[k] == c[k]);
}

TEST_CASE("NaN diagnostics are written as null and read back") {
  const WaveState s = WaveState::constant(PeriodicGrid(1.0, 16), 1.0, 2.0, 1.0);
  const auto rec = to_record(make_branch_point(s, 0.0, 0), 1);
  CHECK(rec["residual_norm"].is_null());
  CHECK(std::isnan(from_record(rec).state.residual_norm()));
}

TEST_CASE("malformed records raise SchemaError") {
  const WaveState s = WaveState::constant(PeriodicGrid(1.0, 16), 1.0, 2.0, 1.0);
  const auto good = to_record(make_branch_point(s, 0.0, 0), 1);
  for (const char* field : {"mu", "cosine_coeffs", "P", "schema_version"}) {
    auto bad = good;
    bad.erase(field);
    CHECK_THROWS_AS(from_record(bad), SchemaError);
  }
  auto wrong_version = good;
  wrong_version["schema_version"] = kBranchSchemaVersion + 1;
  CHECK_THROWS_AS(from_record(wrong_version), SchemaError);
  auto wrong_type = good;
  wrong_type["mu"] = "fast";
  CHECK_THROWS_AS(from_record(wrong_type), SchemaError);
}

TEST_CASE("writer and reader agree on a branch") {
  const auto path = scratch("full.jsonl");
  {
    BranchWriter w(path, 1);
    for (const auto& p : short_branch().points) w.write(p);
  }
  const BranchFile f = read_branch_file(path);
  REQUIRE(f.points.size() == short_branch().points.size());
  CHECK(f.mode_k == 1);
  CHECK(f.period == 1.0);
  CHECK(f.a == 1.0);
  CHECK_FALSE(f.truncated_tail);
  CHECK(f.complete_bytes == fs::file_size(path));
  for (std::size_t i = 0; i < f.points.size(); ++i) CHECK(f.points[i].state.mu() == short_branch().points[i].state.mu());
}

TEST_CASE("error messages carry the line number") {
  const auto path = scratch("broken.jsonl");
  {
    BranchWriter w(path, 1);
    w.write(short_branch().points[0]);
  }
  {
    std::ofstream o(path, std::ios::app);
    o << "{\"not\": \"a record\"}\n";
  }
  try {
    read_branch_file(path);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("partial tail is dropped only on request") {
  const auto path = scratch("partial.jsonl");
  {
    BranchWriter w(path, 1);
    for (const auto& p : short_branch().points) w.write(p);
  }
  const auto full = fs::file_size(path);
  fs::resize_file(path, full - 40);
  CHECK_THROWS_AS(read_branch_file(path), SchemaError);
  const BranchFile f = read_branch_file(path, true);
  CHECK(f.truncated_tail);
  CHECK(f.points.size() == short_branch().points.size() - 1);

  // Resuming truncates the partial line before appending.
  {
    BranchWriter w(path, 1, static_cast<std::intmax_t>(f.complete_bytes));
    w.write(short_branch().points.back());
  }
  const BranchFile g = read_branch_file(path);
  CHECK(g.points.size() == short_branch().points.size());
  CHECK(fs::file_size(path) == full);
}

TEST_CASE("mixed branches in one file are rejected") {
  const auto path = scratch("mixed.jsonl");
  {
    BranchWriter w(path, 1);
    w.write(short_branch().points[0]);
  }
  {
    BranchWriter w(path, 2, static_cast<std::intmax_t>(fs::file_size(path)));
    w.write(short_branch().points[1]);
  }
  CHECK_THROWS_AS(read_branch_file(path), SchemaError);
}

TEST_CASE("fresh writer replaces an existing file") {
  const auto path = scratch("fresh.jsonl");
  {
    std::ofstream o(path);
    o << "junk\n";
  }
  {
    BranchWriter w(path, 1);
    w.write(short_branch().points[0]);
  }
  CHECK(slurp(path).find("junk") == std::string::npos);
  CHECK(read_branch_file(path).points.size() == 1);
}
