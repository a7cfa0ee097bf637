#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cli.hpp"

#include "grushin/grid.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run_cli(std::initializer_list<std::string> args, std::string* out = nullptr) {
  std::vector<std::string> owned{"grushin"};
  owned.insert(owned.end(), args);
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());

  std::ostringstream capture;
  std::streambuf* old = std::cout.rdbuf(capture.rdbuf());
  const int rc = grushin::cli::run(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old);
  if (out) *out = capture.str();
  return rc;
}

fs::path temp_dir() {
  const fs::path p = fs::temp_directory_path() / "grushin_cli_test";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("geodist matches the worked example") {
  std::string out;
  CHECK(run_cli({"--d1", "1", "--d2", "1", "geodist", "--z", "0,0", "--w", "0,4"},
                &out) == 0);
  CHECK(std::stod(out) == doctest::Approx(2.0));

  CHECK(run_cli({"--d1", "1", "--d2", "1", "geodist", "--z", "2,1", "--w", "2,0"},
                &out) == 0);
  CHECK(std::stod(out) == doctest::Approx(0.25));

  // Wrong coordinate count is a usage error.
  CHECK(run_cli({"--d1", "2", "--d2", "1", "geodist", "--z", "0,0", "--w", "0,4"}) ==
        1);
}

TEST_CASE("unknown subcommand and bad symbol specs exit 1") {
  CHECK(run_cli({"frobnicate"}) == 1);
  const fs::path dir = temp_dir();
  const fs::path in = dir / "in.grf";
  grushin::calculus::GridSpec s;
  s.d1 = 1;
  s.d2 = 1;
  s.n_x = 16;
  s.n_y = 16;
  s.x_extent = 8.0;
  s.y_extent = 8.0;
  s.k_max = 8;
  grushin::calculus::save_grf(in, grushin::calculus::GridFunction::zeros(s));
  CHECK(run_cli({"apply", "--in", in.string(), "--symbol", "nope:x=1", "--out",
                 (dir / "o.grf").string()}) == 1);
  CHECK(run_cli({"apply", "--in", (dir / "missing.grf").string(), "--symbol",
                 "constant:value=1", "--out", (dir / "o.grf").string()}) == 1);
}

TEST_CASE("apply round-trips a grid function through files") {
  const fs::path dir = temp_dir();
  const fs::path in = dir / "f.grf";
  const fs::path out = dir / "g.grf";
  const fs::path tail = dir / "tail.json";

  grushin::calculus::GridSpec s;
  s.d1 = 1;
  s.d2 = 1;
  s.n_x = 64;
  s.n_y = 64;
  s.x_extent = 10.0;
  s.y_extent = 10.0;
  s.k_max = 24;
  grushin::calculus::GridFunction f = grushin::calculus::GridFunction::zeros(s);
  for (int i = 0; i < s.n_x; ++i)
    for (int j = 0; j < s.n_y; ++j) {
      const double x = s.x_coord(i), y = s.y_coord(j);
      f.values[static_cast<std::size_t>(i) * s.n_y + j] =
          std::exp(-0.5 * (x * x + y * y));
    }
  grushin::calculus::save_grf(in, f);

  CHECK(run_cli({"apply", "--in", in.string(), "--symbol", "constant:value=1",
                 "--out", out.string(), "--tail-report", tail.string()}) == 0);
  const auto g = grushin::calculus::load_grf(out);
  REQUIRE(g.values.size() == f.values.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    worst = std::max(worst, std::abs(g.values[i] - f.values[i]));
  CHECK(worst < 1e-4);  // identity up to the reported truncation tail
  CHECK(slurp(tail).find("tail_fraction") != std::string::npos);

  // riesz at t = 0 is the same identity application.
  CHECK(run_cli({"riesz", "--delta", "5", "--t", "0", "--in", in.string(), "--out",
                 (dir / "r.grf").string()}) == 0);
}

TEST_CASE("cover subcommand prints a summary") {
  std::string out;
  CHECK(run_cli({"--d1", "1", "--d2", "1", "cover", "--region", "-1,-1:1,1", "--R",
                 "1", "--lambda", "2"},
                &out) == 0);
  CHECK(out.find("\"cells\"") != std::string::npos);
  CHECK(out.find("overlap_bound") != std::string::npos);
}

TEST_CASE("verify hermite: report written, reproducible bytes, exit codes") {
  const fs::path dir = temp_dir() / "rep";
  fs::remove_all(dir);

  std::string out;
  const int rc = run_cli({"--out-dir", dir.string(), "--kmax", "8", "--seed", "3",
                          "verify", "hermite"},
                         &out);
  CHECK(rc == 0);
  CHECK(out.find("[PASS]") != std::string::npos);
  const fs::path rep = dir / "report-hermite.json";
  REQUIRE(fs::exists(rep));
  const std::string first = slurp(rep);
  CHECK(first.find("\"verdict\": \"PASS\"") != std::string::npos);
  CHECK(first.find("\"seed\": 3") != std::string::npos);

  // Identical config + seed => byte-identical report.
  CHECK(run_cli({"--out-dir", dir.string(), "--kmax", "8", "--seed", "3", "verify",
                 "hermite"}) == 0);
  CHECK(slurp(rep) == first);
}

TEST_CASE("verify restriction emits a report and export converts it") {
  const fs::path dir = temp_dir() / "rep2";
  fs::remove_all(dir);
  std::string out;
  const int rc = run_cli({"--out-dir", dir.string(), "verify", "restriction", "--p",
                          "2", "--lmin", "1", "--lmax", "3"},
                         &out);
  CHECK(rc == 0);
  const fs::path rep = dir / "report-restriction.json";
  REQUIRE(fs::exists(rep));

  const fs::path csv = dir / "restriction.csv";
  CHECK(run_cli({"export", "--report", rep.string(), "--out", csv.string()}) == 0);
  const std::string body = slurp(csv);
  CHECK(body.find("ell") != std::string::npos);
  CHECK(std::count(body.begin(), body.end(), '\n') >= 4);  // header + 3 rows
}

TEST_CASE("apply output is byte-identical across thread counts") {
  const fs::path dir = temp_dir();
  const fs::path in = dir / "det.grf";
  grushin::calculus::GridSpec s;
  s.d1 = 1;
  s.d2 = 1;
  s.n_x = 48;
  s.n_y = 48;
  s.x_extent = 10.0;
  s.y_extent = 10.0;
  s.k_max = 16;
  grushin::calculus::GridFunction f = grushin::calculus::GridFunction::zeros(s);
  for (int i = 0; i < s.n_x; ++i)
    for (int j = 0; j < s.n_y; ++j)
      f.values[static_cast<std::size_t>(i) * s.n_y + j] =
          std::exp(-0.3 * (s.x_coord(i) * s.x_coord(i) + s.y_coord(j) * s.y_coord(j)));
  grushin::calculus::save_grf(in, f);

  const fs::path o1 = dir / "det1.grf", o2 = dir / "det2.grf";
  CHECK(run_cli({"--threads", "1", "apply", "--in", in.string(), "--symbol",
                 "bump:lo=0.5,hi=2", "--out", o1.string()}) == 0);
  CHECK(run_cli({"--threads", "2", "apply", "--in", in.string(), "--symbol",
                 "bump:lo=0.5,hi=2", "--out", o2.string()}) == 0);
  CHECK(slurp(o1) == slurp(o2));
}

TEST_CASE("config file feeds defaults, flags win") {
  const fs::path dir = temp_dir();
  const fs::path cfgp = dir / "cfg.json";
  {
    std::ofstream os(cfgp);
    os << R"({"d1": 1, "d2": 1, "k_max": 8, "output_dir": ")" << dir.string()
       << R"("})";
  }
  std::string out;
  CHECK(run_cli({"--config", cfgp.string(), "geodist", "--z", "0,0", "--w", "0,4"},
                &out) == 0);
  CHECK(std::stod(out) == doctest::Approx(2.0));
  CHECK(run_cli({"--config", (dir / "absent.json").string(), "geodist", "--z", "0,0",
                 "--w", "0,4"}) == 1);
}
