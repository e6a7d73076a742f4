#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string bin() {
  const char* b = std::getenv("DISPLAB_BIN");
  return b ? b : "displab";
}

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / "displab_cli_test";
  fs::create_directories(d);
  return d;
}

// exit status of `displab args`, stdout and stderr to the given files
int run(const std::string& args, const fs::path& out, const fs::path& err) {
  const std::string cmd = bin() + " " + args + " >" + out.string() + " 2>" + err.string();
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("identities suite passes") {
  const fs::path d = scratch();
  CHECK(run("accept --suite identities", d / "o.txt", d / "e.txt") == 0);
  CHECK(slurp(d / "o.txt").find("[PASS]") != std::string::npos);
  CHECK(run("identities", d / "o.txt", d / "e.txt") == 0);
}

TEST_CASE("bad input exits with status 2") {
  const fs::path d = scratch();
  const fs::path cfg = write_config("bad.cfg", "space.kind = gaussian\nspace.bogus_key = 3\n");
  CHECK(run("norms --config " + cfg.string(), d / "o.txt", d / "e.txt") == 2);
  CHECK(slurp(d / "e.txt").find("space.bogus_key") != std::string::npos);
  CHECK(run("accept --suite nosuch", d / "o.txt", d / "e.txt") == 2);
  CHECK(run("frobnicate", d / "o.txt", d / "e.txt") == 2);
  CHECK(run("born-verify --m 5", d / "o.txt", d / "e.txt") == 2);
}

TEST_CASE("oscsweep output is reproducible") {
  const fs::path d = scratch();
  REQUIRE(run("oscsweep --n 10 --seed 7 --out " + (d / "a.csv").string(), d / "o.txt", d / "e.txt") == 0);
  REQUIRE(run("oscsweep --n 10 --seed 7 --out " + (d / "b.csv").string(), d / "o.txt", d / "e.txt") == 0);
  const std::string a = slurp(d / "a.csv"), b = slurp(d / "b.csv");
  CHECK(a == b);
  CHECK(a.rfind("# config_hash=", 0) == 0);
  // header plus ten rows
  std::size_t lines = 0;
  for (char c : a) lines += c == '\n';
  CHECK(lines == 12);
  REQUIRE(run("oscsweep --n 10 --seed 8 --out " + (d / "c.csv").string(), d / "o.txt", d / "e.txt") == 0);
  CHECK(slurp(d / "c.csv") != a);
}

TEST_CASE("norms CSV") {
  const fs::path d = scratch();
  const fs::path cfg = write_config("ball.cfg", "space.kind = ball\nspace.amplitude = 1\nspace.radius = 1\n");
  REQUIRE(run("norms --samples 20000 --config " + cfg.string(), d / "o.txt", d / "e.txt") == 0);
  std::istringstream in(slurp(d / "o.txt"));
  std::string hash, header, row;
  std::getline(in, hash);
  std::getline(in, header);
  std::getline(in, row);
  CHECK(hash.rfind("# config_hash=", 0) == 0);
  CHECK(header == "rollnik,rollnik_se,kato,l32,ynorm,rollnik_small,kato_small,y_small");
  // kato column is 2 pi for the unit ball
  std::istringstream r(row);
  std::string cell;
  std::getline(r, cell, ',');
  std::getline(r, cell, ',');
  std::getline(r, cell, ',');
  CHECK(std::stod(cell) == doctest::Approx(2 * 3.14159265358979).epsilon(1e-10));
}

TEST_CASE("evolve writes snapshots and norms") {
  const fs::path d = scratch();
  const fs::path out = d / "evo";
  fs::remove_all(out);
  const fs::path cfg = write_config(
      "evo.cfg", "grid.n = 16\ngrid.L = 8\nsolver.dt = 0.1\nsolver.t_final = 0.5\nsolver.snap_every = 2\n");
  REQUIRE(run("evolve --config " + cfg.string() + " --out " + out.string(), d / "o.txt", d / "e.txt") == 0);
  CHECK(fs::exists(out / "snap_000000.wf3d"));
  CHECK(fs::exists(out / "snap_000002.wf3d"));
  CHECK(fs::exists(out / "snap_000004.wf3d"));
  CHECK_FALSE(fs::exists(out / "snap_000001.wf3d"));
  std::istringstream in(slurp(out / "norms.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# config_hash=", 0) == 0);
  std::getline(in, line);
  CHECK(line == "t,l2,l6,linf,linf_scaled");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 6);
  CHECK(run("evolve --config " + cfg.string(), d / "o.txt", d / "e.txt") == 2);
}

TEST_CASE("born-verify CSV") {
  const fs::path d = scratch();
  REQUIRE(run("born-verify --m 1 --t 4 --s 0 --samples 50 --seed 3", d / "o.txt", d / "e.txt") == 0);
  const std::string s = slurp(d / "o.txt");
  CHECK(s.find("order,t,s,value_re,value_im,std_error,bound,scaled") != std::string::npos);
  CHECK(s.find("\n0,4,0,") != std::string::npos);
  CHECK(s.find("\n1,4,0,") != std::string::npos);
}
