#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "spinprobe/cli.hpp"
#include "spinprobe/io.hpp"
#include "spinprobe/texture_io.hpp"

namespace fs = std::filesystem;
using spinprobe::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> data_lines(const std::string& body) {
  std::vector<std::string> out;
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

std::string report_value(const std::string& body, const std::string& key) {
  for (const auto& line : data_lines(body))
    if (line.rfind(key + " = ", 0) == 0) return line.substr(key.size() + 3);
  return {};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("spinprobe_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("texture command") {
  TempDir dir;
  auto r = cli({"texture", "--lattice", "square", "--a", "3", "--nx", "5", "--ny", "5", "--pattern", "fm", "--dir",
                "0,0,1", "--out", dir / "t.spintex"});
  REQUIRE(r.code == 0);
  CHECK(spinprobe::load_texture(dir / "t.spintex").size() == 25);
  CHECK(cli({"texture", "--lattice", "square"}).code == 2);
  r = cli({"texture", "--a", "3", "--nx", "2", "--ny", "2", "--pattern", "afm-neel"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  const auto neel = spinprobe::read_texture(in);
  CHECK(neel.sites()[0].spin_dir.z() == 1.0);
  CHECK(neel.sites()[1].spin_dir.z() == -1.0);
  CHECK(neel.sites()[2].spin_dir.z() == -1.0);
  CHECK(neel.sites()[3].spin_dir.z() == 1.0);
  CHECK(cli({"texture", "--a", "3", "--dir", "0,0"}).code == 2);
  CHECK(cli({"texture", "--a", "-1"}).code == 2);
  CHECK(cli({"nonsense"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("sweep command") {
  TempDir dir;
  auto r = cli({"sweep", "--rmin", "2", "--rmax", "100", "--points", "200", "--log", "--out", dir / "s.csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("crossover_r_angstrom = 6.11", 0) == 0);
  const auto rows = data_lines(slurp(dir / "s.csv"));
  REQUIRE(rows.size() == 201);
  CHECK(rows[0] == "r_angstrom,J_uev,Edd_uev,Bstray_T,f_ghz");
  CHECK(cli({"sweep", "--points", "1"}).code == 2);
  CHECK(cli({"sweep", "--rmin", "5", "--rmax", "3"}).code == 2);
}

TEST_CASE("scan, isoscan and reconstruct round trip") {
  TempDir dir;
  REQUIRE(cli({"texture", "--a", "3", "--pattern", "afm-neel", "--out", dir / "n.spintex"}).code == 0);
  const std::vector<std::string> scan = {"scan", "--texture", dir / "n.spintex", "--step", "0.75", "--xrange", "0,12",
                                         "--yrange", "0,12", "--out", dir / "m.csv", "--pgm", dir / "m.pgm"};
  auto r = cli(scan);
  REQUIRE(r.code == 0);
  const auto csv = slurp(dir / "m.csv");
  const auto rows = data_lines(csv);
  REQUIRE(rows.size() == 290);
  CHECK(rows[0] == "x_angstrom,y_angstrom,f_minus_ghz,f_plus_ghz,shift_ghz");
  CHECK(csv.find("# mode = exchange") != std::string::npos);
  const auto pgm = slurp(dir / "m.pgm");
  CHECK(pgm.rfind("P2\n", 0) == 0);
  CHECK(pgm.find("\n17 17\n65535\n") != std::string::npos);

  auto again = scan;
  again.insert(again.begin(), {"--threads", "3"});
  REQUIRE(cli(again).code == 0);
  CHECK(slurp(dir / "m.csv") == csv);
  again[1] = "1";
  again.insert(again.begin(), {"--backend", "serial"});
  REQUIRE(cli(again).code == 0);
  CHECK(slurp(dir / "m.csv") == csv);

  r = cli({"reconstruct", "--texture", dir / "n.spintex", "--map", dir / "m.csv", "--out", dir / "moments.txt",
           "--report", dir / "rep.txt"});
  REQUIRE(r.code == 0);
  const auto moments = data_lines(slurp(dir / "moments.txt"));
  REQUIRE(moments.size() == 25);
  int right = 0;
  for (const auto& line : moments) {
    std::istringstream in(line);
    int ix, iy;
    double m;
    in >> ix >> iy >> m;
    right += ((ix + iy) % 2 == 0) == (m > 0);
  }
  CHECK(right == 25);
  CHECK(std::stod(report_value(slurp(dir / "rep.txt"), "condition_number")) == doctest::Approx(2.356006).epsilon(1e-5));
  CHECK(cli({"reconstruct", "--texture", dir / "n.spintex", "--map", dir / "m.csv", "--lambda", "-1"}).code == 2);
  CHECK(cli({"reconstruct", "--texture", dir / "n.spintex", "--map", dir / "missing.csv"}).code == 3);

  r = cli({"isoscan", "--texture", dir / "n.spintex", "--step", "3", "--xrange", "0,12", "--yrange", "0,12",
           "--fsource", "60", "--zmin", "2", "--zmax", "10"});
  REQUIRE(r.code == 0);
  const auto hm = data_lines(r.out);
  CHECK(hm.size() == 26);
  CHECK(hm[0] == "x_angstrom,y_angstrom,z_angstrom");
  CHECK(cli({"isoscan", "--texture", dir / "n.spintex", "--fsource", "abc"}).code == 2);
  r = cli({"isoscan", "--texture", dir / "n.spintex", "--step", "3", "--fsource", "1e6"});
  CHECK(r.code == 0);
  CHECK(r.err.find("no resonance") != std::string::npos);
  CHECK(r.out.find(",nan\n") != std::string::npos);
}

TEST_CASE("measured scan adds error columns") {
  TempDir dir;
  REQUIRE(cli({"texture", "--a", "3", "--nx", "2", "--ny", "2", "--out", dir / "t.spintex"}).code == 0);
  const std::vector<std::string> args = {"--seed", "4", "scan", "--texture", dir / "t.spintex", "--step", "1.5",
                                         "--measure", "--height", "5"};
  const auto a = cli(args);
  REQUIRE(a.code == 0);
  const auto rows = data_lines(a.out);
  CHECK(rows[0] == "x_angstrom,y_angstrom,f_minus_ghz,f_plus_ghz,shift_ghz,err_minus_ghz,err_plus_ghz,fit_failed");
  auto threaded = args;
  threaded.insert(threaded.begin(), {"--threads", "2"});
  CHECK(cli(threaded).out == a.out);
}

TEST_CASE("spectrum command") {
  TempDir dir;
  auto r = cli({"spectrum", "--resonances", "3.482", "--out", dir / "s.csv", "--report", dir / "f.txt"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(std::stod(report_value(slurp(dir / "f.txt"), "peak0_center_ghz")) - 3.482) < 5e-3);
  r = cli({"spectrum", "--resonances", "3.482", "--noiseless", "--out", dir / "s.csv"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(std::stod(report_value(r.out, "peak0_center_ghz")) - 3.482) < 1e-6);
  const auto a = cli({"--seed", "42", "spectrum", "--resonances", "3.482"});
  const auto b = cli({"spectrum", "--resonances", "3.482", "--seed", "42"});
  CHECK(a.out == b.out);
  CHECK(a.out != cli({"spectrum", "--resonances", "3.482", "--seed", "43"}).out);
  CHECK(cli({"spectrum"}).code == 2);
  CHECK(cli({"spectrum", "--resonances", "3.482", "--fstep", "0"}).code == 2);

  REQUIRE(cli({"texture", "--a", "3", "--out", dir / "t.spintex"}).code == 0);
  r = cli({"spectrum", "--texture", dir / "t.spintex", "--tip", "6,6,5", "--mode", "exchange", "--fstart", "0",
           "--fstop", "30"});
  REQUIRE(r.code == 0);
  CHECK(report_value(r.out, "n_peaks") == "2");
}

TEST_CASE("config files") {
  TempDir dir;
  REQUIRE(cli({"texture", "--a", "3", "--nx", "2", "--ny", "2", "--out", dir / "t.spintex"}).code == 0);
  {
    std::ofstream cfg(dir / "run.ini");
    cfg << "seed = 9\nconvention = splitting\n[scan]\nheight = 7\nstep = 1.5\n";
  }
  auto r = cli({"--config", dir / "run.ini", "scan", "--texture", dir / "t.spintex"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# height = 7\n") != std::string::npos);
  CHECK(r.out.find("# seed = 9\n") != std::string::npos);
  CHECK(r.out.find("# convention = splitting\n") != std::string::npos);
  r = cli({"--config", dir / "run.ini", "scan", "--texture", dir / "t.spintex", "--height", "5"});
  CHECK(r.out.find("# height = 5\n") != std::string::npos);
  {
    std::ofstream cfg(dir / "bad.ini");
    cfg << "[scan]\nheigth = 7\n";
  }
  CHECK(cli({"--config", dir / "bad.ini", "scan", "--texture", dir / "t.spintex"}).code == 3);
  CHECK(cli({"--config", dir / "none.ini", "scan", "--texture", dir / "t.spintex"}).code == 3);
  CHECK(cli({"scan", "--texture", dir / "absent.spintex"}).code == 3);
  {
    std::ofstream bad(dir / "broken.spintex");
    bad << "spintex 1\nlattice square\n";
  }
  r = cli({"scan", "--texture", dir / "broken.spintex"});
  CHECK(r.code == 3);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("map reader") {
  std::istringstream full("# c\nx_angstrom,y_angstrom,f_minus_ghz,f_plus_ghz,shift_ghz\n0,0,1,2,-1.5\n");
  const auto rows = spinprobe::io::read_map_csv(full);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].has_shift);
  CHECK(rows[0].shift == -1.5);
  std::istringstream legacy("x_angstrom,y_angstrom,f_minus_ghz,f_plus_ghz\n0,0,1,2\n");
  CHECK_FALSE(spinprobe::io::read_map_csv(legacy)[0].has_shift);
  std::istringstream bad("x_angstrom,y_angstrom,f_minus_ghz,f_plus_ghz\n0,0,1\n");
  CHECK_THROWS(spinprobe::io::read_map_csv(bad));
}
