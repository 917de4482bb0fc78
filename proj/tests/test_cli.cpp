#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "eitpt/io.hpp"
#include "eitpt/profiles.hpp"

#ifndef EITPT_CLI_BIN
#error "EITPT_CLI_BIN must point at the CLI binary"
#endif

using namespace eitpt;
using Catch::Approx;

namespace {

namespace fs = std::filesystem;

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "eitpt_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(EITPT_CLI_BIN) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line)) lines.push_back(line);
  return lines;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Synthetic coefficient potential written in the CLI interchange format.
fs::path write_spec_file(const std::string& name, Complex g12, Complex g13, Complex K0) {
  PotentialSpec s;
  s.g12 = g12;
  s.g13 = g13;
  s.K0 = K0;
  s.Ldiff = 1.0;
  s.R = 2.5e-3;
  s.preset_name = "synthetic";
  s.xi = uniform_xi_grid(1, 512);
  s.resample();
  fs::path p = work_dir() / name;
  write_potential_csv(p.string(), s);
  return p;
}

}  // namespace

TEST_CASE("dispersion-scan writes the full variant table") {
  fs::path out = work_dir() / "scan.csv";
  REQUIRE(run_cli("dispersion-scan --preset fig2 --out " + out.string()) == 0);
  auto lines = read_lines(out);
  CHECK(lines.size() == 1 + 3 * 481);
  CHECK(lines[0] == "delta3_over_gamma3,variant_id,re_K_per_cm,im_K_per_cm");

  SECTION("variant filter") {
    fs::path out1 = work_dir() / "scan_v0.csv";
    REQUIRE(run_cli("dispersion-scan --preset fig2 --variants 0 --out " + out1.string()) == 0);
    CHECK(read_lines(out1).size() == 1 + 481);
  }

  SECTION("byte-identical rerun") {
    fs::path out2 = work_dir() / "scan2.csv";
    REQUIRE(run_cli("dispersion-scan --preset fig2 --out " + out2.string()) == 0);
    CHECK(slurp(out) == slurp(out2));
  }
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli("dispersion-scan --preset fig2") == 2);          // missing --out
  CHECK(run_cli("dispersion-scan --preset nowhere --out /tmp/x.csv") == 2);
  CHECK(run_cli("definitely-not-a-subcommand") == 2);
}

TEST_CASE("design-potential emits the coefficient header") {
  fs::path out = work_dir() / "design.csv";
  REQUIRE(run_cli("design-potential --preset design --out " + out.string()) == 0);
  auto lines = read_lines(out);
  REQUIRE(lines.size() >= 2 + 512);
  REQUIRE(lines[0].rfind("# ", 0) == 0);
  nlohmann::json j = nlohmann::json::parse(lines[0].substr(2));
  CHECK(j["K0"]["re"].get<double>() == Approx(-11.7057).epsilon(1e-3));
  CHECK(j["K0"]["im"].get<double>() == Approx(-0.39997).epsilon(1e-3));
  CHECK(j["g12"]["im"].get<double>() == Approx(0.36867).epsilon(1e-3));
  CHECK(j["g13"]["re"].get<double>() == Approx(1.0).epsilon(1e-9));
  CHECK(j["residual"].get<double>() <= 0.1);

  SECTION("the written file reloads losslessly") {
    PotentialSpec back = read_potential_csv(out.string());
    CHECK(back.g12.imag() == j["g12"]["im"].get<double>());
    CHECK(back.K0.real() == j["K0"]["re"].get<double>());
    CHECK(back.V.size() == 512);
  }

  SECTION("balance tuning reports the knob value") {
    fs::path out2 = work_dir() / "design_tuned.csv";
    REQUIRE(run_cli("design-potential --preset design --balance-knob kappa13 --out " +
                    out2.string()) == 0);
    nlohmann::json j2 = nlohmann::json::parse(read_lines(out2)[0].substr(2));
    CHECK(std::abs(j2["balance_after_tuning"].get<double>()) <= 1e-4);
    CHECK(j2["balance_knob_value"].get<double>() == Approx(2.06e11).epsilon(0.10));
  }
}

TEST_CASE("design-potential without pump is a physics failure (exit 3)") {
  fs::path cfg = work_dir() / "nopump.toml";
  std::ofstream(cfg) << "gamma31 = 0\n";
  fs::path out = work_dir() / "nopump.csv";
  CHECK(run_cli("design-potential --preset design --config " + cfg.string() + " --out " +
                out.string()) == 3);
}

TEST_CASE("config overrides are validated") {
  fs::path cfg = work_dir() / "bad.toml";
  std::ofstream(cfg) << "not_a_key = 1\n";
  CHECK(run_cli("dispersion-scan --preset fig2 --config " + cfg.string() +
                " --out /tmp/x.csv") == 2);
}

TEST_CASE("propagate: free plane wave conserves power") {
  fs::path pot = write_spec_file("zero.csv", 0, 0, 0);
  fs::path out = work_dir() / "traj.csv";
  REQUIRE(run_cli("propagate --potential " + pot.string() +
                  " --input planewave:k=1 --steps 2000 --ds 1e-3 --out " + out.string()) == 0);
  auto lines = read_lines(out);
  REQUIRE(lines.size() == 2 + 2000);
  CHECK(lines[0] == "s,P,re_Q,im_Q");
  auto first = detail::split_csv_line(lines[1]);
  auto last = detail::split_csv_line(lines.back());
  double p0 = parse_double(first[1]), p1 = parse_double(last[1]);
  CHECK(std::abs(p1 - p0) / p0 < 1e-10);

  SECTION("quasi-power column stays conserved for the PT lattice") {
    fs::path pt = write_spec_file("pt.csv", Complex(0, 0.4), 1.0, Complex(-0.9, -0.4));
    fs::path out2 = work_dir() / "traj_pt.csv";
    REQUIRE(run_cli("propagate --potential " + pt.string() +
                    " --input gaussian:width=2 --steps 2000 --ds 1e-3 --out " +
                    out2.string()) == 0);
    auto rows = read_lines(out2);
    auto r0 = detail::split_csv_line(rows[1]);
    auto r1 = detail::split_csv_line(rows.back());
    Complex q0(parse_double(r0[2]), parse_double(r0[3]));
    Complex q1(parse_double(r1[2]), parse_double(r1[3]));
    CHECK(std::abs(q1 - q0) <= 1e-6 * std::abs(q0) + 1e-10);
  }

  SECTION("snapshots are dumped at requested s") {
    fs::path prefix = work_dir() / "snap";
    fs::path out3 = work_dir() / "traj3.csv";
    REQUIRE(run_cli("propagate --potential " + pot.string() +
                    " --input gaussian:width=2 --steps 100 --ds 1e-2 --out " + out3.string() +
                    " --snapshot-at 0.5,1 --snapshot-prefix " + prefix.string()) == 0);
    CHECK(fs::exists(work_dir() / "snap_s0.5.csv"));
    CHECK(fs::exists(work_dir() / "snap_s1.csv"));
    auto snap = read_lines(work_dir() / "snap_s1.csv");
    CHECK(snap[0] == "xi,abs_u_sq,re_u,im_u");
    CHECK(snap.size() == 1 + 1024);
  }

  SECTION("validation failures exit with 2") {
    CHECK(run_cli("propagate --potential " + pot.string() +
                  " --input planewave:k=1 --steps 10 --ds 0 --out /tmp/x.csv") == 2);
    CHECK(run_cli("propagate --potential " + pot.string() +
                  " --input planewave:k=1 --steps 10 --ds 1e-3 --points 1000 --out /tmp/x.csv") ==
          2);
    CHECK(run_cli("propagate --potential /nonexistent.csv --input planewave:k=1 --steps 1 "
                  "--ds 1e-3 --out /tmp/x.csv") == 2);
  }
}

TEST_CASE("bands and pt-threshold") {
  fs::path pt = write_spec_file("eq16.csv", Complex(0, 0.4), 1.0, Complex(-0.9, -0.4));

  SECTION("balanced lattice bands are real") {
    fs::path out = work_dir() / "bands.csv";
    REQUIRE(run_cli("bands --potential " + pt.string() + " --out " + out.string()) == 0);
    auto lines = read_lines(out);
    CHECK(lines[0] == "q,band_index,re_beta,im_beta");
    CHECK(lines.size() == 1 + 64 * 16);
    double max_im = 0;
    for (size_t i = 1; i < lines.size(); ++i) {
      auto cells = detail::split_csv_line(lines[i]);
      max_im = std::max(max_im, std::abs(parse_double(cells[3])));
    }
    CHECK(max_im <= 1e-8);
  }

  SECTION("free potential gives free bands") {
    fs::path zero = write_spec_file("zero2.csv", 0, 0, 0);
    fs::path out = work_dir() / "bands0.csv";
    REQUIRE(run_cli("bands --potential " + zero.string() + " --q-points 4 --out " +
                    out.string()) == 0);
    auto lines = read_lines(out);
    auto cells = detail::split_csv_line(lines[1]);  // q = -1, leading band
    CHECK(parse_double(cells[2]) == Approx(-1.0).margin(1e-9));
  }

  SECTION("threshold scan lands at W_c = 1") {
    fs::path out = work_dir() / "thresh.csv";
    REQUIRE(run_cli("pt-threshold --potential " + pt.string() + " --w-min 0.7 --w-max 1.3 "
                    "--w-step 0.05 --out " + out.string()) == 0);
    auto lines = read_lines(out);
    REQUIRE(lines[0].rfind("# ", 0) == 0);
    nlohmann::json j = nlohmann::json::parse(lines[0].substr(2));
    // family scales Im(sin coeff) = 0.4: breaking at 0.4 W = 0.5 -> W_c = 1.25
    CHECK(j["W_c"].get<double>() == Approx(1.25).margin(0.05));
  }

  SECTION("malformed potential files exit with 2") {
    fs::path bad = work_dir() / "bad.csv";
    std::ofstream(bad) << "xi,re_V,im_V\n0,0,0\n";
    CHECK(run_cli("bands --potential " + bad.string() + " --out /tmp/x.csv") == 2);
  }
}
