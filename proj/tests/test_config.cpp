#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ssmpc/config.hpp"
#include "ssmpc/error.hpp"

using namespace ssmpc;
namespace fs = std::filesystem;

namespace {
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("ssmpc_cfg_" + std::to_string(::getpid()) + "_" +
            std::to_string(rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};
}  // namespace

TEST_CASE("kv file parses keys, comments and lists") {
  TempDir tmp;
  auto p = (tmp.path / "a.cfg").string();
  {
    std::ofstream out(p);
    out << "# comment\n"
        << "plant.n_links = 4\n"
        << "plant.gravity=9.0\n"
        << "data.amplitude_fractions = 0.5, 1.0\n"
        << "\n"
        << "name = hello\n";
  }
  KvFile kv = KvFile::load(p);
  CHECK(kv.get_int("plant.n_links", -1) == 4);
  CHECK(kv.get_double("plant.gravity", 0.0) == doctest::Approx(9.0));
  auto lst = kv.get_list("data.amplitude_fractions", {});
  REQUIRE(lst.size() == 2);
  CHECK(lst[1] == doctest::Approx(1.0));
  CHECK(kv.get_string("name", "") == "hello");
  CHECK(kv.get_double("absent", 7.5) == doctest::Approx(7.5));
}

TEST_CASE("kv file rejects malformed input") {
  TempDir tmp;
  auto p = (tmp.path / "bad.cfg").string();
  {
    std::ofstream out(p);
    out << "no equals sign here\n";
  }
  CHECK_THROWS_AS(KvFile::load(p), Error);
  {
    std::ofstream out(p);
    out << "plant.gravity = not_a_number\n";
  }
  KvFile kv = KvFile::load(p);
  CHECK_THROWS_AS(kv.get_double("plant.gravity", 0.0), Error);
  CHECK_THROWS_AS(KvFile::load((tmp.path / "missing.cfg").string()), Error);
}

TEST_CASE("app config round-trips through file with exact values") {
  TempDir tmp;
  AppConfig c;
  c.plant.stiffness_alpha = 0.0123456789012345678;
  c.mpc.u_reg = 3.0e-7;
  c.data.actuated_periods = {0.7, 1.9};
  auto p = (tmp.path / "round.cfg").string();
  c.save(p);
  AppConfig d = AppConfig::from_file(p);
  CHECK(d.plant.stiffness_alpha == c.plant.stiffness_alpha);
  CHECK(d.mpc.u_reg == c.mpc.u_reg);
  REQUIRE(d.data.actuated_periods.size() == 2);
  CHECK(d.data.actuated_periods[1] == c.data.actuated_periods[1]);
}

TEST_CASE("config validation rejects out-of-range values") {
  AppConfig c;
  c.plant.n_links = 1;
  CHECK_THROWS_WITH_AS(c.validate(),
                       doctest::Contains("n_links must be >= 2"), Error);
  c = AppConfig{};
  c.plant.stiffness_alpha = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = AppConfig{};
  c.plant.feature_offset = 1.0;  // past one link length
  CHECK_THROWS_AS(c.validate(), Error);
  c = AppConfig{};
  c.mpc.u_min = 1.0;
  c.mpc.u_max = 0.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = AppConfig{};
  c.data.dt_sample = 0.0005;  // below dt_sim
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("defaults pass validation") {
  AppConfig c;
  CHECK_NOTHROW(c.validate());
}
