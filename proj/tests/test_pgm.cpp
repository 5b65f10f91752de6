#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "msmooth/pgm.hpp"

using namespace msmooth;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("pgm_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

void write_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("ASCII P2 parsing with comments") {
  TempFile tmp("ascii.pgm");
  write_bytes(tmp.path,
              "P2\n# comment line\n3 2\n255\n0 1 2\n3 4 5\n");
  const Field f = read_pgm(tmp.path);
  CHECK(f.extent(0) == 3);
  CHECK(f.extent(1) == 2);
  CHECK(f(0, 0) == 0.0);
  CHECK(f(2, 0) == 2.0);
  CHECK(f(0, 1) == 3.0);
  CHECK(f(2, 1) == 5.0);
}

TEST_CASE("hand-crafted binary P5 with one byte per sample") {
  TempFile tmp("bin.pgm");
  std::string payload = "P5\n3 3\n255\n";
  for (int v : {0, 10, 20, 30, 40, 50, 60, 70, 255})
    payload.push_back(static_cast<char>(v));
  write_bytes(tmp.path, payload);
  const Field f = read_pgm(tmp.path);
  CHECK(f(0, 0) == 0.0);
  CHECK(f(1, 1) == 40.0);
  CHECK(f(2, 2) == 255.0);
}

TEST_CASE("binary round trip preserves integer fields") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> pix(0, 255);
  Field f(17, 9);
  for (auto& v : f.values()) v = static_cast<double>(pix(rng));

  TempFile tmp("round.pgm");
  write_pgm(f, tmp.path, 255, true);
  const Field g = read_pgm(tmp.path);
  REQUIRE(g.extent(0) == 17);
  REQUIRE(g.extent(1) == 9);
  for (size_t k = 0; k < f.size(); ++k) CHECK(f.data()[k] == g.data()[k]);
}

TEST_CASE("16-bit samples survive a round trip") {
  Field f(4, 4);
  int v = 0;
  for (auto& s : f.values()) s = static_cast<double>(v += 4097);
  TempFile tmp("round16.pgm");
  write_pgm(f, tmp.path, 65535, true);
  const Field g = read_pgm(tmp.path);
  for (size_t k = 0; k < f.size(); ++k) CHECK(f.data()[k] == g.data()[k]);
}

TEST_CASE("ASCII round trip and clamping on write") {
  Field f(3, 3);
  f(0, 0) = -5.0;
  f(1, 1) = 300.0;
  f(2, 2) = 99.6;
  TempFile tmp("clamp.pgm");
  write_pgm(f, tmp.path, 255, false);
  const Field g = read_pgm(tmp.path);
  CHECK(g(0, 0) == 0.0);
  CHECK(g(1, 1) == 255.0);
  CHECK(g(2, 2) == 100.0);
}

TEST_CASE("malformed inputs raise IoError with a byte offset") {
  TempFile bad_magic("m.pgm");
  write_bytes(bad_magic.path, "P7\n3 3\n255\n");
  CHECK_THROWS_AS(read_pgm(bad_magic.path), IoError);

  TempFile truncated("t.pgm");
  write_bytes(truncated.path, std::string("P5\n3 3\n255\n") + "ab");
  try {
    read_pgm(truncated.path);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
  }

  TempFile overrange("o.pgm");
  write_bytes(overrange.path, "P2\n3 2\n10\n0 1 2\n3 4 50\n");
  CHECK_THROWS_AS(read_pgm(overrange.path), IoError);
}

TEST_CASE("1D CSV round trip") {
  Field f(5);
  for (int i = 0; i < 5; ++i) f(i) = 1.5 * i - 2.25;
  TempFile tmp("sig.csv");
  write_csv_1d(f, tmp.path);
  const Field g = read_csv_1d(tmp.path);
  REQUIRE(g.extent(0) == 5);
  for (int i = 0; i < 5; ++i) CHECK(g(i) == f(i));
}
