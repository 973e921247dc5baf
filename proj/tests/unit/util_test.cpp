#include <doctest.h>

#include <atomic>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lobarena/util/csv.hpp"
#include "lobarena/util/error.hpp"
#include "lobarena/util/hash.hpp"
#include "lobarena/util/parallel.hpp"
#include "lobarena/util/rng.hpp"
#include "lobarena/util/time.hpp"
#include "support/helpers.hpp"

using namespace lobarena;

TEST_CASE("substream seeds are stable and distinct") {
  const std::uint64_t a = substream_seed(42, 0);
  CHECK(a == substream_seed(42, 0));
  std::set<std::uint64_t> seen;
  for (std::uint64_t id = 0; id < 1000; ++id) seen.insert(substream_seed(42, id));
  CHECK(seen.size() == 1000);
  CHECK(substream_seed(42, 7) != substream_seed(43, 7));
}

TEST_CASE("rng uniform matches the documented engine transform") {
  Rng rng(9001);
  std::mt19937_64 engine(9001);
  for (int i = 0; i < 64; ++i) {
    const double expect = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    CHECK(rng.uniform() == expect);
  }
}

TEST_CASE("rng draws stay inside their ranges") {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto b = rng.uniform_below(7);
    CHECK(b < 7);
    const auto v = rng.uniform_int(-3, 5);
    CHECK(v >= -3);
    CHECK(v <= 5);
  }
}

TEST_CASE("rng uniform_below covers every residue") {
  Rng rng(11);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 500; ++i) seen.insert(rng.uniform_below(5));
  CHECK(seen == std::set<std::uint64_t>{0, 1, 2, 3, 4});
}

TEST_CASE("rng normal has the right first two moments") {
  Rng rng(5);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::fabs(mean) < 0.01);
  CHECK(std::fabs(var - 1.0) < 0.02);
  CHECK(rng.normal(10.0, 0.0) == 10.0);
}

TEST_CASE("rng exponential_mean hits its mean") {
  Rng rng(8);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.exponential_mean(2.5);
    CHECK(x >= 0.0);
    sum += x;
  }
  // SE of the mean is 2.5/sqrt(n) ~ 0.0056; allow 4 SE.
  CHECK(std::fabs(sum / n - 2.5) < 0.023);
}

TEST_CASE("identical seeds give identical streams") {
  Rng a(77), b(77);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("fnv1a64 matches published vectors") {
  CHECK(fnv1a64(kFnvOffset, std::string_view{}) == kFnvOffset);
  CHECK(fnv1a64(kFnvOffset, std::string_view{"a"}) == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64(kFnvOffset, std::string_view{"foobar"}) == 0x85944171f73967e8ull);
  // Chaining two pieces equals hashing the concatenation.
  const auto piecewise =
      fnv1a64(fnv1a64(kFnvOffset, std::string_view{"foo"}), std::string_view{"bar"});
  CHECK(piecewise == 0x85944171f73967e8ull);
}

TEST_CASE("sha256 matches published vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  // 56-byte message exercises the two-block padding path.
  CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("sha256_file_hex hashes file contents") {
  testing::TempDir dir("hash");
  const std::string path = dir.path() + "/blob.bin";
  const std::string payload = "abc";
  testing::write_file(path, payload);
  CHECK(sha256_file_hex(path) == sha256_hex(payload));
  CHECK_THROWS_AS(sha256_file_hex(dir.path() + "/missing"), Error);
}

TEST_CASE("csv writer and reader round-trip") {
  testing::TempDir dir("csv");
  const std::string path = dir.path() + "/t.csv";
  {
    CsvWriter w(path);
    w.header({"time", "price", "note"});
    w.row(std::int64_t{-5}, 0.1, "hello");
    w.row(std::uint64_t{18446744073709551615ull}, 2.0, "");
  }
  CHECK(testing::read_file(path) ==
        "time,price,note\n-5,0.1,hello\n18446744073709551615,2,\n");

  CsvReader r(path, "time,price,note");
  REQUIRE(r.next());
  CHECK(r.row_number() == 2);  // header is row 1
  CHECK(r.int_field(0) == -5);
  CHECK(r.double_field(1) == 0.1);
  CHECK(r.str_field(2) == "hello");
  REQUIRE(r.next());
  CHECK(r.row_number() == 3);
  CHECK(r.uint_field(0) == 18446744073709551615ull);
  CHECK(!r.next());
}

TEST_CASE("csv reader treats a mismatched first line as data") {
  testing::TempDir dir("csv2");
  const std::string path = dir.path() + "/plain.csv";
  testing::write_file(path, "1,2\n3,4\n");
  CsvReader r(path, "a,b");
  int rows = 0;
  while (r.next()) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("csv reader reports the failing row") {
  testing::TempDir dir("csv3");
  const std::string path = dir.path() + "/bad.csv";
  testing::write_file(path, "a,b\n1,2\nx,4\n");
  CsvReader r(path, "a,b");
  REQUIRE(r.next());
  REQUIRE(r.next());
  try {
    (void)r.int_field(0);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 3") != std::string::npos);
  }
}

TEST_CASE("parse_clock accepts HH:MM and HH:MM:SS") {
  CHECK(parse_clock("09:30") == 9 * kNsPerHour + 30 * kNsPerMin);
  CHECK(parse_clock("16:00:00") == 16 * kNsPerHour);
  CHECK(parse_clock("00:00") == 0);
  CHECK(parse_clock("23:59:59") == 24 * kNsPerHour - kNsPerSec);
  CHECK_THROWS_AS(parse_clock("24:00"), Error);
  CHECK_THROWS_AS(parse_clock("12:60"), Error);
  CHECK_THROWS_AS(parse_clock("12:00:60"), Error);
  CHECK_THROWS_AS(parse_clock("9"), Error);
  CHECK_THROWS_AS(parse_clock(""), Error);
}

TEST_CASE("format_clock renders nanoseconds since midnight") {
  CHECK(format_clock(parse_clock("09:30")) == "09:30:00.000000000");
  CHECK(format_clock(34200 * kNsPerSec + 123456789) == "09:30:00.123456789");
  // Times past midnight wrap the day.
  CHECK(format_clock(kNsPerDay + kNsPerSec) == "00:00:01.000000000");
}

TEST_CASE("error concatenates its arguments") {
  Error e("bad row ", 7, " in ", "file.csv");
  CHECK(std::string(e.what()) == "bad row 7 in file.csv");
  ConfigError c("field 'days': must be >= 1");
  const Error& base = c;
  CHECK(std::string(base.what()) == "field 'days': must be >= 1");
}

TEST_CASE("parallel_for visits each index once and rethrows") {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(100, 4, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) CHECK(h.load() == 1);

  CHECK(thread_cap() >= 1);
  CHECK_THROWS_AS(
      parallel_for(8, 3,
                   [](std::size_t i) {
                     if (i == 5) throw Error("worker failed");
                   }),
      Error);
}
