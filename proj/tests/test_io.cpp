#include <random>
#include <sstream>

#include "doctest.h"
#include "pathlinks/diagnostics.hpp"
#include "pathlinks/error.hpp"
#include "pathlinks/io.hpp"
#include "pathlinks/parallel.hpp"
#include "temp_dir.hpp"

using namespace pathlinks;

TEST_SUITE("io") {

TEST_CASE("sha256 matches the published test vectors") {
  CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  TempDir dir;
  CHECK(io::sha256_file(dir.write("abc.txt", "abc")) == io::sha256_hex("abc"));
}

TEST_CASE("csv quoting round-trips arbitrary fields") {
  std::mt19937 rng(7);
  const std::string alphabet = "ab,\"\n x";
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> fields(1 + rng() % 4);
    for (auto& f : fields)
      for (int i = rng() % 6; i > 0; --i) f.push_back(alphabet[rng() % alphabet.size()]);
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + io::csv_quote(fields[i]);
    if (line.find('\n') != std::string::npos) continue;  // a single line only
    CHECK(io::parse_csv_line(line) == fields);
  }
  CHECK_THROWS_AS(io::parse_csv_line("\"open"), Error);
  CHECK_THROWS_AS(io::parse_csv_line("\"a\"b"), Error);
}

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(rng);
    CHECK(io::parse_double(io::format_double(x)) == x);
  }
  CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("number parsing rejects junk") {
  CHECK(io::parse_int("-42") == -42);
  CHECK_THROWS_AS(io::parse_int("4x"), Error);
  CHECK_THROWS_AS(io::parse_int(""), Error);
  CHECK_THROWS_AS(io::parse_double("1.5.2"), Error);
}

TEST_CASE("data lines skip comments, blanks and carriage returns") {
  TempDir dir;
  const auto file = dir.write("f.tsv", "# header\n\na\tb\r\n#x\nc\n");
  std::vector<std::pair<std::size_t, std::string>> seen;
  io::for_each_data_line(file, [&](std::size_t n, std::string_view line) { seen.emplace_back(n, line); });
  REQUIRE(seen.size() == 2);
  CHECK(seen[0] == std::pair<std::size_t, std::string>{3, "a\tb"});
  CHECK(seen[1] == std::pair<std::size_t, std::string>{5, "c"});
  try {
    io::for_each_data_line(dir / "missing", [](std::size_t, std::string_view) {});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::missing_file);
  }
}

TEST_CASE("metadata block survives a round trip and hashes its config") {
  io::Metadata m;
  m.version = "1";
  m.command = "mine";
  m.config = {{"alpha", "0.3"}, {"selection", "path"}};
  m.input_checksums = {{"titles", "abc"}};
  TempDir dir;
  {
    auto out = io::open_output(dir / "x.csv");
    m.write_comment_block(out);
    out << "a,b\n";
  }
  const auto block = io::read_comment_block(dir / "x.csv");
  CHECK(block.at("config.alpha") == "0.3");
  CHECK(block.at("input.titles") == "abc");
  CHECK(block.at("config_hash") == m.config_hash());
  auto other = m;
  other.config["alpha"] = "0.31";
  CHECK(other.config_hash() != m.config_hash());
}

TEST_CASE("diagnostics count by category and cap stored messages") {
  Diagnostics d;
  for (int i = 0; i < 60; ++i) d.warn("a", "m");
  d.warn("b", "m");
  CHECK(d.count("a") == 60);
  CHECK(d.count("b") == 1);
  CHECK(d.total() == 61);
  CHECK(d.messages().size() == Diagnostics::kMaxMessages);
  Diagnostics e;
  e.warn("b", "m");
  d.merge(e);
  CHECK(d.count("b") == 2);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::count(hits.begin(), hits.end(), 1) == 1000);
  CHECK_THROWS_AS(parallel_for(10, 4,
                               [](std::size_t i) {
                                 if (i == 5) throw Error(ErrorCode::invalid_argument, "boom");
                               }),
                  Error);
}

}  // TEST_SUITE
