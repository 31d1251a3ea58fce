#include "blsm/dump.hpp"
#include "blsm/error.hpp"
#include "blsm/workload.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace blsm;
using blsm::testing::D;
using blsm::testing::I;

namespace {

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("golden dump of a three-batch LSM") {
  Lsm lsm(LsmConfig{2});
  lsm.update_batch(std::vector{I(5, 50), I(1, 10)});
  lsm.update_batch(std::vector{D(5), I(3, 30)});
  lsm.update_batch(std::vector{I(8, 80), I(8, 81)});
  CHECK(dump(lsm) ==
        "lsm b=2 r=3\n"
        "level 0: 8:R:80 8:R:81\n"
        "level 1: 1:R:10 3:R:30 5:T:0 5:R:50\n");

  SortedArray sa(LsmConfig{2});
  sa.update_batch(std::vector{I(5, 50), I(1, 10)});
  sa.update_batch(std::vector{D(5), I(3, 30)});
  CHECK(dump(sa) == "sa b=2 r=2\nlevel 0: 1:R:10 3:R:30 5:T:0 5:R:50\n");
  CHECK(dump(Lsm(LsmConfig{4})) == "lsm b=4 r=0\n");
  CHECK(dump(SortedArray(LsmConfig{4})) == "sa b=4 r=0\n");
}

TEST_CASE("round trip") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t b = std::size_t{2} << (rng() % 4);
    Lsm lsm(LsmConfig{b});
    SortedArray sa(LsmConfig{b});
    const std::size_t batches = rng() % 20;
    for (std::size_t j = 0; j < batches; ++j) {
      const auto batch = random_mixed_batch(rng, b, KeyAlphabet{kMaxUserKey - 100, 101}, 0.3);
      lsm.update_batch(batch);
      sa.update_batch(batch);
    }
    if (trial % 3 == 0) lsm.cleanup();
    const std::string text = dump(lsm);
    const Lsm parsed = parse_lsm(text);
    CHECK(dump(parsed) == text);
    CHECK(parsed.resident_batches() == lsm.resident_batches());
    const std::string sa_text = dump(sa);
    CHECK(dump(parse_sorted_array(sa_text)) == sa_text);
  }
}

TEST_CASE("parse errors") {
  CHECK(error_of([] { parse_lsm(""); }) == Errc::ParseError);
  CHECK(error_of([] { parse_lsm("lsm b=2\n"); }) == Errc::ParseError);
  CHECK(error_of([] { parse_lsm("sa b=2 r=0\n"); }) == Errc::ParseError);
  CHECK(error_of([] { parse_lsm("lsm b=x r=0\n"); }) == Errc::ParseError);
  CHECK(error_of([] { parse_lsm("lsm b=2 r=1\nlevel 0: 1:R:1 2:X:1\n"); }) == Errc::ParseError);
  CHECK(error_of([] { parse_lsm("lsm b=2 r=1\nlevel 0: 1:R:1 2:R\n"); }) == Errc::ParseError);
  CHECK(error_of([] { parse_lsm("lsm b=2 r=1\nlevel 0: 1:R:1 4294967295:R:1\n"); }) == Errc::ParseError);
  CHECK(error_of([] { parse_lsm("lsm b=2 r=3\nlevel 1: 1:R:1 2:R:1 3:R:1 4:R:1\nlevel 0: 1:R:1 2:R:1\n"); }) ==
        Errc::ParseError);
  CHECK(error_of([] { parse_lsm("lsm b=2 r=1\nlevl 0: 1:R:1 2:R:1\n"); }) == Errc::ParseError);
  CHECK(error_of([] { parse_sorted_array("sa b=2 r=1\nlevel 0: 1:R:1 2:R:1\nlevel 1: 1:R:1\n"); }) ==
        Errc::ParseError);
}

TEST_CASE("parsed contents are validated") {
  CHECK(error_of([] { parse_lsm("lsm b=2 r=2\nlevel 0: 1:R:1 2:R:1\n"); }) == Errc::InvariantViolation);
  CHECK(error_of([] { parse_lsm("lsm b=2 r=1\nlevel 0: 2:R:1 1:R:1\n"); }) == Errc::InvariantViolation);
  CHECK(error_of([] { parse_lsm("lsm b=3 r=0\n"); }) == Errc::InvalidConfig);
  CHECK(error_of([] { parse_sorted_array("sa b=2 r=2\nlevel 0: 1:R:1 2:R:1\n"); }) == Errc::InvariantViolation);
  const Lsm ok = parse_lsm("lsm b=2 r=1\r\nlevel 0: 3:T:0 3:R:9\r\n");
  CHECK(ok.lookup(std::vector<std::uint32_t>{3}).front() == std::nullopt);
}
