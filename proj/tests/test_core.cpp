#include "marlo/core/grid.hpp"
#include "marlo/core/hash.hpp"
#include "marlo/core/rng.hpp"
#include "marlo/core/score.hpp"
#include "marlo/core/types.hpp"

#include <doctest.h>

#include <array>
#include <map>
#include <set>

using namespace marlo;

TEST_CASE("centipoints render and parse exactly") {
  CHECK(Centipoints{100}.to_decimal() == "1");
  CHECK(Centipoints{20}.to_decimal() == "0.2");
  CHECK(Centipoints{-25}.to_decimal() == "-0.25");
  CHECK(Centipoints{-5}.to_decimal() == "-0.05");
  CHECK(Centipoints{0}.to_decimal() == "0");
  for (int v = -1000; v <= 1000; ++v) {
    const Centipoints c{v};
    REQUIRE(Centipoints::from_points(c.points()) == c);
  }
  CHECK(Centipoints::from_points(0.1 + 0.2) == Centipoints{30});
}

TEST_CASE("rng streams are reproducible and salt-separated") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  CHECK(derive_seed(7, salt::kInit) != derive_seed(7, salt::kEnvironment));
  CHECK(derive_seed(7, salt::agent(0)) != derive_seed(7, salt::agent(1)));
  CHECK_THROWS_AS(Rng(1).uniform(0), std::invalid_argument);
  CHECK_THROWS_AS(Rng(1).uniform_int(3, 2), std::invalid_argument);
}

TEST_CASE("xoshiro256** matches the reference output for a known state") {
  // SplitMix64(0) first outputs, then the reference xoshiro256** recurrence.
  std::uint64_t sm = 0;
  std::array<std::uint64_t, 4> s{};
  for (auto& w : s) {
    std::uint64_t z = (sm += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    w = z ^ (z >> 31);
  }
  CHECK(s[0] == 0xE220A8397B1DCDAFULL);
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  Rng rng(0);
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t expected = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    REQUIRE(rng.next_u64() == expected);
  }
}

TEST_CASE("uniform draws pass a chi-square goodness-of-fit test") {
  // 9 degrees of freedom; 27.88 is the 0.999 quantile.
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    Rng rng(seed);
    std::array<int, 10> counts{};
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[rng.uniform(10)];
    double chi = 0;
    for (int c : counts) chi += (c - n / 10.0) * (c - n / 10.0) / (n / 10.0);
    CHECK(chi < 27.88);
  }
  Rng rng(5);
  double mean = 0;
  for (int i = 0; i < 100000; ++i) mean += rng.unit();
  CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("shuffle reaches every permutation of 4 items uniformly") {
  Rng rng(11);
  std::map<std::array<int, 4>, int> seen;
  const int n = 48000;
  for (int i = 0; i < n; ++i) {
    std::array<int, 4> a{0, 1, 2, 3};
    rng.shuffle(a);
    ++seen[a];
  }
  REQUIRE(seen.size() == 24);
  double chi = 0;
  for (const auto& [perm, c] : seen) chi += (c - n / 24.0) * (c - n / 24.0) / (n / 24.0);
  CHECK(chi < 49.73);  // 23 dof, 0.999 quantile
}

TEST_CASE("fnv1a64 matches published vectors") {
  auto bytes = [](std::string_view s) {
    Fnv1a64 h;
    for (char c : s) h.byte(static_cast<std::uint8_t>(c));
    return h.digest();
  };
  CHECK(bytes("") == 0xcbf29ce484222325ULL);
  CHECK(bytes("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(bytes("foobar") == 0x85944171f73967e8ULL);
  CHECK(hash_to_hex(0xcbf29ce484222325ULL) == "cbf29ce484222325");
  CHECK(hash_from_hex("00000000000000ff") == 255);
  CHECK_THROWS_AS(hash_from_hex("ff"), std::invalid_argument);
  CHECK_THROWS_AS(hash_from_hex("zzzzzzzzzzzzzzzz"), std::invalid_argument);
}

namespace {

// Independent simultaneous-move oracle: iterate to a fixed point, cancelling blocked movers.
std::vector<Cell> resolve_oracle(const std::vector<Cell>& cur, const std::vector<Cell>& want,
                                 const std::vector<bool>& part) {
  const std::size_t n = cur.size();
  std::vector<bool> moving(n);
  for (std::size_t i = 0; i < n; ++i) moving[i] = part[i] && want[i] != cur[i];
  for (std::size_t i = 0; i < n; ++i) {
    if (!moving[i]) continue;
    for (std::size_t j = 0; j < i; ++j)
      if (moving[j] && want[j] == want[i]) moving[i] = false;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && moving[i] && moving[j] && want[i] == cur[j] && want[j] == cur[i]) moving[i] = moving[j] = false;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!moving[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || !part[j]) continue;
        const Cell final_j = moving[j] ? want[j] : cur[j];
        if (final_j == want[i]) {
          moving[i] = false;
          changed = true;
        }
      }
    }
  }
  std::vector<Cell> out = cur;
  for (std::size_t i = 0; i < n; ++i)
    if (moving[i]) out[i] = want[i];
  return out;
}

}  // namespace

TEST_CASE("resolve_moves agrees with a fixed-point oracle and never stacks agents") {
  Rng rng(3);
  for (int trial = 0; trial < 20000; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform(5));
    std::set<Cell> used;
    std::vector<Cell> cur;
    while (static_cast<int>(cur.size()) < n) {
      Cell c{rng.uniform_int(0, 3), rng.uniform_int(0, 3)};
      if (used.insert(c).second) cur.push_back(c);
    }
    std::vector<Cell> want;
    std::vector<bool> part;
    for (Cell c : cur) {
      const int k = rng.uniform_int(0, 4);
      want.push_back(k == 4 ? c : neighbor(c, kDirections[static_cast<std::size_t>(k)]));
      part.push_back(rng.uniform(5) != 0);
    }
    const auto got = resolve_moves(cur, want, part);
    REQUIRE(got == resolve_oracle(cur, want, part));
    std::set<Cell> finals;
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (!part[i]) CHECK(got[i] == cur[i]);
      if (part[i]) CHECK(finals.insert(got[i]).second);
    }
  }
}

TEST_CASE("resolve_moves tie order and chains") {
  const std::vector<Cell> cur{{0, 0}, {2, 0}};
  const std::vector<Cell> want{{1, 0}, {1, 0}};
  CHECK(resolve_moves(cur, want, {true, true}) == std::vector<Cell>{{1, 0}, {2, 0}});
  // swap is blocked
  CHECK(resolve_moves(std::vector<Cell>{{0, 0}, {1, 0}}, std::vector<Cell>{{1, 0}, {0, 0}}, {true, true}) ==
        std::vector<Cell>{{0, 0}, {1, 0}});
  // following into a vacated cell works
  CHECK(resolve_moves(std::vector<Cell>{{0, 0}, {1, 0}}, std::vector<Cell>{{1, 0}, {2, 0}}, {true, true}) ==
        std::vector<Cell>{{1, 0}, {2, 0}});
}

TEST_CASE("enum names round trip") {
  for (auto g : kAllGames) CHECK(parse_game(to_string(g)) == g);
  for (auto d : kDirections) CHECK(parse_direction(to_string(d)) == d);
  for (auto t : {Termination::Capture, Termination::AllExited, Termination::Timeout, Termination::StructureComplete,
                 Termination::TreasureExit, Termination::Death})
    CHECK(parse_termination(to_string(t)) == t);
  CHECK_FALSE(parse_game("chess"));
}
