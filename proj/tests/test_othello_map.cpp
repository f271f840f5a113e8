#include <chrono>
#include <random>
#include <unordered_map>
#include <vector>

#include "concury/othello_map.hpp"
#include "doctest.h"

using namespace concury;

namespace {

FlowKey key_of(uint64_t id) {
  return FlowKey::make(uint32_t(id), 0x0a800001, uint16_t(id >> 32),
                       uint16_t(id >> 48), 6);
}

}  // namespace

TEST_CASE("five records resolve through the index othello") {
  OthelloMap map(11);
  for (uint16_t i = 0; i < 5; ++i) {
    map.insert(key_of(i), uint16_t(i + 1), uint16_t(10 + i));
  }
  // c1 sits at index 0: its othello lookup xors to 0 and full-key
  // comparison confirms the record.
  const auto* r = map.query(key_of(0));
  REQUIRE(r != nullptr);
  CHECK(r == &map.records()[0]);
  CHECK(r->dip_index == 1);
  CHECK(r->dcode == 10);
}

TEST_CASE("query on an empty map is not-exist") {
  OthelloMap map;
  CHECK(map.query(key_of(1)) == nullptr);
}

TEST_CASE("absent keys among 10k present are rejected by key comparison") {
  OthelloMap map(3);
  std::unordered_map<uint64_t, uint16_t> ref;
  for (uint64_t i = 0; i < 10000; ++i) {
    uint16_t dip = uint16_t(i % 32);
    map.insert(key_of(i), dip, uint16_t(i % 4096));
    ref[i] = dip;
  }
  std::mt19937_64 rng(4);
  for (int probe = 0; probe < 1000; ++probe) {
    uint64_t id = 10000 + rng() % 1000000;
    CHECK(map.query(key_of(id)) == nullptr);
  }
  for (const auto& [id, dip] : ref) {
    const auto* r = map.query(key_of(id));
    REQUIRE(r != nullptr);
    CHECK(r->dip_index == dip);
  }
}

TEST_CASE("insert into empty map and re-insert semantics") {
  OthelloMap map;
  CHECK(map.insert(key_of(7), 3, 100));
  REQUIRE(map.size() == 1);
  CHECK(map.query(key_of(7))->dip_index == 3);

  // Re-insert overwrites in place.
  CHECK(!map.insert(key_of(7), 9, 101));
  CHECK(map.size() == 1);
  CHECK(map.query(key_of(7))->dip_index == 9);
  CHECK(map.query(key_of(7))->dcode == 101);
}

TEST_CASE("a million inserts stay consistent with a reference map") {
  OthelloMap map(5);
  const uint64_t n = 1000000;
  for (uint64_t i = 0; i < n; ++i) {
    map.insert(key_of(i), uint16_t(i % 128), uint16_t(i % 4096));
  }
  CHECK(map.size() == n);
  CHECK(map.index_width() == 20);  // capacity 1M rounded to 2^20
  std::mt19937_64 rng(6);
  for (int probe = 0; probe < 20000; ++probe) {
    uint64_t i = rng() % n;
    const auto* r = map.query(key_of(i));
    REQUIRE(r != nullptr);
    CHECK(r->dip_index == uint16_t(i % 128));
  }
}

TEST_CASE("deleting the only key empties the map") {
  OthelloMap map;
  map.insert(key_of(1), 0, 0);
  CHECK(map.erase(key_of(1)));
  CHECK(map.size() == 0);
  CHECK(map.query(key_of(1)) == nullptr);
  // Absent delete is a silent no-op.
  CHECK(!map.erase(key_of(1)));
}

TEST_CASE("deleting moves the last record into the hole") {
  OthelloMap map(9);
  for (uint16_t i = 0; i < 5; ++i) {
    map.insert(key_of(i), uint16_t(i), uint16_t(i));
  }
  // Delete c2 (index 1): c5 (index 4) must move to index 1 with its othello
  // value updated.
  REQUIRE(map.erase(key_of(1)));
  CHECK(map.size() == 4);
  const auto* moved = map.query(key_of(4));
  REQUIRE(moved != nullptr);
  CHECK(moved == &map.records()[1]);
  CHECK(map.query(key_of(1)) == nullptr);
  for (uint64_t id : {0, 2, 3}) {
    REQUIRE(map.query(key_of(id)) != nullptr);
    CHECK(map.query(key_of(id))->dip_index == id);
  }
}

TEST_CASE("interleaved inserts and deletes match a reference map") {
  OthelloMap map(77);
  std::unordered_map<uint64_t, std::pair<uint16_t, uint16_t>> ref;
  std::mt19937_64 rng(78);
  for (int step = 0; step < 100000; ++step) {
    uint64_t id = rng() % 3000;
    if (rng() % 3 != 0) {
      uint16_t dip = uint16_t(rng() % 64);
      uint16_t dcode = uint16_t(rng() % 4096);
      map.insert(key_of(id), dip, dcode);
      ref[id] = {dip, dcode};
    } else {
      bool did = map.erase(key_of(id));
      CHECK(did == (ref.erase(id) == 1));
    }
    if (step % 1000 == 0) CHECK(map.size() == ref.size());
  }
  CHECK(map.size() == ref.size());
  for (const auto& [id, val] : ref) {
    const auto* r = map.query(key_of(id));
    REQUIRE(r != nullptr);
    CHECK(r->dip_index == val.first);
    CHECK(r->dcode == val.second);
  }
}

TEST_CASE("bijection: every stored key resolves to its exact index") {
  OthelloMap map(31);
  std::mt19937_64 rng(32);
  for (int i = 0; i < 2000; ++i) {
    map.insert(key_of(rng() % 5000), uint16_t(i % 16), uint16_t(i % 1024));
    if (i % 5 == 0) map.erase(key_of(rng() % 5000));
  }
  const auto& recs = map.records();
  for (size_t i = 0; i < recs.size(); ++i) {
    CHECK(map.query(recs[i].key) == &recs[i]);
  }
}

TEST_CASE("generate_dataplane on an empty map gives defined dcodes") {
  OthelloMap map;
  Othello dp = map.generate_dataplane(12);
  CHECK(dp.l == 12);
  FlowKey k = key_of(99);
  uint64_t v = dp.lookup(&k, sizeof(k));
  CHECK(v < 4096);
  CHECK(dp.lookup(&k, sizeof(k)) == v);
}

TEST_CASE("generate_dataplane assigns every key its stored dcode") {
  OthelloMap map(21);
  std::mt19937_64 rng(22);
  for (uint64_t i = 0; i < 5000; ++i) {
    map.insert(key_of(i), uint16_t(i % 8), uint16_t(rng() % 4096));
  }
  Othello dp = map.generate_dataplane(12);
  CHECK(dp.l == 12);
  for (const auto& r : map.records()) {
    CHECK(dp.lookup(&r.key, sizeof(r.key)) == r.dcode);
  }
}

TEST_CASE("regeneration beats building from scratch") {
  OthelloMap map(41);
  const uint64_t n = 32768;
  for (uint64_t i = 0; i < n; ++i) {
    map.insert(key_of(i), uint16_t(i % 64), uint16_t(i % 4096));
  }
  using clock = std::chrono::steady_clock;

  auto t0 = clock::now();
  Othello regen = map.generate_dataplane(12);
  auto t1 = clock::now();

  std::vector<std::pair<FlowKey, uint64_t>> pairs;
  pairs.reserve(n);
  for (const auto& r : map.records()) pairs.emplace_back(r.key, r.dcode);
  OthelloKv<FlowKey> scratch(pairs, 12, 8, 42);
  auto t2 = clock::now();

  for (const auto& r : map.records()) {
    REQUIRE(regen.lookup(&r.key, sizeof(r.key)) == r.dcode);
    REQUIRE(scratch.lookup(r.key) == r.dcode);
  }
  double regen_us = std::chrono::duration<double, std::micro>(t1 - t0).count();
  double build_us = std::chrono::duration<double, std::micro>(t2 - t1).count();
  CAPTURE(regen_us);
  CAPTURE(build_us);
  // The acceptance suite pins the 1.5x bound; here just require a speedup.
  CHECK(build_us > regen_us);
}

TEST_CASE("cp memory accounting follows the closed form") {
  OthelloMap map(51);
  for (uint64_t i = 0; i < 1000; ++i) {
    map.insert(key_of(i), uint16_t(i % 4), uint16_t(i % 4096));
  }
  double n = 1000.0;
  double li = map.index_width();
  CHECK(map.memory_bits(12) ==
        doctest::Approx(2.33 * li * n + (104 + 16 + 12) * n));
}

TEST_CASE("index width grows at capacity doublings") {
  OthelloMap map(61);
  CHECK(map.index_width() == 8);
  for (uint64_t i = 0; i < 300; ++i) {
    map.insert(key_of(i), 1, 2);
  }
  CHECK(map.index_width() == 9);
  for (uint64_t i = 0; i < 300; ++i) {
    REQUIRE(map.query(key_of(i)) != nullptr);
  }
}

TEST_CASE("snapshot and restore preserve the map") {
  OthelloMap map(71);
  std::mt19937_64 rng(72);
  for (uint64_t i = 0; i < 1000; ++i) {
    map.insert(key_of(i), uint16_t(rng() % 32), uint16_t(rng() % 4096));
  }
  map.erase(key_of(3));
  auto bytes = map.snapshot();
  OthelloMap back = OthelloMap::restore(bytes.data(), bytes.size(), 73);
  CHECK(back.size() == map.size());
  for (uint64_t i = 0; i < 1000; ++i) {
    const auto* a = map.query(key_of(i));
    const auto* b = back.query(key_of(i));
    if (a == nullptr) {
      CHECK(b == nullptr);
    } else {
      REQUIRE(b != nullptr);
      CHECK(a->dip_index == b->dip_index);
      CHECK(a->dcode == b->dcode);
    }
  }
}
