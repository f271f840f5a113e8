#include <random>
#include <vector>

#include "concury/bits.hpp"
#include "doctest.h"

using namespace concury;

TEST_CASE("bit array round-trips against a plain vector") {
  std::mt19937_64 rng(7);
  for (unsigned width : {1u, 5u, 8u, 12u, 13u, 16u}) {
    const size_t count = 1000;
    BitArray a(count, width);
    std::vector<uint16_t> ref(count, 0);
    uint64_t mask = (uint64_t(1) << width) - 1;
    for (int ops = 0; ops < 5000; ++ops) {
      size_t i = rng() % count;
      uint16_t v = uint16_t(rng() & mask);
      a.set(i, v);
      ref[i] = v;
    }
    for (size_t i = 0; i < count; ++i) {
      CAPTURE(width);
      CAPTURE(i);
      REQUIRE(a.get(i) == ref[i]);
    }
  }
}

TEST_CASE("values straddling word boundaries survive neighbours' writes") {
  // width 12: element 5 covers bits [60, 72) and straddles words 0 and 1.
  BitArray a(32, 12);
  a.set(4, 0xABC);
  a.set(5, 0xDEF);
  a.set(6, 0x123);
  CHECK(a.get(4) == 0xABC);
  CHECK(a.get(5) == 0xDEF);
  CHECK(a.get(6) == 0x123);
}

TEST_CASE("byte serialization is little-endian lsb-first") {
  // Three 12-bit values: 0x321, 0x654, 0x987. Bitstream low to high:
  // 0x321 | 0x654 << 12 | 0x987 << 24 = 0x987654321 over 36 bits -> 5 bytes.
  BitArray a(3, 12);
  a.set(0, 0x321);
  a.set(1, 0x654);
  a.set(2, 0x987);
  auto bytes = a.to_bytes();
  REQUIRE(bytes.size() == 5);
  CHECK(bytes[0] == 0x21);
  CHECK(bytes[1] == 0x43);
  CHECK(bytes[2] == 0x65);
  CHECK(bytes[3] == 0x87);
  CHECK(bytes[4] == 0x09);

  auto back = BitArray::from_bytes(bytes.data(), 3, 12);
  CHECK(back == a);
}

TEST_CASE("scalar io helpers") {
  std::vector<uint8_t> out;
  put_u16(out, 0x1234);
  put_u32(out, 0xdeadbeef);
  CHECK(out == std::vector<uint8_t>{0x34, 0x12, 0xef, 0xbe, 0xad, 0xde});
  CHECK(get_u16(out.data()) == 0x1234);
  CHECK(get_u32(out.data() + 2) == 0xdeadbeef);
}
