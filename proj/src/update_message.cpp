#include "concury/update_message.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace concury {

namespace {
constexpr char kMagic[4] = {'C', 'N', 'C', 'U'};
constexpr uint8_t kVersion = 1;
}  // namespace

std::vector<uint8_t> UpdateMessage::encode() const {
  std::vector<uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u8(out, kVersion);
  put_u8(out, vip_index);
  put_u8(out, uint8_t(ld));
  put_u8(out, uint8_t(std::countr_zero(m)));
  put_u32(out, seeds.seed_a);
  put_u32(out, seeds.seed_b);
  auto pa = a.to_bytes();
  auto pb = b.to_bytes();
  out.insert(out.end(), pa.begin(), pa.end());
  out.insert(out.end(), pb.begin(), pb.end());
  for (uint16_t d : da_row) put_u16(out, d);
  return out;
}

UpdateMessage UpdateMessage::decode(const uint8_t* data, size_t len) {
  if (len < 16 || std::memcmp(data, kMagic, 4) != 0) {
    throw std::invalid_argument("update: bad magic");
  }
  if (data[4] != kVersion) {
    throw std::invalid_argument("update: unsupported version");
  }
  UpdateMessage msg;
  msg.vip_index = data[5];
  msg.ld = data[6];
  msg.m = uint32_t(1) << data[7];
  msg.seeds.seed_a = get_u32(data + 8);
  msg.seeds.seed_b = get_u32(data + 12);
  if (msg.ld < 1 || msg.ld > 16 || data[7] > 30) {
    throw std::invalid_argument("update: bad sizing");
  }
  size_t side_bytes = (size_t(msg.m) * msg.ld + 7) / 8;
  size_t da_count = size_t(1) << msg.ld;
  size_t need = 16 + 2 * side_bytes + 2 * da_count;
  if (len != need) {
    throw std::invalid_argument("update: payload size mismatch");
  }
  msg.a = BitArray::from_bytes(data + 16, msg.m, msg.ld);
  msg.b = BitArray::from_bytes(data + 16 + side_bytes, msg.m, msg.ld);
  msg.da_row.resize(da_count);
  const uint8_t* p = data + 16 + 2 * side_bytes;
  for (size_t i = 0; i < da_count; ++i) msg.da_row[i] = get_u16(p + 2 * i);
  return msg;
}

UpdateMessage UpdateMessage::make(uint8_t vip_index, const Othello& structure,
                                  std::vector<uint16_t> da_row) {
  if (da_row.size() != size_t(1) << structure.l) {
    throw std::invalid_argument("update: da row size mismatch");
  }
  UpdateMessage msg;
  msg.vip_index = vip_index;
  msg.ld = structure.l;
  msg.m = structure.m;
  msg.seeds = structure.seeds;
  msg.a = structure.a;
  msg.b = structure.b;
  msg.da_row = std::move(da_row);
  return msg;
}

}  // namespace concury
