#include "concury/controlplane.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace concury {

namespace {

uint64_t pack_addr(DipAddress d) { return uint64_t(d.addr) << 16 | d.port; }

int hex_val(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::vector<uint32_t> apportion_dcodes(const std::vector<double>& weights,
                                       unsigned ld) {
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) {
    throw std::invalid_argument("partition: all weights are zero");
  }
  const uint32_t dcodes = uint32_t(1) << ld;
  std::vector<uint32_t> counts(weights.size());
  std::vector<std::pair<double, size_t>> fractions(weights.size());
  uint32_t assigned = 0;
  for (size_t j = 0; j < weights.size(); ++j) {
    double share = double(dcodes) * weights[j] / total;
    counts[j] = uint32_t(share);
    fractions[j] = {share - double(counts[j]), j};
    assigned += counts[j];
  }
  // Largest fractional parts win the leftovers; ties to the lowest index.
  std::stable_sort(fractions.begin(), fractions.end(),
                   [](const auto& x, const auto& y) {
                     return x.first > y.first;
                   });
  int64_t leftover = int64_t(dcodes) - int64_t(assigned);
  for (int64_t r = 0; r < leftover; ++r) {
    counts[fractions[size_t(r) % fractions.size()].second] += 1;
  }
  return counts;
}

void HostAgentReport::encode(std::vector<uint8_t>& out) const {
  put_u8(out, uint8_t(kind));
  put_u8(out, vip_index);
  out.insert(out.end(), key.bytes.begin(), key.bytes.end());
  put_u16(out, dip_index);
}

HostAgentReport HostAgentReport::decode(const uint8_t* data) {
  HostAgentReport r;
  r.kind = Kind(data[0]);
  r.vip_index = data[1];
  std::memcpy(r.key.bytes.data(), data + 2, 13);
  r.dip_index = get_u16(data + 15);
  return r;
}

std::string HostAgentReport::to_csv() const {
  static const char* hex = "0123456789abcdef";
  std::string line = kind == Kind::arrival ? "arrival," : "termination,";
  line += std::to_string(unsigned(vip_index));
  line += ',';
  for (uint8_t b : key.bytes) {
    line += hex[b >> 4];
    line += hex[b & 15];
  }
  line += ',';
  line += std::to_string(unsigned(dip_index));
  return line;
}

std::optional<HostAgentReport> HostAgentReport::from_csv(
    const std::string& line) {
  std::istringstream in(line);
  std::string kind, vip, key, dip;
  if (!std::getline(in, kind, ',') || !std::getline(in, vip, ',') ||
      !std::getline(in, key, ',')) {
    return std::nullopt;
  }
  std::getline(in, dip, ',');
  HostAgentReport r;
  if (kind == "arrival") {
    r.kind = Kind::arrival;
  } else if (kind == "termination") {
    r.kind = Kind::termination;
  } else {
    return std::nullopt;
  }
  if (key.size() != 26) return std::nullopt;
  for (size_t i = 0; i < 13; ++i) {
    int hi = hex_val(key[2 * i]);
    int lo = hex_val(key[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    r.key.bytes[i] = uint8_t(hi << 4 | lo);
  }
  try {
    r.vip_index = uint8_t(std::stoul(vip));
    r.dip_index = dip.empty() ? 0 : uint16_t(std::stoul(dip));
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return r;
}

ControlPlane::ControlPlane(const Config& config)
    : vip_prefix_(config.vip_prefix & 0xffffff),
      max_vips_(config.max_vips),
      ld_(config.ld),
      lv_(config.lv),
      min_m_(config.min_m),
      rng_(config.rng_seed) {
  if (max_vips_ < 1 || max_vips_ > 256) {
    throw std::invalid_argument("controlplane: max_vips must be 1..256");
  }
  vips_.reserve(max_vips_);
  for (unsigned i = 0; i < max_vips_; ++i) {
    vips_.emplace_back(config.rng_seed * 1315423911u + i + 1, min_m_);
  }
}

uint16_t ControlPlane::register_dip(DipAddress dip) {
  auto it = dip_lookup_.find(pack_addr(dip));
  if (it != dip_lookup_.end()) return it->second;
  if (dip_registry_.size() >= size_t(1) << lv_) {
    throw std::runtime_error("controlplane: dip table full");
  }
  uint16_t index = uint16_t(dip_registry_.size());
  dip_registry_.push_back(dip);
  dip_lookup_.emplace(pack_addr(dip), index);
  if (dip_sink_) dip_sink_(index, dip);
  return index;
}

uint16_t ControlPlane::dip_index_of(DipAddress dip) const {
  auto it = dip_lookup_.find(pack_addr(dip));
  if (it == dip_lookup_.end()) {
    throw std::invalid_argument("controlplane: unknown dip");
  }
  return it->second;
}

DcodePartition ControlPlane::make_partition(const DipPool& pool) {
  // Runs laid out in DIP-index order so small weight shifts move few dcodes.
  std::vector<std::pair<uint16_t, double>> by_index;
  by_index.reserve(pool.dips.size());
  for (const auto& entry : pool.dips) {
    by_index.emplace_back(register_dip(entry.dip), entry.weight);
  }
  std::sort(by_index.begin(), by_index.end());
  std::vector<double> weights;
  weights.reserve(by_index.size());
  for (const auto& [index, w] : by_index) weights.push_back(w);
  std::vector<uint32_t> counts = apportion_dcodes(weights, ld_);

  DcodePartition part;
  part.mapping.resize(size_t(1) << ld_);
  part.runs.reserve(by_index.size());
  uint32_t next = 0;
  for (size_t j = 0; j < by_index.size(); ++j) {
    DcodePartition::Run run{by_index[j].first, next, counts[j]};
    for (uint32_t d = 0; d < counts[j]; ++d) {
      part.mapping[next + d] = run.dip_index;
    }
    next += counts[j];
    part.runs.push_back(run);
  }
  return part;
}

ControlPlane::Vip& ControlPlane::active_vip(uint8_t vip_index) {
  if (vip_index >= max_vips_ || !vips_[vip_index].active) {
    throw std::invalid_argument("controlplane: vip not active");
  }
  return vips_[vip_index];
}

const ControlPlane::Vip& ControlPlane::active_vip(uint8_t vip_index) const {
  if (vip_index >= max_vips_ || !vips_[vip_index].active) {
    throw std::invalid_argument("controlplane: vip not active");
  }
  return vips_[vip_index];
}

void ControlPlane::add_vip(uint8_t vip_index, const DipPool& pool) {
  if (vip_index >= max_vips_) {
    throw std::invalid_argument("controlplane: vip index out of range");
  }
  if (vips_[vip_index].active) {
    throw std::invalid_argument("controlplane: vip index collision");
  }
  Vip& vip = vips_[vip_index];
  vip.partition = make_partition(pool);
  vip.pool = pool;
  vip.active = true;
  emit_update(vip_index);
}

void ControlPlane::remove_vip(uint8_t vip_index) {
  Vip& vip = active_vip(vip_index);
  vip = Vip(rng_(), min_m_);
  if (vip_removed_sink_) vip_removed_sink_(vip_index);
}

bool ControlPlane::vip_active(uint8_t vip_index) const {
  return vip_index < max_vips_ && vips_[vip_index].active;
}

uint16_t ControlPlane::draw_dcode(const DcodePartition::Run& run) {
  return uint16_t(run.first + rng_() % run.count);
}

bool ControlPlane::on_report(const HostAgentReport& report) {
  if (report.vip_index >= max_vips_ || !vips_[report.vip_index].active) {
    ++reports_rejected_;
    return false;
  }
  Vip& vip = vips_[report.vip_index];
  if (report.kind == HostAgentReport::Kind::termination) {
    vip.map.erase(report.key);  // no-op when already dropped
    return true;
  }
  const DcodePartition::Run* run = vip.partition.run_of(report.dip_index);
  if (run == nullptr || run->count == 0) {
    // Arrival naming a DIP outside the pool (or one that can hold no new
    // states): rejected.
    ++reports_rejected_;
    return false;
  }
  vip.map.insert(report.key, report.dip_index, draw_dcode(*run));
  return true;
}

size_t ControlPlane::ingest_binary(const uint8_t* data, size_t len) {
  size_t accepted = 0;
  for (size_t off = 0; off + HostAgentReport::kWireSize <= len;
       off += HostAgentReport::kWireSize) {
    if (on_report(HostAgentReport::decode(data + off))) ++accepted;
  }
  return accepted;
}

size_t ControlPlane::ingest_csv(std::istream& in) {
  size_t accepted = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto report = HostAgentReport::from_csv(line);
    if (report && on_report(*report)) ++accepted;
  }
  return accepted;
}

void ControlPlane::handle_pool_change(uint8_t vip_index,
                                      const DipPool& new_pool) {
  Vip& vip = active_vip(vip_index);
  DcodePartition next = make_partition(new_pool);

  // Reassign every stored state whose dcode now resolves to a different
  // DIP. States on a DIP that left the pool (or kept no dcodes) are
  // removed; their connections must restart regardless.
  const auto& records = vip.map.records();
  for (size_t i = 0; i < records.size();) {
    const OthelloMap::Record& rec = records[i];
    if (next.mapping[rec.dcode] == rec.dip_index) {
      ++i;
      continue;
    }
    const DcodePartition::Run* run = next.run_of(rec.dip_index);
    if (run != nullptr && run->count > 0) {
      vip.map.set_dcode(i, draw_dcode(*run));
      ++i;
    } else {
      vip.map.erase(rec.key);  // swap-fills slot i; do not advance
      ++states_dropped_;
    }
  }

  vip.partition = std::move(next);
  vip.pool = new_pool;
  emit_update(vip_index);
}

void ControlPlane::emit_update(uint8_t vip_index) {
  Vip& vip = vips_[vip_index];
  Othello structure = vip.map.generate_dataplane(ld_);
  UpdateMessage msg =
      UpdateMessage::make(vip_index, structure, vip.partition.mapping);
  ++updates_emitted_;
  if (update_sink_) update_sink_(msg.encode());
}

const OthelloMap& ControlPlane::map(uint8_t vip_index) const {
  return active_vip(vip_index).map;
}

const DipPool& ControlPlane::pool(uint8_t vip_index) const {
  return active_vip(vip_index).pool;
}

const DcodePartition& ControlPlane::partition(uint8_t vip_index) const {
  return active_vip(vip_index).partition;
}

double ControlPlane::memory_bits() const {
  double bits = 0;
  for (const Vip& vip : vips_) {
    if (vip.active) bits += vip.map.memory_bits(ld_);
  }
  return bits;
}

void connect_local(ControlPlane& cp, DataPlane& dp) {
  cp.set_dip_sink([&dp](uint16_t index, DipAddress dip) {
    dp.set_dip(index, dip);
  });
  cp.set_update_sink([&dp](const std::vector<uint8_t>& bytes) {
    dp.apply_update(UpdateMessage::decode(bytes.data(), bytes.size()));
  });
  cp.set_vip_removed_sink([&dp](uint8_t index) { dp.remove_vip(index); });
}

}  // namespace concury
