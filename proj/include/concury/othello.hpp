#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "concury/bits.hpp"
#include "concury/hash.hpp"

namespace concury {

/// Thrown when construction cannot find an acyclic placement within the
/// retry cap: a pathological hash family or duplicate keys.
class OthelloBuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The lookup half of an Othello: two bit-packed arrays of l-bit values plus
/// the seed pair. Lookup of any key is A[h_a(k)] XOR B[h_b(k)]; keys present
/// at construction get their stored value, everything else gets an arbitrary
/// but deterministic value.
struct Othello {
  unsigned l = 0;
  uint32_t m = 0;  // m_a == m_b, power of two
  HashSeedPair seeds;
  BitArray a, b;

  uint32_t pos_a(const void* key, size_t len) const {
    return hash32(key, len, seeds.seed_a) & (m - 1);
  }
  uint32_t pos_b(const void* key, size_t len) const {
    return hash32(key, len, seeds.seed_b) & (m - 1);
  }

  uint64_t lookup(const void* key, size_t len) const {
    return a.get(pos_a(key, len)) ^ b.get(pos_b(key, len));
  }

  template <class Key>
  uint64_t lookup(const Key& key) const {
    static_assert(std::is_trivially_copyable_v<Key>);
    return lookup(&key, sizeof(Key));
  }

  /// Array payload only, m_a*l + m_b*l bits.
  uint64_t payload_bits() const { return 2 * uint64_t(m) * l; }

  /// Little-endian snapshot: magic "OTHL", version u8, l u8, log2(m_a) u8,
  /// log2(m_b) u8, seed_a u32, seed_b u32, bit-packed A then B (each padded
  /// to a byte boundary).
  std::vector<uint8_t> serialize() const;
  static Othello deserialize(const uint8_t* data, size_t len);

  friend bool operator==(const Othello&, const Othello&) = default;
};

/// Control-plane Othello over a key set: the lookup arrays plus the acyclic
/// bipartite graph that constructed them, supporting O(1) expected add,
/// remove and value change. Mutations rebuild with fresh seeds whenever an
/// edge placement would close a cycle, and double m when the load bound
/// n <= 0.75m would be violated.
///
/// Lookups are safe from concurrent readers; mutations require exclusive
/// access (callers serialize writers).
template <class Key>
class OthelloKv {
 public:
  static constexpr int kRetryCap = 100;
  static constexpr uint32_t kNoEdge = UINT32_MAX;

  explicit OthelloKv(unsigned value_width, uint32_t initial_m = 8,
                     uint64_t rng_seed = 1)
      : rng_(rng_seed) {
    assert(value_width >= 1 && value_width <= 32);
    init_arrays(value_width, std::max<uint32_t>(4, std::bit_ceil(initial_m)));
    o_.seeds = HashSeedPair{uint32_t(rng_()), uint32_t(rng_())};
    random_fill();
  }

  /// Build over an initial pair set (keys distinct). m grows as needed so
  /// that |pairs| <= 0.75m. When `first_seeds` is given, the first placement
  /// attempt uses them (snapshot restore reproduces the snapshotted graph).
  OthelloKv(std::span<const std::pair<Key, uint64_t>> pairs,
            unsigned value_width, uint32_t initial_m = 8, uint64_t rng_seed = 1,
            const HashSeedPair* first_seeds = nullptr)
      : OthelloKv(value_width, initial_m, rng_seed) {
    keys_.reserve(pairs.size());
    values_.reserve(pairs.size());
    for (const auto& [k, v] : pairs) {
      keys_.push_back(k);
      values_.push_back(uint32_t(v));
    }
    pos_a_.resize(keys_.size());
    pos_b_.resize(keys_.size());
    next_a_.resize(keys_.size());
    next_b_.resize(keys_.size());
    while (size() > load_limit(o_.m)) grow_m();
    if (first_seeds) o_.seeds = *first_seeds;
    rebuild(/*fresh_seeds=*/false);
  }

  OthelloKv(const std::vector<std::pair<Key, uint64_t>>& pairs,
            unsigned value_width, uint32_t initial_m = 8, uint64_t rng_seed = 1)
      : OthelloKv(std::span<const std::pair<Key, uint64_t>>(pairs),
                  value_width, initial_m, rng_seed) {}

  uint64_t lookup(const Key& key) const { return o_.lookup(key); }

  bool contains(const Key& key) const {
    return find_edge(key) != kNoEdge;
  }

  enum class AddOutcome { added, rebuilt };

  /// Adds a new key. Only the connected component touching the new edge is
  /// re-valued unless a cycle or the load bound forces a rebuild.
  AddOutcome add(const Key& key, uint64_t value) {
    if (contains(key)) throw std::invalid_argument("othello: duplicate key");
    push_edge(key, uint32_t(value));
    if (size() > load_limit(o_.m)) {
      grow_m();
      rebuild(/*fresh_seeds=*/false);
      return AddOutcome::rebuilt;
    }
    uint32_t e = uint32_t(size() - 1);
    hash_edge(e);
    uint32_t ua = pos_a_[e];
    uint32_t vb = o_.m + pos_b_[e];
    // One DFS from the B endpoint both detects the would-be cycle and
    // collects the component to re-value.
    scratch_.clear();
    bool reaches = collect_component(vb, ua, kNoEdge, &scratch_);
    if (reaches) {
      rebuild(/*fresh_seeds=*/true);
      return AddOutcome::rebuilt;
    }
    uint64_t delta = o_.a.get(ua) ^ o_.b.get(pos_b_[e]) ^ (value & value_mask());
    if (delta != 0) xor_vertices(scratch_, delta);
    link_edge(e);
    return AddOutcome::added;
  }

  void remove(const Key& key) {
    uint32_t e = find_edge(key);
    if (e == kNoEdge) throw std::invalid_argument("othello: missing key");
    unlink_edge(e);
    uint32_t last = uint32_t(size() - 1);
    if (e != last) {
      unlink_edge(last);
      keys_[e] = keys_[last];
      values_[e] = values_[last];
      pos_a_[e] = pos_a_[last];
      pos_b_[e] = pos_b_[last];
      link_edge(e);
    }
    pop_edge();
  }

  /// Re-values the component containing the key's edge so the key maps to
  /// `value` and every other key keeps its value. Arrays outside that
  /// component are untouched.
  void set_value(const Key& key, uint64_t value) {
    uint32_t e = find_edge(key);
    if (e == kNoEdge) throw std::invalid_argument("othello: missing key");
    values_[e] = uint32_t(value);
    uint64_t delta = o_.lookup(key) ^ (value & value_mask());
    if (delta == 0) return;
    // XOR the subtree hanging off the B endpoint, not crossing edge e; the
    // graph is acyclic so only edge e changes value.
    scratch_.clear();
    collect_component(o_.m + pos_b_[e], kNoEdge, e, &scratch_);
    xor_vertices(scratch_, delta);
  }

  size_t size() const { return keys_.size(); }
  uint32_t m() const { return o_.m; }
  unsigned value_width() const { return o_.l; }
  uint64_t rebuild_count() const { return rebuilds_; }
  const Othello& structure() const { return o_; }

  /// Produces a fresh lookup structure over the same graph and seeds with
  /// every key's value mapped through `value_map` at width `new_width`: one
  /// value-assignment pass, no re-hashing, no cycle risk.
  Othello remap_structure(unsigned new_width,
                          const std::function<uint64_t(uint64_t)>& value_map) {
    Othello out;
    out.l = new_width;
    out.m = o_.m;
    out.seeds = o_.seeds;
    out.a = BitArray(out.m, new_width);
    out.b = BitArray(out.m, new_width);
    for (uint32_t i = 0; i < out.m; ++i) {
      out.a.set(i, rng_() & ((uint64_t(1) << new_width) - 1));
      out.b.set(i, rng_() & ((uint64_t(1) << new_width) - 1));
    }
    std::vector<uint32_t> mapped(values_.size());
    for (size_t e = 0; e < values_.size(); ++e) {
      mapped[e] = uint32_t(value_map(values_[e]));
    }
    assign_all(out, mapped);
    return out;
  }

  /// Test support: true iff the stored graph has no cycle.
  bool is_acyclic() const {
    std::vector<uint32_t> parent(2 * size_t(o_.m));
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = uint32_t(i);
    auto find = [&](uint32_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (size_t e = 0; e < size(); ++e) {
      uint32_t ra = find(pos_a_[e]);
      uint32_t rb = find(o_.m + pos_b_[e]);
      if (ra == rb) return false;
      parent[ra] = rb;
    }
    return true;
  }

  template <class F>
  void for_each(F&& f) const {
    for (size_t e = 0; e < size(); ++e) f(keys_[e], uint64_t(values_[e]));
  }

 private:
  static size_t load_limit(uint32_t m) { return size_t(0.75 * m); }
  uint64_t value_mask() const { return (uint64_t(1) << o_.l) - 1; }

  void init_arrays(unsigned width, uint32_t m) {
    o_.l = width;
    o_.m = m;
    o_.a = BitArray(m, width);
    o_.b = BitArray(m, width);
    head_a_.assign(m, kNoEdge);
    head_b_.assign(m, kNoEdge);
    mark_.assign(2 * size_t(m), 0);
    stamp_ = 0;
  }

  void random_fill() {
    for (uint32_t i = 0; i < o_.m; ++i) {
      o_.a.set(i, rng_() & value_mask());
      o_.b.set(i, rng_() & value_mask());
    }
  }

  void push_edge(const Key& key, uint32_t value) {
    keys_.push_back(key);
    values_.push_back(value);
    pos_a_.push_back(0);
    pos_b_.push_back(0);
    next_a_.push_back(kNoEdge);
    next_b_.push_back(kNoEdge);
  }

  void pop_edge() {
    keys_.pop_back();
    values_.pop_back();
    pos_a_.pop_back();
    pos_b_.pop_back();
    next_a_.pop_back();
    next_b_.pop_back();
  }

  void hash_edge(uint32_t e) {
    pos_a_[e] = hash32(&keys_[e], sizeof(Key), o_.seeds.seed_a) & (o_.m - 1);
    pos_b_[e] = hash32(&keys_[e], sizeof(Key), o_.seeds.seed_b) & (o_.m - 1);
  }

  void link_edge(uint32_t e) {
    next_a_[e] = head_a_[pos_a_[e]];
    head_a_[pos_a_[e]] = e;
    next_b_[e] = head_b_[pos_b_[e]];
    head_b_[pos_b_[e]] = e;
  }

  void unlink_edge(uint32_t e) {
    auto drop = [](std::vector<uint32_t>& head, std::vector<uint32_t>& next,
                   uint32_t slot, uint32_t edge) {
      uint32_t* p = &head[slot];
      while (*p != edge) p = &next[*p];
      *p = next[edge];
    };
    drop(head_a_, next_a_, pos_a_[e], e);
    drop(head_b_, next_b_, pos_b_[e], e);
  }

  uint32_t find_edge(const Key& key) const {
    uint32_t slot = hash32(&key, sizeof(Key), o_.seeds.seed_a) & (o_.m - 1);
    for (uint32_t e = head_a_[slot]; e != kNoEdge; e = next_a_[e]) {
      if (keys_[e] == key) return e;
    }
    return kNoEdge;
  }

  /// DFS over the component containing `start`. Returns true as soon as
  /// `target` is reached (cycle probe); never traverses `banned_edge`.
  /// Visited vertex ids (A side: [0,m), B side: [m,2m)) are appended to
  /// `out` when provided.
  void bump_stamp() const {
    if (++stamp_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      stamp_ = 1;
    }
  }

  bool collect_component(uint32_t start, uint32_t target, uint32_t banned_edge,
                         std::vector<uint32_t>* out) const {
    bump_stamp();
    dfs_.clear();
    dfs_.push_back(start);
    mark_[start] = stamp_;
    while (!dfs_.empty()) {
      uint32_t v = dfs_.back();
      dfs_.pop_back();
      if (out) out->push_back(v);
      bool a_side = v < o_.m;
      uint32_t e = a_side ? head_a_[v] : head_b_[v - o_.m];
      const std::vector<uint32_t>& next = a_side ? next_a_ : next_b_;
      for (; e != kNoEdge; e = next[e]) {
        if (e == banned_edge) continue;
        uint32_t other = a_side ? o_.m + pos_b_[e] : pos_a_[e];
        if (other == target) return true;
        if (mark_[other] != stamp_) {
          mark_[other] = stamp_;
          dfs_.push_back(other);
        }
      }
    }
    return false;
  }

  void xor_vertices(const std::vector<uint32_t>& vertices, uint64_t delta) {
    for (uint32_t v : vertices) {
      if (v < o_.m) {
        o_.a.set(v, o_.a.get(v) ^ delta);
      } else {
        o_.b.set(v - o_.m, o_.b.get(v - o_.m) ^ delta);
      }
    }
  }

  void grow_m() {
    init_arrays(o_.l, o_.m * 2);
  }

  /// Re-places every edge, retrying with fresh seeds on any cycle, then
  /// random-fills the arrays and assigns all values. The first attempt
  /// keeps the current seeds (used after growth, where only the index mask
  /// changed).
  void rebuild(bool fresh_seeds) {
    for (int attempt = 0; attempt < kRetryCap; ++attempt) {
      if (fresh_seeds || attempt > 0) {
        o_.seeds = HashSeedPair{uint32_t(rng_()), uint32_t(rng_())};
        ++rebuilds_;
      }
      if (try_place()) {
        random_fill();
        assign_all(o_, values_);
        return;
      }
      fresh_seeds = true;
    }
    throw OthelloBuildError(
        "othello: no acyclic placement within retry cap (bad hash family or "
        "duplicate keys)");
  }

  /// Hash all edges and link them, checking acyclicity with union-find.
  bool try_place() {
    head_a_.assign(o_.m, kNoEdge);
    head_b_.assign(o_.m, kNoEdge);
    uf_.resize(2 * size_t(o_.m));
    for (size_t i = 0; i < uf_.size(); ++i) uf_[i] = uint32_t(i);
    auto find = [&](uint32_t x) {
      while (uf_[x] != x) x = uf_[x] = uf_[uf_[x]];
      return x;
    };
    for (uint32_t e = 0; e < size(); ++e) {
      hash_edge(e);
      uint32_t ra = find(pos_a_[e]);
      uint32_t rb = find(o_.m + pos_b_[e]);
      if (ra == rb) return false;
      uf_[ra] = rb;
      link_edge(e);
    }
    return true;
  }

  /// One pass of value assignment over the whole graph: every component is
  /// rooted at some vertex keeping its (random) fill, and values propagate
  /// along edges by XOR.
  void assign_all(Othello& target, const std::vector<uint32_t>& edge_values) {
    bump_stamp();
    auto value_of = [&](uint32_t v) {
      return v < target.m ? target.a.get(v) : target.b.get(v - target.m);
    };
    auto set_of = [&](uint32_t v, uint64_t x) {
      if (v < target.m) {
        target.a.set(v, x);
      } else {
        target.b.set(v - target.m, x);
      }
    };
    uint64_t mask = (uint64_t(1) << target.l) - 1;
    for (uint32_t root = 0; root < 2 * target.m; ++root) {
      bool a_side = root < target.m;
      if ((a_side ? head_a_[root] : head_b_[root - target.m]) == kNoEdge) {
        continue;
      }
      if (mark_[root] == stamp_) continue;
      mark_[root] = stamp_;
      dfs_.clear();
      dfs_.push_back(root);
      while (!dfs_.empty()) {
        uint32_t v = dfs_.back();
        dfs_.pop_back();
        bool va = v < target.m;
        uint32_t e = va ? head_a_[v] : head_b_[v - target.m];
        const std::vector<uint32_t>& next = va ? next_a_ : next_b_;
        for (; e != kNoEdge; e = next[e]) {
          uint32_t other = va ? target.m + pos_b_[e] : pos_a_[e];
          if (mark_[other] == stamp_) continue;
          mark_[other] = stamp_;
          set_of(other, value_of(v) ^ (edge_values[e] & mask));
          dfs_.push_back(other);
        }
      }
    }
  }

  Othello o_;
  std::vector<Key> keys_;
  std::vector<uint32_t> values_;
  std::vector<uint32_t> pos_a_, pos_b_;    // cached hash positions per edge
  std::vector<uint32_t> next_a_, next_b_;  // adjacency chains per edge
  std::vector<uint32_t> head_a_, head_b_;  // adjacency heads per vertex
  uint64_t rebuilds_ = 0;
  std::mt19937_64 rng_;

  // DFS scratch, reused across operations; stamps avoid O(m) clears.
  mutable std::vector<uint32_t> mark_;
  mutable uint32_t stamp_ = 0;
  mutable std::vector<uint32_t> dfs_;
  std::vector<uint32_t> scratch_;
  std::vector<uint32_t> uf_;
};

}  // namespace concury
