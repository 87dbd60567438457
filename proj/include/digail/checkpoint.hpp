// Copyright 2026 The digail Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIGAIL_CHECKPOINT_HPP_
#define DIGAIL_CHECKPOINT_HPP_

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "digail/mlp.hpp"

namespace digail {

// Flat little-endian binary checkpoints:
//   "DIGN" | u32 version | u32 n_entries | entries...
// entry:
//   u8 kind | u32 name_len | name bytes | payload
//   kind 0 (string): u32 len | bytes
//   kind 1 (vector): u64 n | f64 * n
//   kind 2 (mlp):    u32 n_sizes | u32 * n_sizes | per layer: f64 weights
//                    (row-major) then f64 biases
// Entries are written strings first, then vectors, then networks, each in
// insertion order, so identical contents produce identical bytes. Gradient
// buffers are not serialized; they come back zeroed.
constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
 private:
  template <class V>
  static int find(const V& items, const std::string& name) {
    for (std::size_t i = 0; i < items.size(); ++i)
      if (items[i].first == name) return static_cast<int>(i);
    return -1;
  }
  template <class V>
  static const typename V::value_type::second_type& get(const V& items,
                                                        const std::string& name,
                                                        const char* kind) {
    const int i = find(items, name);
    if (i < 0)
      throw std::runtime_error(std::string("checkpoint: missing ") + kind + " '" + name + "'");
    return items[i].second;
  }

 public:
  std::vector<std::pair<std::string, std::string>> strs;
  std::vector<std::pair<std::string, Vec>> vecs;
  std::vector<std::pair<std::string, Mlp>> mlps;

  void add_str(const std::string& name, std::string v) {
    strs.emplace_back(name, std::move(v));
  }
  void add_vec(const std::string& name, Vec v) { vecs.emplace_back(name, std::move(v)); }
  void add_mlp(const std::string& name, const Mlp& m) { mlps.emplace_back(name, m); }

  bool has_str(const std::string& name) const { return find(strs, name) >= 0; }
  bool has_vec(const std::string& name) const { return find(vecs, name) >= 0; }
  bool has_mlp(const std::string& name) const { return find(mlps, name) >= 0; }

  const std::string& get_str(const std::string& name) const {
    return get(strs, name, "string");
  }
  const Vec& get_vec(const std::string& name) const { return get(vecs, name, "vector"); }
  const Mlp& get_mlp(const std::string& name) const { return get(mlps, name, "network"); }
};

namespace detail {

inline void put_u32(std::ostream& o, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  o.write(b, 4);
}
inline void put_u64(std::ostream& o, std::uint64_t v) {
  char b[8];
  std::memcpy(b, &v, 8);
  o.write(b, 8);
}
inline void put_f64s(std::ostream& o, const Vec& v) {
  o.write(reinterpret_cast<const char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
}
inline void put_name(std::ostream& o, const std::string& s) {
  put_u32(o, static_cast<std::uint32_t>(s.size()));
  o.write(s.data(), static_cast<std::streamsize>(s.size()));
}

struct Reader {
  std::ifstream in;
  std::string path;

  void read(char* dst, std::size_t n) {
    in.read(dst, static_cast<std::streamsize>(n));
    if (in.gcount() != static_cast<std::streamsize>(n))
      throw std::runtime_error("checkpoint: truncated file: " + path);
  }
  std::uint32_t u32() {
    char b[4];
    read(b, 4);
    std::uint32_t v;
    std::memcpy(&v, b, 4);
    return v;
  }
  std::uint64_t u64() {
    char b[8];
    read(b, 8);
    std::uint64_t v;
    std::memcpy(&v, b, 8);
    return v;
  }
  std::string name() {
    const std::uint32_t n = u32();
    if (n > 1u << 20) throw std::runtime_error("checkpoint: corrupt name length: " + path);
    std::string s(n, '\0');
    read(s.data(), n);
    return s;
  }
  Vec f64s(std::size_t n) {
    Vec v(n);
    read(reinterpret_cast<char*>(v.data()), n * sizeof(double));
    return v;
  }
};

}  // namespace detail

inline void checkpoint_save(const std::string& path, const Checkpoint& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write("DIGN", 4);
  detail::put_u32(out, kCheckpointVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(c.strs.size() + c.vecs.size() + c.mlps.size()));
  for (const auto& [name, s] : c.strs) {
    out.put(static_cast<char>(0));
    detail::put_name(out, name);
    detail::put_name(out, s);
  }
  for (const auto& [name, v] : c.vecs) {
    out.put(static_cast<char>(1));
    detail::put_name(out, name);
    detail::put_u64(out, v.size());
    detail::put_f64s(out, v);
  }
  for (const auto& [name, m] : c.mlps) {
    out.put(static_cast<char>(2));
    detail::put_name(out, name);
    detail::put_u32(out, static_cast<std::uint32_t>(m.sizes.size()));
    for (int s : m.sizes) detail::put_u32(out, static_cast<std::uint32_t>(s));
    for (int l = 0; l < m.n_layers(); ++l) {
      detail::put_f64s(out, m.w[l]);
      detail::put_f64s(out, m.b[l]);
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline Checkpoint checkpoint_load(const std::string& path) {
  detail::Reader r;
  r.path = path;
  r.in.open(path, std::ios::binary);
  if (!r.in) throw std::runtime_error("cannot open: " + path);
  char magic[4];
  r.read(magic, 4);
  if (std::memcmp(magic, "DIGN", 4) != 0)
    throw std::runtime_error("checkpoint: bad magic bytes: " + path);
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    throw std::runtime_error("checkpoint: unsupported version " +
                             std::to_string(version) + ": " + path);
  const std::uint32_t n = r.u32();
  Checkpoint c;
  for (std::uint32_t i = 0; i < n; ++i) {
    char kind;
    r.read(&kind, 1);
    const std::string name = r.name();
    if (kind == 0) {
      c.add_str(name, r.name());
    } else if (kind == 1) {
      const std::uint64_t len = r.u64();
      c.add_vec(name, r.f64s(len));
    } else if (kind == 2) {
      const std::uint32_t ns = r.u32();
      if (ns < 2) throw std::runtime_error("checkpoint: corrupt layer count: " + path);
      std::vector<int> sizes(ns);
      for (auto& s : sizes) s = static_cast<int>(r.u32());
      Mlp m = mlp_make(sizes);
      for (int l = 0; l < m.n_layers(); ++l) {
        m.w[l] = r.f64s(m.w[l].size());
        m.b[l] = r.f64s(m.b[l].size());
      }
      c.mlps.emplace_back(name, std::move(m));
    } else {
      throw std::runtime_error("checkpoint: unknown entry kind: " + path);
    }
  }
  return c;
}

}  // namespace digail

#endif  // DIGAIL_CHECKPOINT_HPP_
