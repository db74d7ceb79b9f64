// Copyright 2026 The kgalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KGALIGN_BINARY_IO_HPP
#define KGALIGN_BINARY_IO_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "kgalign/error.hpp"
#include "kgalign/matrix.hpp"

namespace kgalign::binio {

static_assert(std::endian::native == std::endian::little,
              "binary snapshots are little-endian; big-endian hosts are unsupported");

template <typename T>
  requires std::is_trivially_copyable_v<T>
void write(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
  requires std::is_trivially_copyable_v<T>
T read(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw DataError("binary snapshot truncated");
  return value;
}

inline void write_string(std::ostream& out, const std::string& s) {
  write<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in) {
  const auto n = read<std::uint32_t>(in);
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) throw DataError("binary snapshot truncated");
  return s;
}

template <typename T>
  requires std::is_trivially_copyable_v<T>
void write_vector(std::ostream& out, const std::vector<T>& v) {
  write<std::uint64_t>(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
  requires std::is_trivially_copyable_v<T>
std::vector<T> read_vector(std::istream& in) {
  const auto n = read<std::uint64_t>(in);
  std::vector<T> v(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
  if (!in) throw DataError("binary snapshot truncated");
  return v;
}

inline void write_matrix(std::ostream& out, const Matrix& m) {
  write<std::uint64_t>(out, m.rows());
  write<std::uint64_t>(out, m.cols());
  out.write(reinterpret_cast<const char*>(m.data().data()),
            static_cast<std::streamsize>(m.data().size() * sizeof(double)));
}

inline Matrix read_matrix(std::istream& in) {
  const auto rows = read<std::uint64_t>(in);
  const auto cols = read<std::uint64_t>(in);
  Matrix m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data().data()),
          static_cast<std::streamsize>(m.data().size() * sizeof(double)));
  if (!in) throw DataError("binary snapshot truncated");
  return m;
}

/// Every snapshot starts with an 8-byte magic followed by a version byte.
inline void write_header(std::ostream& out, const std::array<char, 8>& magic,
                         std::uint8_t version) {
  out.write(magic.data(), magic.size());
  write<std::uint8_t>(out, version);
}

inline void expect_header(std::istream& in, const std::array<char, 8>& magic,
                          std::uint8_t version, const char* what) {
  std::array<char, 8> got{};
  in.read(got.data(), got.size());
  if (!in || got != magic) throw DataError(std::string("not a ") + what + " file (bad magic)");
  const auto v = read<std::uint8_t>(in);
  if (v != version) {
    throw DataError(std::string("unsupported ") + what + " version " + std::to_string(v));
  }
}

}  // namespace kgalign::binio

#endif  // KGALIGN_BINARY_IO_HPP
