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

#include "kgalign/checkpoint.hpp"

#include <fstream>
#include <tuple>

#include "kgalign/binary_io.hpp"

namespace kgalign {
namespace fs = std::filesystem;
namespace {

constexpr std::array<char, 8> kTrainingMagic{'K', 'G', 'A', 'L', 'C', 'K', 'P', 'T'};
constexpr std::array<char, 8> kAttributeMagic{'K', 'G', 'A', 'L', 'A', 'E', 'C', 'K'};
constexpr std::uint8_t kVersion = 1;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read checkpoint " + path.string());
  return in;
}

void write_slot_map(std::ostream& out, const SlotMap& m) {
  binio::write_vector(out, m.kb1);
  binio::write_vector(out, m.kb2);
  binio::write<std::uint64_t>(out, m.slots);
  binio::write<std::uint64_t>(out, m.shared);
}

SlotMap read_slot_map(std::istream& in) {
  SlotMap m;
  m.kb1 = binio::read_vector<Slot>(in);
  m.kb2 = binio::read_vector<Slot>(in);
  m.slots = binio::read<std::uint64_t>(in);
  m.shared = binio::read<std::uint64_t>(in);
  for (const auto* v : {&m.kb1, &m.kb2}) {
    for (const Slot s : *v) {
      if (s >= m.slots) throw DataError("checkpoint: slot out of range");
    }
  }
  return m;
}

void write_sparse(std::ostream& out, const SparseMatrix& s) {
  binio::write<std::uint64_t>(out, s.rows());
  binio::write<std::uint64_t>(out, s.cols());
  const auto coo = s.to_coo();
  binio::write<std::uint64_t>(out, coo.size());
  for (const auto& [r, c, v] : coo) {
    binio::write(out, r);
    binio::write(out, c);
    binio::write(out, v);
  }
}

SparseMatrix read_sparse(std::istream& in) {
  const auto rows = binio::read<std::uint64_t>(in);
  const auto cols = binio::read<std::uint64_t>(in);
  const auto n = binio::read<std::uint64_t>(in);
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> coo;
  coo.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto r = binio::read<std::uint32_t>(in);
    const auto c = binio::read<std::uint32_t>(in);
    const auto v = binio::read<double>(in);
    if (r >= rows || c >= cols) throw DataError("checkpoint: sparse entry out of range");
    coo.emplace_back(r, c, v);
  }
  return SparseMatrix::from_coo(rows, cols, coo);
}

}  // namespace

void save_checkpoint(const fs::path& path, const TrainingCheckpoint& ckpt) {
  auto out = open_out(path);
  binio::write_header(out, kTrainingMagic, kVersion);
  binio::write_string(out, ckpt.config_json);
  binio::write<std::uint64_t>(out, ckpt.epoch);
  write_slot_map(out, ckpt.index.entities);
  write_slot_map(out, ckpt.index.relationships);
  write_slot_map(out, ckpt.index.attributes);
  binio::write_matrix(out, ckpt.space.entities);
  binio::write_matrix(out, ckpt.space.relations);
  binio::write_matrix(out, ckpt.space.attributes);
  binio::write_vector(out, ckpt.seeds);
  binio::write_vector(out, ckpt.validation);
  binio::write_vector(out, ckpt.test);
  binio::write<std::uint8_t>(out, ckpt.sims ? 1 : 0);
  if (ckpt.sims) {
    const auto& s = *ckpt.sims;
    binio::write(out, s.tau_cross);
    binio::write(out, s.tau_inner);
    binio::write_vector(out, s.mask1);
    binio::write_vector(out, s.mask2);
    write_sparse(out, s.cross);
    write_sparse(out, s.inner1);
    write_sparse(out, s.inner2);
  }
  if (!out) throw DataError("failed writing checkpoint " + path.string());
}

TrainingCheckpoint load_training_checkpoint(const fs::path& path) {
  auto in = open_in(path);
  binio::expect_header(in, kTrainingMagic, kVersion, "training checkpoint");
  TrainingCheckpoint c;
  c.config_json = binio::read_string(in);
  c.epoch = binio::read<std::uint64_t>(in);
  c.index.entities = read_slot_map(in);
  c.index.relationships = read_slot_map(in);
  c.index.attributes = read_slot_map(in);
  c.space.entities = binio::read_matrix(in);
  c.space.relations = binio::read_matrix(in);
  c.space.attributes = binio::read_matrix(in);
  if (c.space.entities.rows() != c.index.entities.slots) {
    throw DataError("checkpoint: entity table does not match the slot map");
  }
  c.seeds = binio::read_vector<EntityPair>(in);
  c.validation = binio::read_vector<EntityPair>(in);
  c.test = binio::read_vector<EntityPair>(in);
  for (const auto* v : {&c.seeds, &c.validation, &c.test}) {
    for (const auto& p : *v) {
      if (p.e1 >= c.index.entities.kb1.size() || p.e2 >= c.index.entities.kb2.size()) {
        throw DataError("checkpoint: entity pair out of range");
      }
    }
  }
  if (binio::read<std::uint8_t>(in) != 0) {
    SimilarityMatrices s;
    s.tau_cross = binio::read<double>(in);
    s.tau_inner = binio::read<double>(in);
    s.mask1 = binio::read_vector<char>(in);
    s.mask2 = binio::read_vector<char>(in);
    s.cross = read_sparse(in);
    s.inner1 = read_sparse(in);
    s.inner2 = read_sparse(in);
    c.sims = std::move(s);
  }
  return c;
}

void save_checkpoint(const fs::path& path, const AttributeCheckpoint& ckpt) {
  auto out = open_out(path);
  binio::write_header(out, kAttributeMagic, kVersion);
  binio::write_string(out, ckpt.config_json);
  binio::write<std::uint64_t>(out, ckpt.epoch);
  write_slot_map(out, ckpt.attributes);
  binio::write_matrix(out, ckpt.vectors);
  binio::write_vector(out, ckpt.losses);
  if (!out) throw DataError("failed writing checkpoint " + path.string());
}

AttributeCheckpoint load_attribute_checkpoint(const fs::path& path) {
  auto in = open_in(path);
  binio::expect_header(in, kAttributeMagic, kVersion, "attribute checkpoint");
  AttributeCheckpoint c;
  c.config_json = binio::read_string(in);
  c.epoch = binio::read<std::uint64_t>(in);
  c.attributes = read_slot_map(in);
  c.vectors = binio::read_matrix(in);
  if (c.vectors.rows() != c.attributes.slots) {
    throw DataError("checkpoint: attribute table does not match the slot map");
  }
  c.losses = binio::read_vector<double>(in);
  return c;
}

}  // namespace kgalign
