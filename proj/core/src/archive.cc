// Copyright 2026 The foc Authors. All Rights Reserved.
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

#include "foc/archive.h"

#include <utility>

#include "foc/binary_io.h"

namespace foc {

void Archive::put_text(std::string name, std::string text) {
  if (has(name)) throw PreconditionError("duplicate archive section '" + name + "'");
  sections_.push_back({std::move(name), false, std::move(text), {}});
}

void Archive::put_tensor(std::string name, Matrix tensor) {
  if (has(name)) throw PreconditionError("duplicate archive section '" + name + "'");
  sections_.push_back({std::move(name), true, {}, std::move(tensor)});
}

void Archive::put_tensor(std::string name, const Vector& v) {
  put_tensor(std::move(name), Matrix(v.transpose()));
}

bool Archive::has(std::string_view name) const {
  for (const auto& s : sections_)
    if (s.name == name) return true;
  return false;
}

const Archive::Section& Archive::find(std::string_view name) const {
  for (const auto& s : sections_)
    if (s.name == name) return s;
  throw IoError("archive has no section '" + std::string(name) + "'");
}

const std::string& Archive::text(std::string_view name) const {
  const Section& s = find(name);
  if (s.is_tensor) throw IoError("section '" + s.name + "' is not text");
  return s.text;
}

const Matrix& Archive::tensor(std::string_view name) const {
  const Section& s = find(name);
  if (!s.is_tensor) throw IoError("section '" + s.name + "' is not a tensor");
  return s.tensor;
}

Vector Archive::vector(std::string_view name) const {
  const Matrix& m = tensor(name);
  if (m.rows() != 1) throw IoError("section '" + std::string(name) + "' is not a vector");
  return m.row(0).transpose();
}

std::vector<std::string> Archive::names() const {
  std::vector<std::string> out;
  for (const auto& s : sections_) out.push_back(s.name);
  return out;
}

std::string Archive::serialize(std::string_view magic) const {
  BinaryWriter w;
  w.raw(magic);
  w.u32(kVersion);
  w.u32(static_cast<uint32_t>(sections_.size()));
  for (const auto& s : sections_) {
    w.str(s.name);
    w.u8(s.is_tensor ? 1 : 0);
    if (!s.is_tensor) {
      w.long_str(s.text);
      continue;
    }
    w.u64(static_cast<uint64_t>(s.tensor.rows()));
    w.u64(static_cast<uint64_t>(s.tensor.cols()));
    for (Eigen::Index i = 0; i < s.tensor.size(); ++i) w.f64(s.tensor.data()[i]);
  }
  return w.take();
}

Archive Archive::parse(std::string_view bytes, std::string_view magic) {
  BinaryReader r(bytes);
  if (r.raw(magic.size()) != magic) throw IoError("not a " + std::string(magic) + " file");
  if (const uint32_t v = r.u32(); v != kVersion)
    throw IoError("unsupported container version " + std::to_string(v));
  const uint32_t count = r.u32();
  Archive a;
  for (uint32_t k = 0; k < count; ++k) {
    std::string name = r.str();
    const uint8_t kind = r.u8();
    if (kind == 0) {
      a.put_text(std::move(name), r.long_str());
    } else if (kind == 1) {
      const uint64_t rows = r.u64(), cols = r.u64();
      if (cols != 0 && rows > (bytes.size() / 8) / cols) throw IoError("tensor larger than file");
      Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = r.f64();
      a.put_tensor(std::move(name), std::move(m));
    } else {
      throw IoError("unknown section kind " + std::to_string(kind));
    }
  }
  if (!r.done()) throw IoError("trailing bytes after last section");
  return a;
}

}  // namespace foc
