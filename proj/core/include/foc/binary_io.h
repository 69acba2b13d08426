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

#ifndef FOC_BINARY_IO_H_
#define FOC_BINARY_IO_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "foc/common.h"

namespace foc {

// Little-endian encoding independent of the host byte order.
class BinaryWriter {
 public:
  void u8(uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(uint32_t v);
  void u64(uint64_t v);
  void f64(double v);
  void raw(std::string_view bytes) { out_.append(bytes); }
  // u32 length followed by the bytes.
  void str(std::string_view s);
  void long_str(std::string_view s);  // u64 length

  const std::string& bytes() const { return out_; }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

// Reads from a borrowed buffer; throws IoError on truncated input.
class BinaryReader {
 public:
  explicit BinaryReader(std::string_view in) : in_(in) {}

  uint8_t u8();
  uint32_t u32();
  uint64_t u64();
  double f64();
  std::string_view raw(size_t n);
  std::string str();
  std::string long_str();
  bool done() const { return pos_ == in_.size(); }

 private:
  std::string_view in_;
  size_t pos_ = 0;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace foc

#endif  // FOC_BINARY_IO_H_
