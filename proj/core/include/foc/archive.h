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

#ifndef FOC_ARCHIVE_H_
#define FOC_ARCHIVE_H_

#include <string>
#include <string_view>
#include <vector>

#include "foc/common.h"

namespace foc {

// Named sections in a versioned binary container.
//
// Layout (all integers little-endian):
//   magic[8] | u32 version | u32 section count | sections...
//   section: u32 name length | name | u8 kind | payload
//   kind 0 (text):   u64 length | bytes
//   kind 1 (tensor): u64 rows | u64 cols | rows*cols f64, row-major
//
// Sections keep insertion order, so equal contents serialize to equal bytes.
class Archive {
 public:
  static constexpr uint32_t kVersion = 1;

  void put_text(std::string name, std::string text);
  void put_tensor(std::string name, Matrix tensor);
  void put_tensor(std::string name, const Vector& v);  // stored as 1 x n

  bool has(std::string_view name) const;
  // Missing sections and kind mismatches throw IoError.
  const std::string& text(std::string_view name) const;
  const Matrix& tensor(std::string_view name) const;
  Vector vector(std::string_view name) const;
  std::vector<std::string> names() const;

  std::string serialize(std::string_view magic) const;
  static Archive parse(std::string_view bytes, std::string_view magic);

 private:
  struct Section {
    std::string name;
    bool is_tensor = false;
    std::string text;
    Matrix tensor;
  };
  const Section& find(std::string_view name) const;

  std::vector<Section> sections_;
};

}  // namespace foc

#endif  // FOC_ARCHIVE_H_
