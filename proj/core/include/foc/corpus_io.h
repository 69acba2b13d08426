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

#ifndef FOC_CORPUS_IO_H_
#define FOC_CORPUS_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "foc/output_header.h"
#include "foc/record.h"

namespace foc {

struct IngestResult {
  Corpus corpus;
  size_t skipped = 0;
  // One "line N: reason" entry per skipped line.
  std::vector<std::string> diagnostics;
};

// Reads a line-delimited corpus file. Malformed lines and duplicate ids are
// skipped and reported; an unreadable file throws IoError. Blank lines and
// output-header lines are ignored without counting as skipped.
IngestResult ingest(const std::string& path);
IngestResult ingest_stream(std::istream& in, const std::string& source_name);

// Throws PreconditionError with the reason when `j` is not a valid record.
FunctionRecord record_from_json(const nlohmann::json& j);
nlohmann::json record_to_json(const FunctionRecord& record);

void write_corpus(std::ostream& out, const Corpus& corpus,
                  const OutputHeader* header = nullptr);
void write_corpus(const std::string& path, const Corpus& corpus,
                  const OutputHeader* header = nullptr);

}  // namespace foc

#endif  // FOC_CORPUS_IO_H_
