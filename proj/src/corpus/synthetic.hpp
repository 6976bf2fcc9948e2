/*
 * Copyright 2026 The Lacuna Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LACUNA_CORPUS_SYNTHETIC_HPP_
#define LACUNA_CORPUS_SYNTHETIC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "corpus/stats.hpp"

namespace lacuna::corpus {

// A deterministic cyclic language over 20 distinct signs. Every document is a
// window of the same 21-slot sentence, repeated, starting at a word boundary:
//
//   a-bat LUGAL a-na aš-šur qi-bi-ma um-ša ru-lu ki.ti ia DINGIR i-li-tu
//
// Every sign is fully determined by its neighbours, which makes the language
// a memorization benchmark for the whole pipeline.
struct SyntheticOptions {
  std::size_t n_docs = 400;
  std::size_t min_signs = 60;
  std::size_t max_signs = 110;
  std::uint64_t seed = 1;
};

std::vector<RawRecord> synthetic_corpus(const SyntheticOptions& options);

// The one-cycle sentence, normalized.
std::string synthetic_sentence();

void write_raw_records(const std::string& path, const std::vector<RawRecord>& rows);

}  // namespace lacuna::corpus

#endif  // LACUNA_CORPUS_SYNTHETIC_HPP_
