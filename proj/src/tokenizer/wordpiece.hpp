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

#ifndef LACUNA_TOKENIZER_WORDPIECE_HPP_
#define LACUNA_TOKENIZER_WORDPIECE_HPP_

#include <cstdint>
#include <span>

#include "corpus/document.hpp"
#include "tokenizer/vocabulary.hpp"

namespace lacuna::tokenizer {

// Size of the vocabulary before any merge: specials, both delimiters, every
// sign-initial character and every "##"-prefixed sign-internal character.
std::size_t base_vocabulary_size(std::span<const corpus::Document> corpus);

// Learns a WordPiece vocabulary over the signs of `corpus`.
//
// Training units are signs (delimiters never merge). Each iteration merges
// the adjacent pair with the highest likelihood gain
//   count(pair) / (count(left) * count(right)),
// compared exactly in integer arithmetic; ties go to the lexicographically
// smallest (left, right). Training stops at `vocab_size` tokens or when no
// pair remains, so the result has min(vocab_size, attainable) tokens.
//
// Token order: specials, "-", ".", initial characters, "##" characters (each
// group byte-sorted), then merged tokens in merge order. `seed` is recorded
// for interface symmetry; training is fully deterministic.
//
// Throws Error(kEmptyCorpus) when the corpus has no signs and
// Error(kInvalidArgument) when vocab_size is below the base size.
Vocabulary train_wordpiece(std::span<const corpus::Document> corpus, std::size_t vocab_size,
                           std::uint64_t seed = 0);

}  // namespace lacuna::tokenizer

#endif  // LACUNA_TOKENIZER_WORDPIECE_HPP_
