// Copyright 2026 The Folktale Authors.
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

#ifndef FOLKTALE_OPENIE_HPP_
#define FOLKTALE_OPENIE_HPP_

// Open information extraction over chunked sentences: (arg1, rel, arg2)
// triplets where rel matches the verb pattern V | V P | V W* P and the
// arguments are the nearest noun phrase chunks on either side.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "folktale/textpipe.hpp"

namespace folktale {
namespace openie {

using textpipe::Document;

struct ExtractionRecord {
  size_t sentence_index = 0;
  std::string arg1, rel, arg2;
  double confidence = 0.0;
  std::string original_sentence;
  std::string pos_tags;
  std::string chunk_tags;
  // Document token ranges, inclusive.
  size_t arg1_first = 0, arg1_last = 0;
  size_t rel_first = 0, rel_last = 0;
  size_t arg2_first = 0, arg2_last = 0;
};

// Fixed heuristic weights for the confidence score. The original trained
// model is not reproducible; these encode the same qualitative signals.
struct ScoreWeights {
  double bias = 2.0;
  double per_sentence_token = -0.05;  // longer sentences score lower
  double arg1_simple = 0.5;           // arg1 of at most two tokens
  double arg1_proper = 0.5;           // arg1 headed by a proper noun
  double rel_preposition = 0.4;       // relation ends in a preposition
  double arg2_simple = 0.4;           // arg2 of at most four tokens
  double per_gap_token = -0.1;        // tokens between args and relation
  double crossed_relative = -0.3;     // arg1 found across a relative pronoun
};

struct TripletFeatures {
  int sentence_tokens = 0;
  bool arg1_simple = false;
  bool arg1_proper = false;
  bool rel_preposition = false;
  bool arg2_simple = false;
  int gap_tokens = 0;
  bool crossed_relative = false;
};

inline double ScoreConfidence(const TripletFeatures& f,
                              const ScoreWeights& w = {}) {
  double z = w.bias + w.per_sentence_token * f.sentence_tokens +
             (f.arg1_simple ? w.arg1_simple : 0.0) +
             (f.arg1_proper ? w.arg1_proper : 0.0) +
             (f.rel_preposition ? w.rel_preposition : 0.0) +
             (f.arg2_simple ? w.arg2_simple : 0.0) +
             w.per_gap_token * f.gap_tokens +
             (f.crossed_relative ? w.crossed_relative : 0.0);
  return 1.0 / (1.0 + std::exp(-z));
}

namespace detail {

inline bool IsNounPos(const std::string& pos) {
  return pos.rfind("NN", 0) == 0;
}

inline bool IsRelWord(const std::string& pos) {
  // W in the V W* P pattern: nominal, adjectival, adverbial, determiner.
  return IsNounPos(pos) || pos == "JJ" || pos == "JJR" || pos == "JJS" ||
         pos == "RB" || pos == "RBS" || pos == "DT" || pos == "PRP$" ||
         pos == "CD";
}

inline bool IsPrepPos(const std::string& pos) {
  return pos == "IN" || pos == "RP";
}

struct ChunkSpan {
  size_t first, last;
  std::string type;  // "NP", "VP", ...
};

inline std::vector<ChunkSpan> SentenceChunks(const Document& doc,
                                             const textpipe::Sentence& s) {
  std::vector<ChunkSpan> chunks;
  for (size_t i = s.first; i <= s.last; ++i) {
    const std::string& c = doc.tokens[i].chunk;
    if (c.size() < 3 || c[0] == 'O') continue;
    if (c[0] == 'B') {
      chunks.push_back({i, i, c.substr(2)});
    } else if (!chunks.empty() && chunks.back().last == i - 1 &&
               chunks.back().type == c.substr(2)) {
      chunks.back().last = i;
    }
  }
  return chunks;
}

// Relative pronouns and expletives do not serve as arguments.
inline bool IsSkippableNp(const Document& doc, const ChunkSpan& np) {
  if (np.first != np.last) return false;
  const std::string& pos = doc.tokens[np.first].pos;
  return pos == "WP" || pos == "WDT" || pos == "EX";
}

}  // namespace detail

// Emits one record per relation phrase with noun phrases on both sides,
// in sentence order then left to right. Deterministic.
inline std::vector<ExtractionRecord> ExtractTriplets(
    const Document& doc, const ScoreWeights& weights = {}) {
  std::vector<ExtractionRecord> records;
  for (const auto& s : doc.sentences) {
    auto chunks = detail::SentenceChunks(doc, s);
    for (size_t ci = 0; ci < chunks.size(); ++ci) {
      if (chunks[ci].type != "VP") continue;
      size_t rel_first = chunks[ci].first;
      size_t rel_last = chunks[ci].last;
      // Maximal V W* P extension past the verb group.
      size_t j = rel_last + 1;
      while (j <= s.last && detail::IsRelWord(doc.tokens[j].pos)) ++j;
      if (j <= s.last && detail::IsPrepPos(doc.tokens[j].pos)) rel_last = j;

      // arg1: nearest NP to the left, skipping relative pronouns.
      bool crossed_relative = false;
      const detail::ChunkSpan* arg1 = nullptr;
      for (size_t k = ci; k-- > 0;) {
        if (chunks[k].type != "NP") continue;
        if (detail::IsSkippableNp(doc, chunks[k])) {
          crossed_relative = true;
          continue;
        }
        arg1 = &chunks[k];
        break;
      }
      if (!arg1) continue;
      size_t a1_first = arg1->first, a1_last = arg1->last;
      // A trailing proper noun run stands for the whole phrase.
      if (doc.tokens[a1_last].pos.rfind("NNP", 0) == 0) {
        while (a1_first < a1_last &&
               doc.tokens[a1_first].pos.rfind("NNP", 0) != 0)
          ++a1_first;
      }

      // arg2: nearest NP to the right of the relation end.
      const detail::ChunkSpan* arg2 = nullptr;
      for (size_t k = 0; k < chunks.size(); ++k) {
        if (chunks[k].type != "NP" || chunks[k].first <= rel_last) continue;
        if (detail::IsSkippableNp(doc, chunks[k])) continue;
        arg2 = &chunks[k];
        break;
      }
      if (!arg2) continue;
      size_t a2_first = arg2->first, a2_last = arg2->last;
      // Attach trailing "of" phrases: "the dress of a merchant".
      bool extended = true;
      while (extended) {
        extended = false;
        if (a2_last + 1 < s.last &&
            textpipe::lex::Lower(doc.tokens[a2_last + 1].text) == "of") {
          for (const auto& c : chunks) {
            if (c.type == "NP" && c.first == a2_last + 2) {
              a2_last = c.last;
              extended = true;
              break;
            }
          }
        }
      }

      ExtractionRecord rec;
      rec.sentence_index = s.index;
      rec.arg1_first = a1_first;
      rec.arg1_last = a1_last;
      rec.rel_first = rel_first;
      rec.rel_last = rel_last;
      rec.arg2_first = a2_first;
      rec.arg2_last = a2_last;
      rec.arg1 = doc.SpanText(a1_first, a1_last);
      rec.rel = doc.SpanText(rel_first, rel_last);
      rec.arg2 = doc.SpanText(a2_first, a2_last);
      rec.original_sentence = doc.SentenceString(s);
      rec.pos_tags = textpipe::PosString(doc, s);
      rec.chunk_tags = textpipe::ChunkString(doc, s);

      TripletFeatures f;
      f.sentence_tokens = static_cast<int>(s.last - s.first + 1);
      f.arg1_simple = a1_last - a1_first + 1 <= 2;
      f.arg1_proper = doc.tokens[a1_last].pos.rfind("NNP", 0) == 0;
      f.rel_preposition = detail::IsPrepPos(doc.tokens[rel_last].pos);
      f.arg2_simple = a2_last - a2_first + 1 <= 4;
      f.gap_tokens = static_cast<int>((rel_first - a1_last - 1) +
                                      (a2_first - rel_last - 1));
      f.crossed_relative = crossed_relative;
      rec.confidence = ScoreConfidence(f, weights);
      records.push_back(std::move(rec));
    }
  }
  return records;
}

// TSV rows without a header; columns are doc_id, sentence_index, arg1,
// rel, arg2, confidence, original_sentence, pos_tags, chunk_tags.
inline std::string WriteTsv(const std::string& doc_id,
                            const std::vector<ExtractionRecord>& records) {
  std::ostringstream out;
  for (const auto& r : records) {
    char conf[16];
    std::snprintf(conf, sizeof(conf), "%.3f", r.confidence);
    out << doc_id << "\t" << r.sentence_index << "\t" << r.arg1 << "\t"
        << r.rel << "\t" << r.arg2 << "\t" << conf << "\t"
        << r.original_sentence << "\t" << r.pos_tags << "\t" << r.chunk_tags
        << "\n";
  }
  return out.str();
}

}  // namespace openie
}  // namespace folktale

#endif  // FOLKTALE_OPENIE_HPP_
