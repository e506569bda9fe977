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

#ifndef FOLKTALE_EVAL_HPP_
#define FOLKTALE_EVAL_HPP_

// Evaluation of predicted perspectives against gold annotations with
// confusion-count precision, recall, and accuracy. Metrics with a zero
// denominator are undefined and reported as "n/a", never as 0 or 1.

#include <cstdio>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace folktale {
namespace eval {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One line per (doc, character): doc_id, character, comma-joined indices.
struct GoldAnnotation {
  std::string doc_id;
  std::string character;
  std::set<size_t> sentences;
};

struct ConfusionCounts {
  size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

struct Metrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> accuracy;
};

struct StoryResult {
  std::string story;
  Metrics metrics;
};

inline std::vector<GoldAnnotation> ParseGold(const std::string& source) {
  std::vector<GoldAnnotation> gold;
  std::istringstream in(source);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    GoldAnnotation g;
    std::string indices;
    if (!std::getline(ls, g.doc_id, '\t') ||
        !std::getline(ls, g.character, '\t') || !std::getline(ls, indices))
      throw EvalError("malformed gold line " + std::to_string(lineno));
    std::istringstream is(indices);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      if (tok.empty()) continue;
      size_t pos = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(tok, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != tok.size())
        throw EvalError("bad sentence index '" + tok + "' on line " +
                        std::to_string(lineno));
      g.sentences.insert(v);
    }
    gold.push_back(std::move(g));
  }
  return gold;
}

inline ConfusionCounts Compare(const std::set<size_t>& predicted,
                               const std::set<size_t>& gold,
                               const std::set<size_t>& universe) {
  for (const auto* s : {&predicted, &gold})
    for (size_t i : *s)
      if (!universe.count(i))
        throw EvalError("sentence index " + std::to_string(i) +
                        " outside the document");
  ConfusionCounts c;
  for (size_t i : universe) {
    bool p = predicted.count(i) > 0, g = gold.count(i) > 0;
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return c;
}

inline Metrics ComputeMetrics(const ConfusionCounts& c) {
  Metrics m;
  if (c.tp + c.fp > 0)
    m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0)
    m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  size_t total = c.tp + c.fp + c.tn + c.fn;
  if (total > 0)
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
  return m;
}

namespace detail {

inline std::string Cell(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.3f", *v);
  return buf;
}

inline std::optional<double> Average(
    const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  size_t n = 0;
  for (const auto& v : values) {
    if (!v) continue;
    sum += *v;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace detail

struct Report {
  std::string text;  // aligned table for terminals
  std::string tsv;   // story, precision, recall, accuracy
  Metrics average;   // unweighted; undefined entries skipped
};

inline Report MakeReport(const std::vector<StoryResult>& results) {
  Report report;
  std::vector<std::optional<double>> ps, rs, as;
  size_t width = std::string("average").size();
  for (const auto& r : results) width = std::max(width, r.story.size());

  std::ostringstream text, tsv;
  char header[128];
  std::snprintf(header, sizeof(header), "%-*s  %9s  %9s  %9s\n",
                static_cast<int>(width), "story", "precision", "recall",
                "accuracy");
  text << header;
  auto row = [&](const std::string& name, const Metrics& m) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-*s  %9s  %9s  %9s\n",
                  static_cast<int>(width), name.c_str(),
                  detail::Cell(m.precision).c_str(),
                  detail::Cell(m.recall).c_str(),
                  detail::Cell(m.accuracy).c_str());
    text << buf;
    tsv << name << "\t" << detail::Cell(m.precision) << "\t"
        << detail::Cell(m.recall) << "\t" << detail::Cell(m.accuracy) << "\n";
  };
  for (const auto& r : results) {
    row(r.story, r.metrics);
    ps.push_back(r.metrics.precision);
    rs.push_back(r.metrics.recall);
    as.push_back(r.metrics.accuracy);
  }
  report.average.precision = detail::Average(ps);
  report.average.recall = detail::Average(rs);
  report.average.accuracy = detail::Average(as);
  row("average", report.average);

  report.text = text.str();
  report.tsv = tsv.str();
  return report;
}

}  // namespace eval
}  // namespace folktale

#endif  // FOLKTALE_EVAL_HPP_
