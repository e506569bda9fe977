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

#ifndef FOLKTALE_PIPELINE_HPP_
#define FOLKTALE_PIPELINE_HPP_

// Batch driver: loads the ontology and rule files once, then runs the full
// stage chain per story. Stories are independent (each gets its own copy of
// the knowledge base, and individuals are document-qualified), so they can
// be processed concurrently. All outputs are deterministic.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "folktale/coref.hpp"
#include "folktale/eval.hpp"
#include "folktale/narrative.hpp"
#include "folktale/ontology.hpp"
#include "folktale/openie.hpp"
#include "folktale/rules.hpp"
#include "folktale/textpipe.hpp"

namespace folktale {
namespace pipeline {

namespace fs = std::filesystem;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  std::string ontology;   // ontology source file
  std::string rules_dir;  // holds jn.rules, jc.rules, jr.rules
  std::string corpus;     // directory of one UTF-8 .txt file per story
  std::string out;        // output directory
  bool long_version = true;
  size_t jobs = 1;
  openie::ScoreWeights weights;
};

// Flat `key = value` lines; '#' starts a comment. Unknown keys are errors
// so typos never silently fall back to defaults.
inline void ApplyConfigLine(PipelineConfig* config, const std::string& key,
                            const std::string& value, int lineno) {
  auto context = [&] { return " (config line " + std::to_string(lineno) + ")"; };
  if (key == "ontology") {
    config->ontology = value;
  } else if (key == "rules_dir") {
    config->rules_dir = value;
  } else if (key == "corpus") {
    config->corpus = value;
  } else if (key == "out") {
    config->out = value;
  } else if (key == "version") {
    if (value == "long") config->long_version = true;
    else if (value == "short") config->long_version = false;
    else throw ConfigError("version must be long or short" + context());
  } else if (key == "jobs") {
    size_t pos = 0;
    unsigned long n = 0;
    try {
      n = std::stoul(value, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != value.size() || n == 0)
      throw ConfigError("jobs must be a positive integer" + context());
    config->jobs = n;
  } else if (key.rfind("weight.", 0) == 0) {
    size_t pos = 0;
    double w = 0.0;
    try {
      w = std::stod(value, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != value.size())
      throw ConfigError("bad weight value" + context());
    std::string name = key.substr(7);
    if (name == "bias") config->weights.bias = w;
    else if (name == "per_sentence_token") config->weights.per_sentence_token = w;
    else if (name == "arg1_simple") config->weights.arg1_simple = w;
    else if (name == "arg1_proper") config->weights.arg1_proper = w;
    else if (name == "rel_preposition") config->weights.rel_preposition = w;
    else if (name == "arg2_simple") config->weights.arg2_simple = w;
    else if (name == "per_gap_token") config->weights.per_gap_token = w;
    else if (name == "crossed_relative") config->weights.crossed_relative = w;
    else throw ConfigError("unknown weight '" + name + "'" + context());
  } else {
    throw ConfigError("unknown config key '" + key + "'" + context());
  }
}

inline void LoadConfigFile(PipelineConfig* config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at config line " +
                        std::to_string(lineno));
    ApplyConfigLine(config, trim(line.substr(0, eq)),
                    trim(line.substr(eq + 1)), lineno);
  }
}

inline void ValidateConfig(const PipelineConfig& config) {
  if (config.ontology.empty() || !fs::exists(config.ontology))
    throw ConfigError("ontology file not found: " + config.ontology);
  if (config.rules_dir.empty() || !fs::is_directory(config.rules_dir))
    throw ConfigError("rules directory not found: " + config.rules_dir);
  for (const char* name : {"jn.rules", "jc.rules", "jr.rules"})
    if (!fs::exists(fs::path(config.rules_dir) / name))
      throw ConfigError(std::string("missing rule file ") + name + " in " +
                        config.rules_dir);
}

struct Resources {
  ontology::KnowledgeBase kb;
  std::vector<rules::Rule> jn, jc, jr;
};

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parse errors from the ontology or rule compilers propagate as their own
// exception types; the caller maps them to the parse-error exit code.
inline Resources LoadResources(const PipelineConfig& config) {
  Resources r;
  r.kb = ontology::ParseOntology(ReadFile(config.ontology));
  fs::path dir(config.rules_dir);
  r.jn = rules::CompileRulesFile((dir / "jn.rules").string());
  r.jc = rules::CompileRulesFile((dir / "jc.rules").string());
  r.jr = rules::CompileRulesFile((dir / "jr.rules").string());
  return r;
}

struct StoryArtifacts {
  std::string doc_id;
  std::string annotated;       // token table
  std::string chains;          // coreference chain dump
  std::string decoreferenced;  // rewritten text
  std::string triplets;        // extraction TSV
  std::string characters;      // character report
  std::string perspectives;    // one rendered report per character
  std::vector<narrative::CharacterRecord> cast;
  size_t sentence_count = 0;
};

// Sentence indices of the story where any alias of the character occurs.
// This is the long-version perspective as an index set, used for scoring.
inline std::set<size_t> PerspectiveSentences(
    const textpipe::Document& doc, const narrative::CharacterRecord& rec) {
  std::set<size_t> out;
  for (const auto& s : doc.sentences)
    if (narrative::detail::MatchesAnyAlias(doc.SentenceString(s), rec))
      out.insert(s.index);
  return out;
}

inline StoryArtifacts RunStory(const std::string& doc_id,
                               const std::string& text,
                               const Resources& resources,
                               const PipelineConfig& config) {
  StoryArtifacts art;
  art.doc_id = doc_id;

  auto doc = textpipe::Annotate(doc_id, text);
  textpipe::NerGazetteer(&doc, resources.kb);

  ontology::KnowledgeBase kb = resources.kb;
  art.cast = narrative::ExtractCharacters(&kb, &doc, resources.jn,
                                          resources.jc, resources.jr);
  art.sentence_count = doc.sentences.size();
  art.annotated = textpipe::DumpAnnotated(doc);
  art.characters = narrative::RenderCharacters(art.cast);

  auto mentions = coref::DetectMentions(doc);
  auto chains = coref::Resolve(doc, mentions);
  art.chains = coref::DumpChains(doc, mentions, chains);
  art.decoreferenced = coref::Decoreference(doc, mentions, chains).text;

  auto ddoc = textpipe::Annotate(doc_id, art.decoreferenced);
  auto records = openie::ExtractTriplets(ddoc, config.weights);
  art.triplets = openie::WriteTsv(doc_id, records);

  auto reports =
      narrative::FindPerspective(art.cast, records, config.long_version);
  std::ostringstream persp;
  for (const auto& report : reports)
    persp << narrative::RenderPerspective(report) << "\n";
  art.perspectives = persp.str();
  return art;
}

// Write via a temporary in the same directory, then rename into place, so
// readers never observe a partial file.
inline void AtomicWrite(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

inline std::vector<fs::path> ListCorpus(const std::string& corpus_dir) {
  if (!fs::is_directory(corpus_dir))
    throw ConfigError("corpus directory not found: " + corpus_dir);
  std::vector<fs::path> stories;
  for (const auto& entry : fs::directory_iterator(corpus_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      stories.push_back(entry.path());
  std::sort(stories.begin(), stories.end());
  return stories;
}

inline void WriteArtifacts(const fs::path& out_dir,
                           const StoryArtifacts& art) {
  AtomicWrite(out_dir / (art.doc_id + ".annotated.tsv"), art.annotated);
  AtomicWrite(out_dir / (art.doc_id + ".chains.tsv"), art.chains);
  AtomicWrite(out_dir / (art.doc_id + ".decoreferenced.txt"),
              art.decoreferenced);
  AtomicWrite(out_dir / (art.doc_id + ".triplets.tsv"), art.triplets);
  AtomicWrite(out_dir / (art.doc_id + ".characters.tsv"), art.characters);
  AtomicWrite(out_dir / (art.doc_id + ".perspective.txt"), art.perspectives);
}

// Full corpus run. Stories are distributed over worker threads; each story
// writes only its own files, and the summary is assembled afterwards in
// corpus order so the output never depends on scheduling.
inline std::vector<StoryArtifacts> RunCorpus(const PipelineConfig& config,
                                             const Resources& resources) {
  auto stories = ListCorpus(config.corpus);
  fs::path out_dir(config.out);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string());

  std::vector<StoryArtifacts> results(stories.size());
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= stories.size()) return;
      try {
        std::string doc_id = stories[i].stem().string();
        results[i] =
            RunStory(doc_id, ReadFile(stories[i].string()), resources, config);
        WriteArtifacts(out_dir, results[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  size_t nthreads = std::min(std::max<size_t>(config.jobs, 1), stories.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (size_t t = 0; t < nthreads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::ostringstream summary;
  for (const auto& art : results)
    summary << art.doc_id << "\t" << art.cast.size() << " characters\t"
            << art.sentence_count << " sentences\n";
  AtomicWrite(out_dir / "summary.tsv", summary.str());
  return results;
}

// Score every gold annotation against the pipeline's predicted perspective
// sentences. Gold rows for the same doc share one analysed document.
inline eval::Report EvaluateGold(const PipelineConfig& config,
                                 const Resources& resources,
                                 const std::vector<eval::GoldAnnotation>& gold) {
  std::map<std::string, std::pair<textpipe::Document,
                                  std::vector<narrative::CharacterRecord>>>
      analysed;
  std::vector<eval::StoryResult> results;
  for (const auto& g : gold) {
    auto it = analysed.find(g.doc_id);
    if (it == analysed.end()) {
      fs::path path = fs::path(config.corpus) / (g.doc_id + ".txt");
      auto doc = textpipe::Annotate(g.doc_id, ReadFile(path.string()));
      textpipe::NerGazetteer(&doc, resources.kb);
      ontology::KnowledgeBase kb = resources.kb;
      auto cast = narrative::ExtractCharacters(&kb, &doc, resources.jn,
                                               resources.jc, resources.jr);
      it = analysed.emplace(g.doc_id, std::make_pair(std::move(doc),
                                                     std::move(cast))).first;
    }
    const auto& [doc, cast] = it->second;
    std::set<size_t> universe, predicted;
    for (const auto& s : doc.sentences) universe.insert(s.index);
    for (const auto& rec : cast) {
      if (textpipe::lex::Lower(rec.canonical_name) !=
          textpipe::lex::Lower(g.character))
        continue;
      predicted = PerspectiveSentences(doc, rec);
      break;
    }
    eval::StoryResult r;
    r.story = g.doc_id + "/" + g.character;
    r.metrics = eval::ComputeMetrics(
        eval::Compare(predicted, g.sentences, universe));
    results.push_back(std::move(r));
  }
  return eval::MakeReport(results);
}

}  // namespace pipeline
}  // namespace folktale

#endif  // FOLKTALE_PIPELINE_HPP_
