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

// Command-line front end. One subcommand per pipeline stage plus `run`,
// which executes the whole chain over a corpus directory. Stage commands
// compose through files: the output of each is valid input for the next.
//
// Exit codes: 0 ok, 2 config error, 3 parse error, 4 I/O error.

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "folktale/pipeline.hpp"

namespace {

namespace fs = std::filesystem;
using namespace folktale;

// Flag values layered over an optional config file; empty means "not given".
struct Overrides {
  std::string config, ontology, rules_dir, corpus, out;
  bool long_version = false, short_version = false;
  unsigned jobs = 0;
};

void AddCommonFlags(CLI::App* cmd, Overrides* o) {
  cmd->add_option("--config", o->config, "flat key = value config file");
  cmd->add_option("--ontology", o->ontology, "ontology source file");
  cmd->add_option("--rules-dir", o->rules_dir,
                  "directory with jn.rules, jc.rules, jr.rules");
  cmd->add_option("--corpus", o->corpus, "directory of story .txt files");
  cmd->add_option("--out", o->out, "output file (stage) or directory (run)");
  cmd->add_flag("--long", o->long_version, "long perspective (sentences)");
  cmd->add_flag("--short", o->short_version, "short perspective (triplets)");
  cmd->add_option("--jobs", o->jobs, "worker thread limit for run");
}

pipeline::PipelineConfig BuildConfig(const Overrides& o) {
  pipeline::PipelineConfig config;
  config.ontology = std::string(FOLKTALE_DATA_DIR) + "/folktale.ont";
  config.rules_dir = FOLKTALE_DATA_DIR;
  config.corpus = std::string(FOLKTALE_DATA_DIR) + "/corpus";
  config.out = "out";
  if (!o.config.empty()) pipeline::LoadConfigFile(&config, o.config);
  if (!o.ontology.empty()) config.ontology = o.ontology;
  if (!o.rules_dir.empty()) config.rules_dir = o.rules_dir;
  if (!o.corpus.empty()) config.corpus = o.corpus;
  if (!o.out.empty()) config.out = o.out;
  if (o.long_version && o.short_version)
    throw pipeline::ConfigError("--long and --short are mutually exclusive");
  if (o.long_version) config.long_version = true;
  if (o.short_version) config.long_version = false;
  if (o.jobs) config.jobs = o.jobs;
  return config;
}

void Emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    pipeline::AtomicWrite(out_path, content);
}

std::string DocId(const std::string& input) {
  return fs::path(input).stem().string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"folktale: character and perspective extraction from stories"};
  app.require_subcommand(1);

  Overrides o;
  std::string input, character, gold_path;

  auto* cmd_annotate =
      app.add_subcommand("annotate", "token/POS/lemma/chunk/entity table");
  cmd_annotate->add_option("input", input, "story text file")->required();
  AddCommonFlags(cmd_annotate, &o);

  auto* cmd_decoref = app.add_subcommand(
      "decoref", "rewrite mentions with their chain representatives");
  cmd_decoref->add_option("input", input, "story text file")->required();
  AddCommonFlags(cmd_decoref, &o);

  auto* cmd_triplets =
      app.add_subcommand("triplets", "extract (arg1, rel, arg2) records");
  cmd_triplets->add_option("input", input, "story text file")->required();
  AddCommonFlags(cmd_triplets, &o);

  auto* cmd_characters =
      app.add_subcommand("characters", "extract and classify the cast");
  cmd_characters->add_option("input", input, "story text file")->required();
  AddCommonFlags(cmd_characters, &o);

  auto* cmd_perspective =
      app.add_subcommand("perspective", "per-character perspective report");
  cmd_perspective->add_option("input", input, "story text file")->required();
  cmd_perspective->add_option("--character", character,
                              "only this character (case-insensitive)");
  AddCommonFlags(cmd_perspective, &o);

  auto* cmd_eval =
      app.add_subcommand("eval", "score perspectives against gold annotations");
  cmd_eval->add_option("--gold", gold_path, "gold TSV file")->required();
  AddCommonFlags(cmd_eval, &o);

  auto* cmd_run =
      app.add_subcommand("run", "full pipeline over the corpus directory");
  AddCommonFlags(cmd_run, &o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto config = BuildConfig(o);
    pipeline::ValidateConfig(config);
    auto resources = pipeline::LoadResources(config);

    if (cmd_annotate->parsed()) {
      auto doc = textpipe::Annotate(DocId(input), pipeline::ReadFile(input));
      textpipe::NerGazetteer(&doc, resources.kb);
      Emit(o.out, textpipe::DumpAnnotated(doc));
    } else if (cmd_decoref->parsed()) {
      auto doc = textpipe::Annotate(DocId(input), pipeline::ReadFile(input));
      auto mentions = coref::DetectMentions(doc);
      auto chains = coref::Resolve(doc, mentions);
      Emit(o.out, coref::Decoreference(doc, mentions, chains).text);
    } else if (cmd_triplets->parsed()) {
      auto doc = textpipe::Annotate(DocId(input), pipeline::ReadFile(input));
      auto records = openie::ExtractTriplets(doc, config.weights);
      Emit(o.out, openie::WriteTsv(doc.id, records));
    } else if (cmd_characters->parsed()) {
      auto art = pipeline::RunStory(DocId(input), pipeline::ReadFile(input),
                                    resources, config);
      Emit(o.out, art.characters);
    } else if (cmd_perspective->parsed()) {
      auto art = pipeline::RunStory(DocId(input), pipeline::ReadFile(input),
                                    resources, config);
      if (character.empty()) {
        Emit(o.out, art.perspectives);
      } else {
        auto ddoc = textpipe::Annotate(art.doc_id, art.decoreferenced);
        auto records = openie::ExtractTriplets(ddoc, config.weights);
        std::string wanted = textpipe::lex::Lower(character);
        std::string rendered;
        for (const auto& rec : art.cast) {
          if (textpipe::lex::Lower(rec.canonical_name) != wanted) continue;
          auto reports = narrative::FindPerspective({rec}, records,
                                                    config.long_version);
          rendered = narrative::RenderPerspective(reports.at(0));
          break;
        }
        if (rendered.empty()) {
          narrative::PerspectiveReport none;
          none.character = character;
          none.long_version = config.long_version;
          rendered = narrative::RenderPerspective(none);
        }
        Emit(o.out, rendered);
      }
    } else if (cmd_eval->parsed()) {
      auto gold = eval::ParseGold(pipeline::ReadFile(gold_path));
      auto report = pipeline::EvaluateGold(config, resources, gold);
      std::cout << report.text;
      if (!o.out.empty()) pipeline::AtomicWrite(o.out, report.tsv);
    } else if (cmd_run->parsed()) {
      auto results = pipeline::RunCorpus(config, resources);
      if (results.empty())
        std::cerr << "warning: no .txt stories in " << config.corpus << "\n";
      std::cout << results.size() << " stories -> " << config.out << "\n";
    }
  } catch (const pipeline::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ontology::OntologyError& e) {
    std::cerr << "ontology error: " << e.what() << "\n";
    return 3;
  } catch (const rules::RuleError& e) {
    std::cerr << "rule error: " << e.what() << "\n";
    return 3;
  } catch (const eval::EvalError& e) {
    std::cerr << "gold error: " << e.what() << "\n";
    return 3;
  } catch (const pipeline::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
