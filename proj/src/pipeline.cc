// Copyright 2026 The Dogwhistle Pipeline Authors.
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

#include "dogwhistle/pipeline.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "dogwhistle/analysis.h"
#include "dogwhistle/dataset.h"
#include "dogwhistle/ensemble.h"
#include "dogwhistle/evaluation.h"
#include "dogwhistle/glossary.h"
#include "dogwhistle/hash.h"
#include "dogwhistle/instances.h"
#include "dogwhistle/matcher.h"
#include "dogwhistle/prompts.h"
#include "dogwhistle/provider_factory.h"

namespace dogwhistle {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.is_absolute() || base.empty()) return path.lexically_normal();
  return (base / path).lexically_normal();
}

std::string dump(const json& j, int indent = -1) {
  return j.dump(indent, ' ', false, json::error_handler_t::replace);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  return out;
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out = open_output(path);
  out << dump(j, 2) << '\n';
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

ProviderConfig provider_from_json(const json& value, const fs::path& base) {
  if (value.is_string()) {
    const std::string name = value.get<std::string>();
    if (auto builtin = builtin_provider_config(name)) return *builtin;
    return load_provider_config(resolve(base, name));
  }
  return parse_provider_config(value, base);
}

// Runs fn(0..count-1) on up to `workers` threads; rethrows the first
// failure after all threads stop.
void run_pool(std::size_t count, std::size_t workers,
              const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next++;
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(body);
  }
  if (failure) std::rethrow_exception(failure);
}

const PromptVariant* find_variant(const std::vector<PromptVariant>& list,
                                  const std::string& id) {
  for (const auto& v : list) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

RunConfig parse_run_config(const json& config, const fs::path& base_dir) {
  if (!config.is_object()) throw Error(ErrorKind::kConfig, "run config must be an object");
  if (auto inner = config.find("config"); inner != config.end() && inner->is_object()) {
    return parse_run_config(*inner, base_dir);  // a run manifest
  }
  RunConfig c;
  try {
    if (auto g = config.value("glossary", std::string()); !g.empty()) {
      c.glossary = resolve(base_dir, g);
    }
    if (auto it = config.find("corpora"); it != config.end()) {
      for (const auto& item : *it) {
        CorpusInput in;
        in.path = resolve(base_dir, item.at("path").get<std::string>());
        const std::string kind = item.at("kind").get<std::string>();
        auto k = parse_document_kind(kind);
        if (!k) throw Error(ErrorKind::kConfig, "unknown corpus kind '" + kind + "'");
        in.kind = *k;
        c.corpora.push_back(std::move(in));
      }
    }
    if (auto p = config.value("sampling_policy", std::string()); !p.empty()) {
      c.sampling_policy = resolve(base_dir, p);
    }
    if (auto it = config.find("provider"); it != config.end() && !it->is_null()) {
      c.provider = provider_from_json(*it, base_dir);
    }
    c.n = config.value("n", c.n);
    if (auto it = config.find("seed"); it != config.end() && !it->is_null()) {
      c.seed = it->get<std::uint64_t>();
    }
    if (auto o = config.value("output_dir", std::string()); !o.empty()) {
      c.output_dir = resolve(base_dir, o);
    }
    c.workers = config.value("workers", c.workers);
    if (auto it = config.find("prompt"); it != config.end()) {
      c.prompt.definition = it->value("definition", c.prompt.definition);
      c.prompt.question = it->value("question", c.prompt.question);
      c.prompt.ask_reasoning = it->value("ask_reasoning", c.prompt.ask_reasoning);
      if (auto m = it->find("moderation_preamble"); m != it->end() && !m->is_null()) {
        c.prompt.moderation_preamble = m->get<bool>();
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("run config: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open config " + path.string());
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw Error(ErrorKind::kConfig, "config is not valid JSON");
  return parse_run_config(j, path.parent_path());
}

void validate_run_config(const RunConfig& c) {
  if (c.n < 1 || c.n % 2 == 0) {
    throw Error(ErrorKind::kConfig,
                "ensemble size n must be odd and >= 1, got " + std::to_string(c.n));
  }
  if (c.workers < 1) throw Error(ErrorKind::kConfig, "workers must be >= 1");
  if (!find_variant(construct_definitions(), c.prompt.definition)) {
    throw Error(ErrorKind::kConfig,
                "unknown construct definition '" + c.prompt.definition + "'");
  }
  if (!find_variant(detection_questions(), c.prompt.question)) {
    throw Error(ErrorKind::kConfig, "unknown question '" + c.prompt.question + "'");
  }
}

json to_json(const ProviderConfig& p) {
  json j{{"name", p.name},
         {"kind", p.kind},
         {"endpoint", p.endpoint},
         {"model", p.model},
         {"api_key_env", p.api_key_env},
         {"rate_limit", {{"requests_per_minute", p.requests_per_minute}}},
         {"max_inflight", p.max_inflight},
         {"max_tokens", p.max_tokens},
         {"timeout_seconds", p.timeout_seconds},
         {"refusal_prone", p.refusal_prone},
         {"flip_probability", p.flip_probability},
         {"seed", p.seed}};
  if (p.temperature) j["temperature"] = *p.temperature;
  if (!p.script.empty()) j["script"] = p.script.string();
  return j;
}

json to_json(const RunConfig& c) {
  json corpora = json::array();
  for (const auto& in : c.corpora) {
    corpora.push_back({{"path", in.path.string()}, {"kind", to_string(in.kind)}});
  }
  json prompt{{"definition", c.prompt.definition},
              {"question", c.prompt.question},
              {"ask_reasoning", c.prompt.ask_reasoning}};
  if (c.prompt.moderation_preamble) {
    prompt["moderation_preamble"] = *c.prompt.moderation_preamble;
  }
  json j{{"glossary", c.glossary.string()},
         {"corpora", corpora},
         {"n", c.n},
         {"output_dir", c.output_dir.string()},
         {"workers", c.workers},
         {"prompt", prompt}};
  j["sampling_policy"] = c.sampling_policy ? json(c.sampling_policy->string()) : json();
  j["provider"] = c.provider ? to_json(*c.provider) : json();
  j["seed"] = c.seed ? json(*c.seed) : json();
  return j;
}

std::string config_hash(const RunConfig& c) { return hex64(fnv1a64(dump(to_json(c)))); }

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
      return 1;
    case ErrorKind::kConfig:
      return 2;
    case ErrorKind::kData:
    case ErrorKind::kIo:
      return 3;
    case ErrorKind::kProvider:
      return 4;
  }
  return 3;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

struct Context {
  RunConfig config;
  std::string command;
  std::ostream& out;
  std::ostream& err;
  json inputs = json::object();

  fs::path output(const std::string& name) const { return config.output_dir / name; }

  Glossary glossary() {
    if (config.glossary.empty()) {
      throw Error(ErrorKind::kConfig, "no glossary configured (use --glossary)");
    }
    inputs["glossary"] = config.glossary.string();
    Glossary g = load_glossary(config.glossary);
    for (const auto& w : validate_glossary(g).warnings) {
      err << "warning: glossary: " << w.message << '\n';
    }
    return g;
  }

  const ProviderConfig& provider_config() const {
    if (!config.provider) {
      throw Error(ErrorKind::kConfig, "no provider configured (use --provider)");
    }
    return *config.provider;
  }

  std::shared_ptr<ProviderClient> provider(std::optional<TruthTable> truth = {}) {
    ProviderOptions opts;
    opts.audit_log = output("audit." + command + ".jsonl");
    if (provider_config().kind == "mock-stochastic") opts.truth = std::move(truth);
    return make_provider(provider_config(), opts);
  }

  std::size_t batch_workers() const {
    if (!config.provider) return 1;
    const std::size_t n = static_cast<std::size_t>(config.n);
    return std::max<std::size_t>(1, (config.provider->max_inflight + n - 1) / n);
  }

  PromptTemplate prompt_template(PromptTask task) const {
    PromptTemplate t = default_template(task);
    const std::string prefix = t.template_id.substr(0, t.template_id.find('/'));
    t.template_id = prefix + "/" + config.prompt.definition + "/" + config.prompt.question;
    t.construct_definition = find_variant(construct_definitions(), config.prompt.definition)->text;
    t.question_text = find_variant(detection_questions(), config.prompt.question)->text;
    apply_behavior(t);
    return t;
  }

  void apply_behavior(PromptTemplate& t) const {
    t.ask_reasoning = config.prompt.ask_reasoning;
    t.moderation_preamble = config.prompt.moderation_preamble.value_or(
        config.provider && config.provider->refusal_prone);
  }

  EnsembleOptions ensemble_options(std::string tag) const {
    EnsembleOptions o;
    if (config.provider) {
      o.temperature = config.provider->temperature;
      o.max_tokens = config.provider->max_tokens;
    }
    o.tag = std::move(tag);
    return o;
  }

  void write_manifest() const {
    json m{{"command", command},
           {"version", kVersion},
           {"config", to_json(config)},
           {"config_hash", config_hash(config)},
           {"seed", config.seed.value_or(0)},
           {"n", config.n},
           {"inputs", inputs}};
    m["provider"] = config.provider ? json(config.provider->name) : json();
    write_json_file(output("manifest." + command + ".json"), m);
  }
};

std::vector<PotentialInstance> load_instances(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<PotentialInstance> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw ParseError(line_no, "invalid JSON");
    try {
      out.push_back(instance_from_json(j));
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

// --- extract

struct ExtractArgs {
  std::vector<std::string> formal;
  std::vector<std::string> informal;
  std::string policy;
};

void cmd_extract(Context& ctx, const ExtractArgs& args) {
  for (const auto& p : args.formal) ctx.config.corpora.push_back({p, DocumentKind::kFormal});
  for (const auto& p : args.informal) {
    ctx.config.corpora.push_back({p, DocumentKind::kInformal});
  }
  if (!args.policy.empty()) ctx.config.sampling_policy = args.policy;
  if (ctx.config.corpora.empty()) {
    throw Error(ErrorKind::kConfig, "no corpora configured (use --formal/--informal)");
  }
  const Glossary glossary = ctx.glossary();
  const PatternSet patterns = compile_patterns(glossary);

  SamplingPolicy policy;
  if (ctx.config.sampling_policy) {
    policy = load_sampling_policy(*ctx.config.sampling_policy, glossary);
    ctx.inputs["sampling_policy"] = ctx.config.sampling_policy->string();
    for (const auto& name : policy.unresolved) {
      ctx.err << "warning: sampling policy names unknown term '" << name << "'\n";
    }
  }
  if (ctx.config.seed) {
    policy.seed = *ctx.config.seed;
  } else {
    ctx.config.seed = policy.seed;
  }

  std::ofstream out = open_output(ctx.output("instances.jsonl"));
  ExtractionStats total;
  json readers = json::array();
  for (const auto& corpus : ctx.config.corpora) {
    DocumentReader reader = read_documents(corpus.path, corpus.kind);
    ExtractionStats stats = extract_potential_instances(
        patterns, [&] { return reader.next(); }, policy,
        [&](const PotentialInstance& inst) { out << dump(to_json(inst)) << '\n'; },
        ctx.config.workers);
    total.merge(stats);
    const ReaderStats& rs = reader.stats();
    readers.push_back({{"path", corpus.path.string()},
                       {"kind", to_string(corpus.kind)},
                       {"lines", rs.lines},
                       {"documents", rs.yielded},
                       {"skipped", rs.skipped},
                       {"warnings", rs.warnings}});
    for (const auto& w : rs.warnings) ctx.err << "warning: " << corpus.path.string() << ": " << w << '\n';
  }
  out.close();
  if (!out) throw Error(ErrorKind::kIo, "write failed for instances.jsonl");
  write_json_file(ctx.output("instances.summary.json"),
                  {{"extraction", total.to_json()}, {"corpora", readers}});
  ctx.out << "extract: " << total.documents << " documents, " << total.matches
          << " matches, " << total.emitted << " instances (" << total.excluded
          << " excluded, " << total.downsampled << " downsampled)\n";
}

// --- disambiguate

void cmd_disambiguate(Context& ctx, const std::string& instances_path) {
  const Glossary glossary = ctx.glossary();
  const fs::path path =
      instances_path.empty() ? ctx.output("instances.jsonl") : fs::path(instances_path);
  ctx.inputs["instances"] = path.string();
  const std::vector<PotentialInstance> instances = load_instances(path);

  // Sentences sharing a term share a prompt, at most ten at a time.
  std::map<std::string, std::vector<std::size_t>> by_term;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    by_term[instances[i].matched_term].push_back(i);
  }
  struct Batch {
    const GlossaryEntry* entry;
    std::vector<std::size_t> members;
  };
  std::vector<Batch> batches;
  for (const auto& [term, members] : by_term) {
    const GlossaryEntry* entry = glossary.find(term);
    if (entry == nullptr) {
      throw Error(ErrorKind::kData, "instance names unknown entry '" + term + "'");
    }
    for (std::size_t b = 0; b < members.size(); b += kMaxDisambiguationBatch) {
      const auto end = std::min(members.size(), b + kMaxDisambiguationBatch);
      batches.push_back({entry, {members.begin() + b, members.begin() + end}});
    }
  }

  auto client = ctx.provider();
  const PromptTemplate tmpl = ctx.prompt_template(PromptTask::kDisambiguation);
  const int n = ctx.config.n;
  std::vector<InstanceOutcome> results(instances.size());
  run_pool(batches.size(), ctx.batch_workers(), [&](std::size_t b) {
    const Batch& batch = batches[b];
    std::vector<std::string> sentences;
    for (std::size_t i : batch.members) sentences.push_back(instances[i].excerpt);
    const std::string prompt = render_disambiguation_prompt(*batch.entry, sentences, tmpl);
    const auto outcomes = run_ensemble(
        *client, prompt, n, sentences.size(),
        ctx.ensemble_options("disambiguate/" + batch.entry->id + "/" + std::to_string(b)));
    for (std::size_t j = 0; j < outcomes.size(); ++j) {
      const PotentialInstance& inst = instances[batch.members[j]];
      InstanceOutcome& o = results[batch.members[j]];
      o.instance_id = inst.instance_id;
      o.entry_id = inst.matched_term;
      o.status = outcomes[j].status;
      if (outcomes[j].verdict) {
        o.label = outcomes[j].verdict->label;
        o.explanation = outcomes[j].verdict->explanation;
      }
      o.refusal = outcomes[j].refusal;
      o.n = n;
      o.provider = client->name();
    }
  });

  std::ofstream out = open_output(ctx.output("outcomes.jsonl"));
  std::size_t retained = 0, coded = 0, discarded = 0, refused = 0;
  for (const auto& o : results) {
    out << dump(to_json(o)) << '\n';
    switch (o.status) {
      case OutcomeStatus::kRetained:
        ++retained;
        if (o.label == Label::kCoded) ++coded;
        break;
      case OutcomeStatus::kDiscardedInconsistent:
        ++discarded;
        break;
      case OutcomeStatus::kRefused:
        ++refused;
        break;
    }
  }
  out.close();
  if (!out) throw Error(ErrorKind::kIo, "write failed for outcomes.jsonl");
  write_json_file(ctx.output("outcomes.summary.json"),
                  {{"instances", results.size()},
                   {"batches", batches.size()},
                   {"n", n},
                   {"provider", client->name()},
                   {"retained", retained},
                   {"retained_coded", coded},
                   {"discarded_inconsistent", discarded},
                   {"refused", refused}});
  ctx.out << "disambiguate: " << results.size() << " instances in " << batches.size()
          << " batches, " << retained << " retained (" << coded << " coded), "
          << discarded << " discarded, " << refused << " refused\n";
}

// --- assemble

void cmd_assemble(Context& ctx, const std::string& instances_path,
                  const std::string& outcomes_path) {
  const Glossary glossary = ctx.glossary();
  const fs::path ipath =
      instances_path.empty() ? ctx.output("instances.jsonl") : fs::path(instances_path);
  const fs::path opath =
      outcomes_path.empty() ? ctx.output("outcomes.jsonl") : fs::path(outcomes_path);
  ctx.inputs["instances"] = ipath.string();
  ctx.inputs["outcomes"] = opath.string();
  AssemblySummary summary;
  const auto records =
      assemble_records(load_outcomes(opath), load_instances(ipath), glossary, &summary);
  const DedupResult dedup = deduplicate(records);
  {
    std::ofstream out = open_output(ctx.output("dataset.jsonl"));
    write_records(out, dedup.records);
    if (!out) throw Error(ErrorKind::kIo, "write failed for dataset.jsonl");
  }
  json s = summary.to_json();
  s["duplicates_removed"] = dedup.removed;
  s["written"] = dedup.records.size();
  write_json_file(ctx.output("dataset.summary.json"), s);
  const TypeSplit split = type_split(dedup.records);
  ctx.out << "assemble: " << dedup.records.size() << " records (" << split.informal
          << " informal, " << split.formal << " formal) after removing " << dedup.removed
          << " duplicates; " << summary.distinct_dog_whistles << " dog whistles, "
          << summary.distinct_surface_forms << " surface forms\n";
}

// --- eval-detection

struct DetectionArgs {
  std::string gold;
  std::string responses;
  std::string definition_mode;
  std::string grades;
  bool lenient = false;
  bool sweep = false;
};

void cmd_eval_detection(Context& ctx, const DetectionArgs& args) {
  const Glossary glossary = ctx.glossary();
  ctx.inputs["gold"] = args.gold;
  const std::vector<DetectionGold> gold = load_detection_gold(args.gold);

  std::optional<DefinitionMode> mode;
  std::vector<std::optional<int>> grades;
  if (args.definition_mode == "choice") {
    mode = DefinitionMode::kChoice;
  } else if (args.definition_mode == "graded") {
    mode = DefinitionMode::kGraded;
    if (args.grades.empty()) {
      throw Error(ErrorKind::kUsage, "--definition-mode graded requires --grades");
    }
    ctx.inputs["grades"] = args.grades;
    grades = load_grades(args.grades, gold.size());
  } else if (!args.definition_mode.empty()) {
    throw Error(ErrorKind::kUsage, "unknown definition mode '" + args.definition_mode + "'");
  }

  auto score = [&](const std::vector<DetectionPrediction>& preds) {
    DetectionReport r;
    r.presence = score_presence(gold, preds);
    r.identification = score_identification(gold, preds, glossary);
    if (mode) {
      r.definition = score_definition(gold, preds, glossary, *mode, grades, args.lenient);
    }
    return r;
  };

  json reports = json::array();
  auto report = [&](const std::string& id, const std::string& column,
                    const std::vector<DetectionPrediction>& preds) {
    const DetectionReport r = score(preds);
    json j = to_json(r);
    j["template_id"] = id;
    reports.push_back(std::move(j));
    ctx.out << id << '\n' << format_detection_table(r, column);
  };

  if (!args.responses.empty()) {
    ctx.inputs["responses"] = args.responses;
    report("stored", "responses", load_detection_responses(args.responses));
  } else {
    auto client = ctx.provider();
    std::vector<PromptTemplate> templates;
    if (args.sweep) {
      templates = detection_template_matrix();
      for (auto& t : templates) ctx.apply_behavior(t);
    } else {
      templates.push_back(ctx.prompt_template(PromptTask::kDetectionZeroShot));
    }
    const RetryPolicy retry;
    for (const auto& tmpl : templates) {
      std::vector<CompletionResponse> responses(gold.size());
      run_pool(gold.size(), ctx.provider_config().max_inflight, [&](std::size_t i) {
        CompletionRequest req;
        req.prompt = render_detection_prompt(gold[i].text, tmpl);
        req.temperature = ctx.provider_config().temperature;
        req.max_tokens = ctx.provider_config().max_tokens;
        req.tag = tmpl.template_id + "/" + std::to_string(i);
        responses[i] = complete_with_retry(*client, req, retry);
      });
      std::vector<DetectionPrediction> preds;
      for (const auto& r : responses) preds.push_back(prediction_from_response(r));
      if (!args.sweep) {
        std::ofstream out = open_output(ctx.output("detection_responses.jsonl"));
        for (const auto& r : responses) {
          out << dump({{"raw", r.text}, {"status", to_string(r.status)}}) << '\n';
        }
      }
      report(tmpl.template_id, client->name(), preds);
    }
  }
  write_json_file(ctx.output("eval-detection.json"), {{"reports", reports}});
}

// --- eval-disambiguation

void cmd_eval_disambiguation(Context& ctx, const std::string& gold_path,
                             std::vector<int> n_values) {
  const Glossary glossary = ctx.glossary();
  ctx.inputs["gold"] = gold_path;
  const std::vector<DisambiguationGold> gold = load_disambiguation_gold(gold_path);
  if (n_values.empty()) n_values.push_back(ctx.config.n);
  for (int n : n_values) {
    if (n < 1 || n % 2 == 0) {
      throw Error(ErrorKind::kUsage, "ensemble sizes must be odd and >= 1");
    }
  }
  TruthTable truth;
  for (const auto& set : gold) {
    for (std::size_t i = 0; i < set.sentences.size(); ++i) {
      truth.add(set.sentences[i], set.labels[i]);
    }
  }
  auto client = ctx.provider(truth);
  const PromptTemplate tmpl = ctx.prompt_template(PromptTask::kDisambiguation);
  std::vector<std::string> prompts;
  for (const auto& set : gold) {
    const GlossaryEntry* entry = glossary.find(set.entry_id);
    if (entry == nullptr) {
      throw Error(ErrorKind::kData, "gold set names unknown entry '" + set.entry_id + "'");
    }
    prompts.push_back(render_disambiguation_prompt(*entry, set.sentences, tmpl));
  }

  std::vector<EnsembleReportRow> rows;
  for (int n : n_values) {
    std::vector<std::vector<EnsembleOutcome>> outcomes(gold.size());
    const std::size_t workers = std::max<std::size_t>(
        1, ctx.provider_config().max_inflight / static_cast<std::size_t>(n));
    run_pool(gold.size(), workers, [&](std::size_t s) {
      outcomes[s] = run_ensemble(
          *client, prompts[s], n, gold[s].sentences.size(),
          ctx.ensemble_options("eval/" + std::to_string(n) + "/" + std::to_string(s)));
    });
    rows.push_back({n, score_disambiguation(gold, outcomes)});
  }
  write_json_file(ctx.output("eval-disambiguation.json"),
                  {{"provider", client->name()}, {"rows", to_json(rows)}});
  ctx.out << format_ensemble_table(rows);
}

// --- validation

void cmd_validate_sample(Context& ctx, const std::string& dataset, std::size_t k) {
  const fs::path path = dataset.empty() ? ctx.output("dataset.jsonl") : fs::path(dataset);
  ctx.inputs["dataset"] = path.string();
  if (!ctx.config.seed) ctx.config.seed = 0;
  const auto sample = sample_for_validation(load_records(path), k, *ctx.config.seed);
  std::ofstream out = open_output(ctx.output("validation_manifest.csv"));
  write_validation_manifest(out, sample);
  if (!out) throw Error(ErrorKind::kIo, "write failed for validation_manifest.csv");
  ctx.out << "validate-sample: " << sample.size() << " records -> "
          << ctx.output("validation_manifest.csv").string() << '\n';
}

void cmd_validate_stats(Context& ctx, const std::string& labels_path,
                        const std::string& manifest_path) {
  ctx.inputs["labels"] = labels_path;
  const auto labels = load_validation_labels(labels_path);
  std::vector<std::string> ids;
  if (!manifest_path.empty()) {
    ctx.inputs["manifest"] = manifest_path;
    for (const auto& row : load_validation_labels(manifest_path)) ids.push_back(row.record_id);
  }
  const ValidationStats stats = compute_validation_stats(labels, ids);
  write_json_file(ctx.output("validation_stats.json"), stats.to_json());
  ctx.out << "validate-stats: " << stats.total << " labels, strict precision "
          << stats.precision_strict * 100 << "%, adjusted " << stats.precision_adjusted * 100
          << "%\n";
}

// --- analyze

struct AnalyzeArgs {
  std::string dataset;
  std::string group_by = "in_group";
  std::string type;
  std::vector<std::string> in_groups;
  std::vector<std::string> terms;
  std::string years;
  bool distinct_terms = false;
  std::string events;
  std::string table_out;
};

YearRange parse_years(const std::string& text) {
  const auto dash = text.find('-', 1);
  try {
    if (dash == std::string::npos) throw std::invalid_argument(text);
    std::size_t a = 0, b = 0;
    const std::string lo = text.substr(0, dash);
    const std::string hi = text.substr(dash + 1);
    YearRange r{std::stoi(lo, &a), std::stoi(hi, &b)};
    if (a != lo.size() || b != hi.size()) throw std::invalid_argument(text);
    return r;
  } catch (const std::exception&) {
    throw Error(ErrorKind::kUsage, "--years expects FIRST-LAST, got '" + text + "'");
  }
}

void cmd_analyze(Context& ctx, const AnalyzeArgs& args) {
  AggregationQuery q;
  auto g = parse_group_by(args.group_by);
  if (!g) throw Error(ErrorKind::kUsage, "unknown --group-by '" + args.group_by + "'");
  q.group_by = *g;
  if (!args.type.empty()) {
    q.filter.type = parse_document_kind(args.type);
    if (!q.filter.type) throw Error(ErrorKind::kUsage, "unknown --type '" + args.type + "'");
  }
  q.filter.in_groups.insert(args.in_groups.begin(), args.in_groups.end());
  q.filter.terms.insert(args.terms.begin(), args.terms.end());
  if (!args.years.empty()) q.filter.year_range = parse_years(args.years);
  q.distinct_terms = args.distinct_terms;

  const fs::path path =
      args.dataset.empty() ? ctx.output("dataset.jsonl") : fs::path(args.dataset);
  ctx.inputs["dataset"] = path.string();
  const auto records = load_records(path);
  const AggregateTable table = aggregate(records, q);

  std::map<int, std::vector<std::string>> events;
  if (!args.events.empty()) {
    ctx.inputs["events"] = args.events;
    events = load_event_overlay(args.events);
  }
  const fs::path out_path =
      args.table_out.empty()
          ? ctx.output("analysis." + std::string(to_string(q.group_by)) + ".csv")
          : fs::path(args.table_out);
  emit_plot_table(table, out_path, args.events.empty() ? nullptr : &events);

  const TypeSplit split = type_split(records);
  ctx.out << "analyze: " << table.filtered_total << " of " << records.size()
          << " records, " << table.rows.size() << " rows -> " << out_path.string() << '\n'
          << "split: informal " << split.informal_fraction * 100 << "%, formal "
          << split.formal_fraction * 100 << "%\n";
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Dog-whistle detection, disambiguation and dataset pipeline",
               "dogwhistle"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  std::string config_path, glossary, provider, script, output_dir;
  std::uint64_t seed = 0;
  int n = 0;
  std::size_t max_inflight = 0, workers = 0;
  app.add_option("--config", config_path, "Run config or a previous run manifest");
  app.add_option("--glossary", glossary, "Glossary file");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for sampling and mock providers");
  auto* n_opt = app.add_option("--n", n, "Ensemble size (odd)");
  app.add_option("--provider", provider,
                 "Provider config file, or mock-scripted / mock-stochastic");
  app.add_option("--script", script, "Mock provider script or truth table");
  auto* inflight_opt =
      app.add_option("--max-inflight", max_inflight, "Concurrent provider requests");
  app.add_option("--output-dir", output_dir, "Output directory");
  auto* workers_opt = app.add_option("--workers", workers, "Scanning threads");

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand("extract", "Scan corpora into potential instances");
  extract->add_option("--formal", extract_args.formal, "Formal corpus file");
  extract->add_option("--informal", extract_args.informal, "Informal corpus file");
  extract->add_option("--policy", extract_args.policy, "Sampling policy file");

  std::string instances_path, outcomes_path;
  auto* disambiguate =
      app.add_subcommand("disambiguate", "Label instances with the consistency ensemble");
  disambiguate->add_option("--instances", instances_path, "Instance file");

  auto* assemble = app.add_subcommand("assemble", "Build the dataset from outcomes");
  assemble->add_option("--instances", instances_path, "Instance file");
  assemble->add_option("--outcomes", outcomes_path, "Outcome file");

  DetectionArgs det;
  auto* eval_det = app.add_subcommand("eval-detection", "Score detection responses");
  eval_det->add_option("--gold", det.gold, "Detection gold file")->required();
  eval_det->add_option("--responses", det.responses, "Stored responses instead of a provider");
  eval_det->add_option("--definition-mode", det.definition_mode, "choice or graded");
  eval_det->add_option("--grades", det.grades, "Definition grades (index,grade)");
  eval_det->add_flag("--lenient", det.lenient, "Count incomplete definitions as correct");
  eval_det->add_flag("--sweep", det.sweep, "Run every definition x question template");

  std::string dis_gold;
  std::vector<int> n_values;
  auto* eval_dis =
      app.add_subcommand("eval-disambiguation", "Score the ensemble on labeled sets");
  eval_dis->add_option("--gold", dis_gold, "Disambiguation gold file")->required();
  eval_dis->add_option("--n-values", n_values, "Ensemble sizes to compare")->delimiter(',');

  std::string dataset;
  std::size_t k = 400;
  auto* vsample = app.add_subcommand("validate-sample", "Sample records for annotation");
  vsample->add_option("--dataset", dataset, "Dataset file");
  vsample->add_option("--k", k, "Sample size")->capture_default_str();

  std::string labels_path, manifest_path;
  auto* vstats = app.add_subcommand("validate-stats", "Precision from annotation labels");
  vstats->add_option("--labels", labels_path, "Filled-in label file")->required();
  vstats->add_option("--manifest", manifest_path, "Sample manifest to check coverage");

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Aggregate records into a plot table");
  analyze->add_option("--dataset", an.dataset, "Dataset file");
  analyze->add_option("--group-by", an.group_by, "in_group, year or in_group_year")
      ->capture_default_str();
  analyze->add_option("--type", an.type, "formal or informal");
  analyze->add_option("--in-group", an.in_groups, "Keep only these in-groups");
  analyze->add_option("--term", an.terms, "Keep only these entry ids");
  analyze->add_option("--years", an.years, "Year range FIRST-LAST");
  analyze->add_flag("--distinct-terms", an.distinct_terms, "Count distinct dog whistles");
  analyze->add_option("--events", an.events, "Event overlay (year,label)");
  analyze->add_option("--table-out", an.table_out, "Output table path");

  std::vector<std::string> argv_storage{"dogwhistle"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    if (!glossary.empty()) config.glossary = glossary;
    if (*seed_opt) config.seed = seed;
    if (*n_opt) config.n = n;
    if (!provider.empty()) {
      if (auto builtin = builtin_provider_config(provider)) {
        config.provider = *builtin;
      } else {
        config.provider = load_provider_config(provider);
      }
    }
    if (!script.empty()) {
      if (!config.provider) {
        throw Error(ErrorKind::kUsage, "--script needs a mock provider");
      }
      config.provider->script = script;
    }
    if (config.provider && config.seed && config.provider->kind == "mock-stochastic") {
      config.provider->seed = *config.seed;
    }
    if (*inflight_opt) {
      if (!config.provider) throw Error(ErrorKind::kUsage, "--max-inflight needs a provider");
      config.provider->max_inflight = max_inflight;
    }
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (*workers_opt) config.workers = workers;
    validate_run_config(config);

    Context ctx{std::move(config), app.get_subcommands().front()->get_name(), out, err};
    fs::create_directories(ctx.config.output_dir);

    if (extract->parsed()) {
      cmd_extract(ctx, extract_args);
    } else if (disambiguate->parsed()) {
      cmd_disambiguate(ctx, instances_path);
    } else if (assemble->parsed()) {
      cmd_assemble(ctx, instances_path, outcomes_path);
    } else if (eval_det->parsed()) {
      cmd_eval_detection(ctx, det);
    } else if (eval_dis->parsed()) {
      cmd_eval_disambiguation(ctx, dis_gold, n_values);
    } else if (vsample->parsed()) {
      cmd_validate_sample(ctx, dataset, k);
    } else if (vstats->parsed()) {
      cmd_validate_stats(ctx, labels_path, manifest_path);
    } else if (analyze->parsed()) {
      cmd_analyze(ctx, an);
    }
    ctx.write_manifest();
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(ErrorKind::kData);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(ErrorKind::kIo);
  }
}

}  // namespace dogwhistle
