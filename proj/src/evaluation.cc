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

#include "dogwhistle/evaluation.h"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "dogwhistle/error.h"
#include "dogwhistle/table.h"
#include "dogwhistle/text.h"

namespace dogwhistle {

using nlohmann::json;

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void check_lengths(std::size_t gold, std::size_t preds) {
  if (gold != preds) {
    throw Error(ErrorKind::kData, "gold has " + std::to_string(gold) +
                                      " items but predictions have " +
                                      std::to_string(preds));
  }
}

MetricsReport finish(const ConfusionCounts& c) {
  MetricsReport r;
  r.counts = c;
  r.accuracy = ratio(c.tp + c.tn, c.scored());
  r.precision_1 = ratio(c.tp, c.tp + c.fp);
  r.recall_1 = ratio(c.tp, c.tp + c.fn);
  r.f1 = f1_score(r.precision_1, r.recall_1);
  r.retention = ratio(c.scored(), c.total());
  return r;
}

// Shared tier loop. positive_correct decides whether a gold positive that
// was predicted present also passes the tier.
template <typename Fn>
MetricsReport score_tier(const std::vector<DetectionGold>& gold,
                         const std::vector<DetectionPrediction>& preds,
                         Fn positive_correct) {
  check_lengths(gold.size(), preds.size());
  ConfusionCounts c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& g = gold[i];
    const auto& p = preds[i];
    if (p.refusal) {
      ++c.refused;
      continue;
    }
    if (!g.has_dw) {
      ++(p.presence ? c.fp : c.tn);
    } else if (!p.presence) {
      ++c.fn;
    } else {
      ++(positive_correct(i) ? c.tp : c.fn);
    }
  }
  return finish(c);
}

const GlossaryEntry& gold_entry(const DetectionGold& g, const Glossary& glossary,
                                std::size_t index) {
  if (!g.gold_entry_id) {
    throw Error(ErrorKind::kData,
                "gold item " + std::to_string(index) + " has no gold entry id");
  }
  const GlossaryEntry* e = glossary.find(*g.gold_entry_id);
  if (e == nullptr) {
    throw Error(ErrorKind::kData,
                "gold entry '" + *g.gold_entry_id + "' is not in the glossary");
  }
  return *e;
}

bool is_edge_punct(unsigned char c) {
  return c == '"' || c == '\'' || c == '`' || c == '.' || c == ',' ||
         c == ';' || c == ':' || c == '!' || c == '?' || c == '(' ||
         c == ')' || c == '[' || c == ']' || c == '*' || is_space(c);
}

std::string_view strip_edges(std::string_view s) {
  while (!s.empty() && is_edge_punct(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && is_edge_punct(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  // Curly quotes are three bytes each.
  for (std::string_view q : {"“", "”", "‘", "’"}) {
    if (s.starts_with(q)) s.remove_prefix(q.size());
    if (s.ends_with(q)) s.remove_suffix(q.size());
  }
  return s;
}

}  // namespace

double f1_score(double precision, double recall) {
  const double sum = precision + recall;
  return sum == 0 ? 0.0 : 2 * precision * recall / sum;
}

bool span_names_entry(std::string_view span, const GlossaryEntry& entry) {
  const std::string needle = normalize(strip_edges(span));
  if (needle.empty()) return false;
  if (needle == normalize(entry.term)) return true;
  for (const auto& form : entry.surface_forms) {
    if (needle == normalize(form)) return true;
  }
  return false;
}

MetricsReport score_presence(const std::vector<DetectionGold>& gold,
                             const std::vector<DetectionPrediction>& preds) {
  return score_tier(gold, preds, [](std::size_t) { return true; });
}

MetricsReport score_identification(const std::vector<DetectionGold>& gold,
                                   const std::vector<DetectionPrediction>& preds,
                                   const Glossary& glossary) {
  return score_tier(gold, preds, [&](std::size_t i) {
    const auto& span = preds[i].identified_span;
    return span && span_names_entry(*span, gold_entry(gold[i], glossary, i));
  });
}

MetricsReport score_definition(const std::vector<DetectionGold>& gold,
                               const std::vector<DetectionPrediction>& preds,
                               const Glossary& glossary, DefinitionMode mode,
                               const std::vector<std::optional<int>>& grades,
                               bool lenient) {
  if (mode == DefinitionMode::kGraded) check_lengths(gold.size(), grades.size());
  return score_tier(gold, preds, [&](std::size_t i) {
    const auto& span = preds[i].identified_span;
    if (!span || !span_names_entry(*span, gold_entry(gold[i], glossary, i))) {
      return false;
    }
    if (mode == DefinitionMode::kChoice) {
      if (gold[i].choice_set.empty() || !gold[i].correct_choice) {
        throw Error(ErrorKind::kData,
                    "gold item " + std::to_string(i) + " has no choice set");
      }
      return preds[i].choice_index == gold[i].correct_choice;
    }
    const auto& grade = grades[i];
    if (!grade) {
      throw Error(ErrorKind::kData,
                  "missing definition grade for item " + std::to_string(i));
    }
    if (*grade < 0 || *grade > 2) {
      throw Error(ErrorKind::kData,
                  "grade for item " + std::to_string(i) + " is not 0, 1 or 2");
    }
    return *grade == 2 || (*grade == 1 && lenient);
  });
}

MetricsReport score_disambiguation(
    const std::vector<DisambiguationGold>& gold,
    const std::vector<std::vector<EnsembleOutcome>>& outcomes) {
  check_lengths(gold.size(), outcomes.size());
  ConfusionCounts c;
  std::size_t gold_coded = 0;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    const auto& g = gold[s];
    const auto& out = outcomes[s];
    if (g.labels.size() != out.size()) {
      throw Error(ErrorKind::kData, "set " + std::to_string(s) + " has " +
                                        std::to_string(g.labels.size()) +
                                        " gold labels but " +
                                        std::to_string(out.size()) + " outcomes");
    }
    for (std::size_t j = 0; j < out.size(); ++j) {
      const bool coded = g.labels[j] == Label::kCoded;
      if (coded) ++gold_coded;
      const auto& o = out[j];
      if (o.sentence_index != j) {
        throw Error(ErrorKind::kData,
                    "outcome order does not match gold in set " + std::to_string(s));
      }
      switch (o.status) {
        case OutcomeStatus::kRefused:
          ++c.refused;
          break;
        case OutcomeStatus::kDiscardedInconsistent:
          ++c.discarded;
          break;
        case OutcomeStatus::kRetained: {
          const bool pred = o.verdict && o.verdict->label == Label::kCoded;
          if (pred) {
            ++(coded ? c.tp : c.fp);
          } else {
            ++(coded ? c.fn : c.tn);
          }
          break;
        }
      }
    }
  }
  MetricsReport r = finish(c);
  r.recall_1 = ratio(c.tp, gold_coded);
  r.f1 = f1_score(r.precision_1, r.recall_1);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return in;
}

// Calls fn(record, line_no) for each non-blank JSONL line.
template <typename Fn>
void for_each_record(const std::filesystem::path& path, Fn fn) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.is_object()) {
      throw ParseError(line_no, "invalid JSON object");
    }
    fn(record, line_no);
  }
}

std::string require_string(const json& r, const char* key, std::size_t line) {
  auto it = r.find(key);
  if (it == r.end() || !it->is_string()) {
    throw ParseError(line, std::string("missing or non-string field '") + key + "'");
  }
  return it->get<std::string>();
}

}  // namespace

std::vector<DetectionGold> load_detection_gold(const std::filesystem::path& path) {
  std::vector<DetectionGold> out;
  for_each_record(path, [&](const json& r, std::size_t line) {
    DetectionGold g;
    g.text = require_string(r, "text", line);
    auto has = r.find("has_dw");
    if (has == r.end() || !has->is_boolean()) {
      throw ParseError(line, "missing or non-boolean field 'has_dw'");
    }
    g.has_dw = has->get<bool>();
    if (auto it = r.find("gold_entry_id"); it != r.end() && it->is_string()) {
      g.gold_entry_id = it->get<std::string>();
    }
    if (g.has_dw && !g.gold_entry_id) {
      throw ParseError(line, "positive item without 'gold_entry_id'");
    }
    if (auto it = r.find("choice_set"); it != r.end() && !it->is_null()) {
      if (!it->is_array() || it->size() != kChoiceSetSize) {
        throw ParseError(line, "'choice_set' must list " +
                                   std::to_string(kChoiceSetSize) + " options");
      }
      for (const auto& opt : *it) {
        if (!opt.is_object()) throw ParseError(line, "choice option is not an object");
        g.choice_set.push_back({opt.value("term", ""), opt.value("definition", "")});
      }
      auto c = r.find("correct_choice");
      if (c == r.end() || !c->is_number_integer() || c->get<int>() < 0 ||
          c->get<int>() >= static_cast<int>(kChoiceSetSize)) {
        throw ParseError(line, "'correct_choice' must index the choice set");
      }
      g.correct_choice = c->get<int>();
    }
    out.push_back(std::move(g));
  });
  return out;
}

std::vector<DisambiguationGold> load_disambiguation_gold(
    const std::filesystem::path& path) {
  std::vector<DisambiguationGold> out;
  for_each_record(path, [&](const json& r, std::size_t line) {
    DisambiguationGold g;
    g.entry_id = require_string(r, "entry_id", line);
    auto s = r.find("sentences");
    auto l = r.find("labels");
    if (s == r.end() || !s->is_array() || l == r.end() || !l->is_array()) {
      throw ParseError(line, "'sentences' and 'labels' must be arrays");
    }
    if (s->size() != l->size()) {
      throw ParseError(line, "'sentences' and 'labels' differ in length");
    }
    if (s->size() < 4 || s->size() > 10) {
      throw ParseError(line, "a set holds 4 to 10 sentences");
    }
    for (std::size_t i = 0; i < s->size(); ++i) {
      const auto& sent = (*s)[i];
      const auto& lab = (*l)[i];
      if (!sent.is_string() || !lab.is_string()) {
        throw ParseError(line, "sentences and labels must be strings");
      }
      auto label = parse_label(lab.get<std::string>());
      if (!label) throw ParseError(line, "unknown label '" + lab.get<std::string>() + "'");
      g.sentences.push_back(sent.get<std::string>());
      g.labels.push_back(*label);
    }
    out.push_back(std::move(g));
  });
  return out;
}

DetectionPrediction prediction_from_response(const CompletionResponse& resp) {
  DetectionPrediction p;
  if (resp.status != CompletionStatus::kOk) {
    p.raw = resp.text;
    p.refusal = classify_refusal(resp);
    return p;
  }
  p = parse_detection_response(resp.text);
  if (p.confidence == ParseConfidence::kLow && reads_as_decline(resp.text)) {
    p.refusal = RefusalKind::kDeclined;
  }
  return p;
}

DetectionPrediction prediction_from_record(const json& record) {
  CompletionResponse resp;
  resp.text = record.value("raw", "");
  const std::string status = record.value("status", "ok");
  auto parsed = parse_completion_status(status);
  if (!parsed) throw ParseError(0, "unknown response status '" + status + "'");
  resp.status = *parsed;

  DetectionPrediction p = prediction_from_response(resp);
  if (p.refusal) return p;
  if (auto it = record.find("choice"); it != record.end() && it->is_number_integer()) {
    p.choice_index = it->get<int>();
  }
  if (auto it = record.find("span"); it != record.end() && it->is_string()) {
    p.identified_span = it->get<std::string>();
  }
  return p;
}

std::vector<DetectionPrediction> load_detection_responses(
    const std::filesystem::path& path) {
  std::vector<DetectionPrediction> out;
  for_each_record(path, [&](const json& r, std::size_t line) {
    try {
      out.push_back(prediction_from_record(r));
    } catch (const ParseError& e) {
      throw ParseError(line, e.what());
    }
  });
  return out;
}

std::vector<std::optional<int>> load_grades(const std::filesystem::path& path,
                                            std::size_t count) {
  const CsvTable table = load_csv(path);
  const int idx = table.column("index");
  const int grade = table.column("grade");
  if (idx < 0 || grade < 0) {
    throw ParseError(1, "grades header must contain 'index' and 'grade'");
  }
  std::vector<std::optional<int>> out(count);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = r + 2;
    std::size_t i = 0;
    int g = 0;
    try {
      std::size_t used = 0;
      i = std::stoul(row[idx], &used);
      if (used != row[idx].size()) throw std::invalid_argument("index");
    } catch (const std::exception&) {
      throw ParseError(line, "bad index '" + row[idx] + "'");
    }
    if (i >= count) throw ParseError(line, "index out of range");
    const std::string_view cell = trim(row[grade]);
    if (cell.empty()) continue;
    if (cell.size() != 1 || cell[0] < '0' || cell[0] > '2') {
      throw ParseError(line, "grade must be 0, 1 or 2");
    }
    g = cell[0] - '0';
    out[i] = g;
  }
  return out;
}

json to_json(const MetricsReport& r) {
  const auto& c = r.counts;
  return json{{"accuracy", r.accuracy},
              {"f1", r.f1},
              {"precision_1", r.precision_1},
              {"recall_1", r.recall_1},
              {"retention", r.retention},
              {"counts",
               {{"tp", c.tp},
                {"fp", c.fp},
                {"tn", c.tn},
                {"fn", c.fn},
                {"discarded", c.discarded},
                {"refused", c.refused}}}};
}

namespace {

std::string pct(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << v * 100;
  return os.str();
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_detection_table(const DetectionReport& report,
                                   const std::string& column) {
  std::ostringstream os;
  os << "tier            metric " << pad(column, 10) << '\n';
  auto rows = [&](const char* tier, const MetricsReport& m) {
    os << std::left << std::setw(16) << tier << std::right << "Acc    "
       << pad(pct(m.accuracy), 10) << '\n';
    os << std::left << std::setw(16) << "" << std::right << "F1     "
       << pad(pct(m.f1), 10) << '\n';
  };
  rows("presence", report.presence);
  rows("identification", report.identification);
  if (report.definition) rows("definition", *report.definition);
  const auto& c = report.presence.counts;
  os << "items " << c.total() << ", refused " << c.refused << '\n';
  return os.str();
}

json to_json(const DetectionReport& report) {
  json j{{"presence", to_json(report.presence)},
         {"identification", to_json(report.identification)}};
  if (report.definition) j["definition"] = to_json(*report.definition);
  return j;
}

std::string format_ensemble_table(const std::vector<EnsembleReportRow>& rows) {
  std::ostringstream os;
  os << "   n   precision-1   recall-1   retention\n";
  for (const auto& r : rows) {
    os << pad(std::to_string(r.n), 4) << pad(pct(r.metrics.precision_1), 14)
       << pad(pct(r.metrics.recall_1), 11) << pad(pct(r.metrics.retention), 12)
       << '\n';
  }
  return os.str();
}

json to_json(const std::vector<EnsembleReportRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json m = to_json(r.metrics);
    m["n"] = r.n;
    arr.push_back(std::move(m));
  }
  return arr;
}

}  // namespace dogwhistle
