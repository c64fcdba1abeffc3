#include "nuggetbench/corpus/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nuggetbench/core/error.hpp"

namespace nb::corpus {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr double kSumWindow = 0.005;  // published tables are rounded to 3 decimals

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string dialogue_context(const json& d, std::size_t pos) {
  std::string id = d.is_object() && d.contains("id") && d["id"].is_string()
                       ? d["id"].get<std::string>()
                       : "?";
  return "dialogue[" + std::to_string(pos) + "] id=" + id;
}

// Reads a {label: number} map into a dense vector over `domain`, absent
// labels = 0. Returns false (with a finding) on unknown labels, negative
// mass, or a pre-normalization sum outside the acceptance window.
bool read_distribution(const json& obj, const BinDomain& domain, const std::string& where,
                       const std::string& dialogue_id, std::vector<Finding>& findings,
                       std::vector<double>& out) {
  auto error = [&](std::string msg) {
    findings.push_back({Finding::Severity::Error, dialogue_id, where + ": " + std::move(msg)});
    return false;
  };
  if (!obj.is_object()) return error("expected an object of label -> mass");
  out.assign(domain.size(), 0.0);
  for (const auto& [key, value] : obj.items()) {
    std::size_t idx = domain.size();
    for (std::size_t i = 0; i < domain.size(); ++i) {
      if (domain.label(i) == key) {
        idx = i;
        break;
      }
    }
    if (idx == domain.size()) return error("unknown label '" + key + "'");
    if (!value.is_number()) return error("mass for '" + key + "' is not a number");
    double v = value.get<double>();
    if (v < 0.0) return error("negative mass for '" + key + "'");
    out[idx] = v;
  }
  double sum = 0.0;
  for (double v : out) sum += v;
  if (sum < 1.0 - kSumWindow || sum > 1.0 + kSumWindow) {
    std::ostringstream msg;
    msg << "mass sums to " << sum << ", outside [0.995, 1.005]";
    return error(msg.str());
  }
  return true;
}

bool read_vote_counts(const json& obj, const BinDomain& domain, const std::string& where,
                      const std::string& dialogue_id, std::vector<Finding>& findings,
                      std::vector<std::size_t>& out) {
  auto error = [&](std::string msg) {
    findings.push_back({Finding::Severity::Error, dialogue_id, where + ": " + std::move(msg)});
    return false;
  };
  if (!obj.is_object()) return error("expected an object of label -> vote count");
  out.assign(domain.size(), 0);
  for (const auto& [key, value] : obj.items()) {
    std::size_t idx = domain.size();
    for (std::size_t i = 0; i < domain.size(); ++i) {
      if (domain.label(i) == key) {
        idx = i;
        break;
      }
    }
    if (idx == domain.size()) return error("unknown label '" + key + "'");
    if (!value.is_number_unsigned()) {
      return error("vote count for '" + key + "' is not a non-negative integer");
    }
    out[idx] = value.get<std::size_t>();
  }
  return true;
}

bool is_raw_votes(const json& dialogue) {
  return dialogue.is_object() && dialogue.contains("annotators");
}

// One dialogue from aggregated-format JSON. Appends findings; returns the
// dialogue when it parsed well enough to keep.
std::optional<Dialogue> parse_aggregated_dialogue(const json& jd, std::size_t pos,
                                                  std::vector<Finding>& findings) {
  std::string ctx = dialogue_context(jd, pos);
  auto error = [&](const std::string& id, std::string msg) {
    findings.push_back({Finding::Severity::Error, id, ctx + ": " + std::move(msg)});
  };
  if (!jd.is_object() || !jd.contains("id") || !jd["id"].is_string()) {
    error("?", "record is not an object with a string 'id'");
    return std::nullopt;
  }
  Dialogue d;
  d.id = jd["id"].get<std::string>();
  if (!jd.contains("turns") || !jd["turns"].is_array()) {
    error(d.id, "missing 'turns' array");
    return std::nullopt;
  }
  std::size_t index = 0;
  for (const auto& jt : jd["turns"]) {
    Utterance u;
    u.index = index++;
    if (!jt.is_object() || !jt.contains("speaker") || !jt["speaker"].is_string()) {
      error(d.id, "turn " + std::to_string(u.index) + ": missing speaker");
      return std::nullopt;
    }
    try {
      u.speaker = parse_speaker(jt["speaker"].get<std::string>());
    } catch (const ParseError& e) {
      error(d.id, "turn " + std::to_string(u.index) + ": " + e.what());
      return std::nullopt;
    }
    if (jt.contains("tokens")) {
      if (!jt["tokens"].is_array()) {
        error(d.id, "turn " + std::to_string(u.index) + ": 'tokens' is not an array");
        return std::nullopt;
      }
      for (const auto& tok : jt["tokens"]) {
        if (!tok.is_string()) {
          error(d.id, "turn " + std::to_string(u.index) + ": non-string token");
          return std::nullopt;
        }
        u.tokens.push_back(tok.get<std::string>());
      }
    }
    if (!jt.contains("nugget")) {
      error(d.id, "turn " + std::to_string(u.index) + ": missing 'nugget'");
      return std::nullopt;
    }
    std::vector<double> mass;
    if (!read_distribution(jt["nugget"], *BinDomain::nuggets(),
                           "turn " + std::to_string(u.index) + " nugget", d.id, findings, mass)) {
      return std::nullopt;
    }
    u.gold_nugget = ProbabilityBins(BinDomain::nuggets(), std::move(mass));
    d.utterances.push_back(std::move(u));
  }
  if (jd.contains("quality")) {
    const auto& jq = jd["quality"];
    if (!jq.is_object()) {
      error(d.id, "'quality' is not an object");
      return std::nullopt;
    }
    std::array<ProbabilityBins, kMeasureCount> quality;
    for (std::size_t m = 0; m < kMeasureCount; ++m) {
      std::string name(kMeasureNames[m]);
      if (!jq.contains(name)) {
        error(d.id, "quality must cover all of A, E, S (missing " + name + ")");
        return std::nullopt;
      }
      std::vector<double> mass;
      if (!read_distribution(jq[name], *BinDomain::scores(), "quality " + name, d.id, findings,
                             mass)) {
        return std::nullopt;
      }
      quality[m] = ProbabilityBins(BinDomain::scores(), std::move(mass));
    }
    d.quality = std::move(quality);
  }
  return d;
}

std::optional<Dialogue> parse_raw_votes_dialogue(const json& jd, std::size_t pos,
                                                 std::vector<Finding>& findings) {
  std::string ctx = dialogue_context(jd, pos);
  auto error = [&](const std::string& id, std::string msg) {
    findings.push_back({Finding::Severity::Error, id, ctx + ": " + std::move(msg)});
  };
  if (!jd.is_object() || !jd.contains("id") || !jd["id"].is_string()) {
    error("?", "record is not an object with a string 'id'");
    return std::nullopt;
  }
  std::string id = jd["id"].get<std::string>();
  if (!jd.contains("annotators") || !jd["annotators"].is_number_unsigned() ||
      jd["annotators"].get<std::size_t>() == 0) {
    error(id, "raw-votes record needs a positive integer 'annotators'");
    return std::nullopt;
  }
  if (!jd.contains("turns") || !jd["turns"].is_array()) {
    error(id, "missing 'turns' array");
    return std::nullopt;
  }

  AnnotationSet votes;
  votes.dialogue_id = id;
  votes.annotator_count = jd["annotators"].get<std::size_t>();

  Dialogue d;
  d.id = id;
  std::size_t index = 0;
  for (const auto& jt : jd["turns"]) {
    Utterance u;
    u.index = index++;
    if (!jt.is_object() || !jt.contains("speaker") || !jt["speaker"].is_string()) {
      error(id, "turn " + std::to_string(u.index) + ": missing speaker");
      return std::nullopt;
    }
    try {
      u.speaker = parse_speaker(jt["speaker"].get<std::string>());
    } catch (const ParseError& e) {
      error(id, "turn " + std::to_string(u.index) + ": " + e.what());
      return std::nullopt;
    }
    if (jt.contains("tokens") && jt["tokens"].is_array()) {
      for (const auto& tok : jt["tokens"]) {
        if (tok.is_string()) u.tokens.push_back(tok.get<std::string>());
      }
    }
    if (!jt.contains("nugget")) {
      error(id, "turn " + std::to_string(u.index) + ": missing 'nugget' votes");
      return std::nullopt;
    }
    std::vector<std::size_t> counts;
    if (!read_vote_counts(jt["nugget"], *BinDomain::nuggets(),
                          "turn " + std::to_string(u.index) + " nugget votes", id, findings,
                          counts)) {
      return std::nullopt;
    }
    std::array<std::size_t, kNuggetCount> arr{};
    for (std::size_t i = 0; i < kNuggetCount; ++i) arr[i] = counts[i];
    votes.per_utterance_votes.push_back(arr);
    d.utterances.push_back(std::move(u));
  }
  if (jd.contains("quality")) {
    const auto& jq = jd["quality"];
    if (!jq.is_object()) {
      error(id, "'quality' is not an object");
      return std::nullopt;
    }
    std::array<std::array<std::size_t, kScoreBinCount>, kMeasureCount> measure_votes{};
    for (std::size_t m = 0; m < kMeasureCount; ++m) {
      std::string name(kMeasureNames[m]);
      if (!jq.contains(name)) {
        error(id, "quality votes must cover all of A, E, S (missing " + name + ")");
        return std::nullopt;
      }
      std::vector<std::size_t> counts;
      if (!read_vote_counts(jq[name], *BinDomain::scores(), "quality " + name + " votes", id,
                            findings, counts)) {
        return std::nullopt;
      }
      for (std::size_t i = 0; i < kScoreBinCount; ++i) measure_votes[m][i] = counts[i];
    }
    votes.per_measure_votes = measure_votes;
  }

  try {
    AggregatedAnnotations agg = aggregate_annotations(votes);
    for (std::size_t u = 0; u < d.utterances.size(); ++u) {
      d.utterances[u].gold_nugget = std::move(agg.per_utterance[u]);
    }
    d.quality = std::move(agg.per_measure);
  } catch (const ValidationError& e) {
    error(id, e.what());
    return std::nullopt;
  }
  return d;
}

ordered_json distribution_to_json(const ProbabilityBins& p) {
  ordered_json obj = ordered_json::object();
  for (std::size_t i = 0; i < p.size(); ++i) {
    obj[p.domain().label(i)] = p.mass(i);
  }
  return obj;
}

}  // namespace

ParseResult parse_corpus_lenient(const std::string& path, CorpusFormat format) {
  json root = load_json_file(path);
  ParseResult result;
  if (!root.is_array()) {
    result.findings.push_back(
        {Finding::Severity::Error, "-", path + ": top level must be an array of dialogues"});
    return result;
  }
  for (std::size_t pos = 0; pos < root.size(); ++pos) {
    const json& jd = root[pos];
    bool raw = format == CorpusFormat::RawVotes ||
               (format == CorpusFormat::Auto && is_raw_votes(jd));
    std::optional<Dialogue> d = raw ? parse_raw_votes_dialogue(jd, pos, result.findings)
                                    : parse_aggregated_dialogue(jd, pos, result.findings);
    if (!d) continue;
    auto domain_findings = validate_dialogue(*d);
    bool keep = true;
    for (auto& f : domain_findings) {
      if (f.severity == Finding::Severity::Error) keep = false;
      result.findings.push_back(std::move(f));
    }
    if (keep) result.dialogues.push_back(std::move(*d));
  }
  return result;
}

Corpus parse_corpus(const std::string& path, CorpusFormat format) {
  ParseResult result = parse_corpus_lenient(path, format);
  for (const auto& f : result.findings) {
    if (f.severity == Finding::Severity::Error) {
      throw ValidationError(f.dialogue_id + ": " + f.message);
    }
  }
  return std::move(result.dialogues);
}

std::string serialize_corpus(const Corpus& corpus) {
  ordered_json root = ordered_json::array();
  for (const auto& d : corpus) {
    ordered_json jd;
    jd["id"] = d.id;
    ordered_json turns = ordered_json::array();
    for (const auto& u : d.utterances) {
      ordered_json jt;
      jt["speaker"] = speaker_name(u.speaker);
      jt["tokens"] = u.tokens;
      jt["nugget"] = distribution_to_json(u.gold_nugget);
      turns.push_back(std::move(jt));
    }
    jd["turns"] = std::move(turns);
    if (d.quality) {
      ordered_json jq;
      for (std::size_t m = 0; m < kMeasureCount; ++m) {
        jq[std::string(kMeasureNames[m])] = distribution_to_json((*d.quality)[m]);
      }
      jd["quality"] = std::move(jq);
    }
    root.push_back(std::move(jd));
  }
  return root.dump(2) + "\n";
}

void write_corpus(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << serialize_corpus(corpus);
}

void PredictionSet::insert(PredictedDialogue d) {
  std::string id = d.id;
  if (by_id.emplace(id, std::move(d)).second) order.push_back(id);
}

PredictionSet parse_predictions(const std::string& path) {
  json root = load_json_file(path);
  if (!root.is_array()) throw ParseError(path + ": top level must be an array");
  PredictionSet preds;
  for (std::size_t pos = 0; pos < root.size(); ++pos) {
    const json& jd = root[pos];
    if (!jd.is_object() || !jd.contains("id") || !jd["id"].is_string()) {
      throw ParseError(path + ": " + dialogue_context(jd, pos) +
                       ": record is not an object with a string 'id'");
    }
    PredictedDialogue d;
    d.id = jd["id"].get<std::string>();
    std::vector<Finding> findings;
    if (jd.contains("turns")) {
      if (!jd["turns"].is_array()) throw ParseError(d.id + ": 'turns' is not an array");
      std::size_t index = 0;
      for (const auto& jt : jd["turns"]) {
        if (!jt.is_object() || !jt.contains("speaker") || !jt["speaker"].is_string()) {
          throw ParseError(d.id + ": turn " + std::to_string(index) + ": missing speaker");
        }
        d.speakers.push_back(parse_speaker(jt["speaker"].get<std::string>()));
        if (jt.contains("nugget")) {
          std::vector<double> mass;
          if (!read_distribution(jt["nugget"], *BinDomain::nuggets(),
                                 "turn " + std::to_string(index) + " nugget", d.id, findings,
                                 mass)) {
            throw ParseError(d.id + ": " + findings.back().message);
          }
          d.nuggets.emplace_back(BinDomain::nuggets(), std::move(mass));
        } else {
          d.nuggets.emplace_back();
        }
        ++index;
      }
    }
    if (jd.contains("quality")) {
      const auto& jq = jd["quality"];
      if (!jq.is_object()) throw ParseError(d.id + ": 'quality' is not an object");
      std::array<ProbabilityBins, kMeasureCount> quality;
      for (std::size_t m = 0; m < kMeasureCount; ++m) {
        std::string name(kMeasureNames[m]);
        if (!jq.contains(name)) {
          throw ParseError(d.id + ": predicted quality must cover all of A, E, S (missing " +
                           name + ")");
        }
        std::vector<double> mass;
        if (!read_distribution(jq[name], *BinDomain::scores(), "quality " + name, d.id, findings,
                               mass)) {
          throw ParseError(d.id + ": " + findings.back().message);
        }
        quality[m] = ProbabilityBins(BinDomain::scores(), std::move(mass));
      }
      d.quality = std::move(quality);
    }
    preds.insert(std::move(d));
  }
  return preds;
}

std::string serialize_predictions(const PredictionSet& preds) {
  ordered_json root = ordered_json::array();
  for (const auto& id : preds.order) {
    const PredictedDialogue& d = preds.by_id.at(id);
    ordered_json jd;
    jd["id"] = d.id;
    if (!d.speakers.empty()) {
      ordered_json turns = ordered_json::array();
      for (std::size_t i = 0; i < d.speakers.size(); ++i) {
        ordered_json jt;
        jt["speaker"] = speaker_name(d.speakers[i]);
        if (i < d.nuggets.size() && !d.nuggets[i].empty()) {
          jt["nugget"] = distribution_to_json(d.nuggets[i]);
        }
        turns.push_back(std::move(jt));
      }
      jd["turns"] = std::move(turns);
    }
    if (d.quality) {
      ordered_json jq;
      for (std::size_t m = 0; m < kMeasureCount; ++m) {
        jq[std::string(kMeasureNames[m])] = distribution_to_json((*d.quality)[m]);
      }
      jd["quality"] = std::move(jq);
    }
    root.push_back(std::move(jd));
  }
  return root.dump(2) + "\n";
}

void write_predictions(const std::string& path, const PredictionSet& preds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << serialize_predictions(preds);
}

}  // namespace nb::corpus
