// src/corpus.cpp

// Copyright 2026  speechaug authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "speechaug/corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "speechaug/audio.hpp"
#include "speechaug/error.hpp"
#include "speechaug/text.hpp"

namespace speechaug::corpus {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string format_factor(double f) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", f);
  return buf;
}

std::string op_name(RecipeOp op) {
  switch (op) {
    case RecipeOp::pitch: return "pitch";
    case RecipeOp::speed: return "speed";
    case RecipeOp::tempo: return "tempo";
    case RecipeOp::reverb: return "reverb";
    case RecipeOp::copy: return "copy";
  }
  return "?";
}

RecipeOp op_from_name(const std::string &s) {
  if (s == "pitch") return RecipeOp::pitch;
  if (s == "speed") return RecipeOp::speed;
  if (s == "tempo") return RecipeOp::tempo;
  if (s == "reverb") return RecipeOp::reverb;
  if (s == "copy") return RecipeOp::copy;
  throw MalformedRecipe("unknown op \"" + s + "\"");
}

std::string rule_label(const RecipeRule &rule) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < rule.source_sets.size(); ++i) {
    if (i) os << ',';
    os << rule.source_sets[i];
  }
  os << "} + ";
  switch (rule.op) {
    case RecipeOp::pitch: os << "pp"; break;
    case RecipeOp::speed: os << "sp"; break;
    case RecipeOp::tempo: os << "tp"; break;
    case RecipeOp::reverb: os << "rp"; break;
    case RecipeOp::copy: os << "cp"; break;
  }
  if (rule.op == RecipeOp::speed || rule.op == RecipeOp::tempo) {
    os << "@{";
    for (std::size_t i = 0; i < rule.params.size(); ++i) {
      if (i) os << ',';
      os << format_factor(rule.params[i]);
    }
    os << '}';
  }
  if (rule.apply_volume) os << " + vp";
  return os.str();
}

}  // namespace

double Manifest::total_hours() const {
  double sec = 0.0;
  for (const auto &u : utterances) sec += u.duration_sec;
  return sec / 3600.0;
}

std::vector<std::string> Manifest::speakers() const {
  std::set<std::string> s;
  for (const auto &u : utterances) s.insert(u.speaker_id);
  return {s.begin(), s.end()};
}

Manifest read_manifest(const std::filesystem::path &path, const std::string &name) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open manifest " + path.string());
  Manifest m;
  m.name = name.empty() ? path.stem().string() : name;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const std::exception &e) {
      throw MalformedManifest(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    Utterance u;
    u.utt_id = j.at("utt_id").get<std::string>();
    u.speaker_id = j.at("speaker_id").get<std::string>();
    u.audio_path = j.at("audio_path").get<std::string>();
    u.duration_sec = j.at("duration_sec").get<double>();
    u.transcript = j.value("transcript", std::string());
    if (j.contains("provenance"))
      u.provenance = j["provenance"].get<std::vector<std::string>>();
    if (!seen.insert(u.utt_id).second)
      throw MalformedManifest("duplicate utt_id \"" + u.utt_id + "\" in " + path.string());
    m.utterances.push_back(std::move(u));
  }
  return m;
}

void write_manifest(const Manifest &m, const std::filesystem::path &path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open for write: " + path.string());
  for (const auto &u : m.utterances) {
    ordered_json j;
    j["utt_id"] = u.utt_id;
    j["speaker_id"] = u.speaker_id;
    j["audio_path"] = u.audio_path;
    j["duration_sec"] = u.duration_sec;
    j["transcript"] = u.transcript;
    j["provenance"] = u.provenance;
    f << j.dump() << '\n';
  }
  if (!f) throw IoError("write failed: " + path.string());
}

AugmentationRecipe read_recipe(const std::filesystem::path &path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open recipe " + path.string());
  ordered_json j;
  try {
    f >> j;
  } catch (const std::exception &e) {
    throw MalformedRecipe(path.string() + ": " + e.what());
  }
  AugmentationRecipe r;
  for (const auto &jr : j.at("rules")) {
    RecipeRule rule;
    rule.source_sets = jr.at("sources").get<std::vector<std::string>>();
    rule.op = op_from_name(jr.at("op").get<std::string>());
    if (jr.contains("params")) rule.params = jr["params"].get<std::vector<double>>();
    rule.apply_volume = jr.value("volume", false);
    r.rules.push_back(std::move(rule));
  }
  validate_recipe(r);
  return r;
}

void validate_recipe(const AugmentationRecipe &r) {
  for (const auto &rule : r.rules) {
    if (rule.source_sets.empty()) throw MalformedRecipe("rule with no source sets");
    switch (rule.op) {
      case RecipeOp::speed:
      case RecipeOp::tempo:
        if (rule.params.empty())
          throw MalformedRecipe("speed/tempo rule needs at least one factor");
        for (double f : rule.params)
          if (!(f >= 0.5 && f <= 2.0))
            throw MalformedRecipe("factor " + format_factor(f) + " outside [0.5, 2]");
        break;
      case RecipeOp::pitch: {
        if (rule.params.size() != 0 && rule.params.size() != 2)
          throw MalformedRecipe("pitch rule params must be [lo, hi] cents");
        if (rule.params.size() == 2) {
          if (rule.params[0] > rule.params[1])
            throw MalformedRecipe("pitch range reversed");
          for (double c : rule.params)
            if (!(c >= -1200.0 && c <= 1200.0))
              throw MalformedRecipe("cents outside [-1200, 1200]");
        }
        break;
      }
      case RecipeOp::reverb:
      case RecipeOp::copy:
        break;
    }
  }
}

std::string normalize_text(
    const std::string &t,
    const std::vector<std::pair<std::string, std::string>> &mapping) {
  for (const auto &[key, _] : mapping)
    if (key.empty()) throw MalformedRecipe("empty mapping key");
  const std::string s = text::nfc(t);

  // longest match first; stable for equal lengths (table order)
  std::vector<std::size_t> order(mapping.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mapping[a].first.size() > mapping[b].first.size();
  });

  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    bool matched = false;
    for (std::size_t k : order) {
      const std::string &key = mapping[k].first;
      if (s.compare(i, key.size(), key) == 0) {
        out += mapping[k].second;
        i += key.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    // copy one whole UTF-8 sequence
    std::size_t len = 1;
    const unsigned char c = s[i];
    if ((c & 0xE0) == 0xC0) len = 2;
    else if ((c & 0xF0) == 0xE0) len = 3;
    else if ((c & 0xF8) == 0xF0) len = 4;
    len = std::min(len, s.size() - i);
    out.append(s, i, len);
    i += len;
  }
  return out;
}

Partition partition_by_speaker(const Manifest &m, int n_speakers, std::uint64_t seed) {
  std::vector<std::string> spk = m.speakers();
  if (n_speakers < 0 || static_cast<std::size_t>(n_speakers) > spk.size())
    throw TooManySpeakers("asked for " + std::to_string(n_speakers) + " of " +
                          std::to_string(spk.size()) + " speakers");
  SplitMix64 rng(seed);
  for (std::size_t i = spk.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    std::swap(spk[i - 1], spk[j]);
  }
  std::set<std::string> dev_spk(spk.begin(), spk.begin() + n_speakers);

  Partition p;
  p.dev.name = m.name + "-dev";
  p.train.name = m.name + "-train";
  for (const auto &u : m.utterances)
    (dev_spk.count(u.speaker_id) ? p.dev : p.train).utterances.push_back(u);
  return p;
}

JobPlan expand_recipe(const std::map<std::string, Manifest> &sources,
                      const AugmentationRecipe &r, std::uint64_t global_seed,
                      const std::filesystem::path &out_dir) {
  validate_recipe(r);
  JobPlan plan;
  std::set<std::string> ids;

  auto finish_job = [&](Job job, const Utterance &src, const std::string &tag) {
    job.output_utt_id = src.utt_id + "-" + tag;
    if (job.volume_gain) job.output_utt_id += "-vp";
    if (!ids.insert(job.output_utt_id).second)
      throw DuplicateOutputId(job.output_utt_id);
    job.output_path = (out_dir / (job.output_utt_id + ".wav")).string();
    job.derived_seed = derive_seed(global_seed, job.output_utt_id);
    plan.jobs.push_back(std::move(job));
  };

  for (const auto &rule : r.rules) {
    for (const auto &set_name : rule.source_sets) {
      auto it = sources.find(set_name);
      if (it == sources.end()) throw UnknownSourceSet(set_name);
      for (const auto &src : it->second.utterances) {
        auto base_job = [&] {
          Job j;
          j.source_utt_id = src.utt_id;
          j.source_path = src.audio_path;
          j.source_speaker = src.speaker_id;
          j.source_transcript = src.transcript;
          j.source_provenance = src.provenance;
          j.op = rule.op;
          return j;
        };
        auto resolve_volume = [&](Job &j) {
          if (!rule.apply_volume) return;
          // log-uniform over [0.125, 2]; keyed on content, not paths
          SplitMix64 g(derive_seed(global_seed, src.utt_id + ":" + op_name(rule.op) + ":vol"));
          const double lo = std::log(0.125), hi = std::log(2.0);
          j.volume_gain = std::exp(lo + (hi - lo) * g.uniform_real());
        };
        switch (rule.op) {
          case RecipeOp::pitch: {
            const double lo = rule.params.empty() ? 250.0 : rule.params[0];
            const double hi = rule.params.empty() ? 370.0 : rule.params[1];
            SplitMix64 g(derive_seed(global_seed, src.utt_id + ":pitch"));
            Job j = base_job();
            j.param = static_cast<double>(
                g.uniform_int(static_cast<std::int64_t>(std::ceil(lo)),
                              static_cast<std::int64_t>(std::floor(hi))));
            resolve_volume(j);
            const std::string tag = "pp" + format_factor(j.param);
            finish_job(std::move(j), src, tag);
            break;
          }
          case RecipeOp::speed:
          case RecipeOp::tempo:
            for (double f : rule.params) {
              Job j = base_job();
              j.param = f;
              resolve_volume(j);
              const char *prefix = rule.op == RecipeOp::speed ? "sp" : "tp";
              finish_job(std::move(j), src, prefix + format_factor(f));
            }
            break;
          case RecipeOp::reverb: {
            Job j = base_job();
            resolve_volume(j);
            finish_job(std::move(j), src, "rp");
            break;
          }
          case RecipeOp::copy: {
            Job j = base_job();
            resolve_volume(j);
            finish_job(std::move(j), src, "cp");
            break;
          }
        }
      }
    }
  }
  return plan;
}

HoursReport estimate_hours(const AugmentationRecipe &r,
                           const std::map<std::string, double> &base_hours) {
  HoursReport rep;
  for (const auto &[_, h] : base_hours) rep.base_hours += h;
  rep.total_hours = rep.base_hours;
  for (const auto &rule : r.rules) {
    double src_hours = 0.0;
    for (const auto &set_name : rule.source_sets) {
      auto it = base_hours.find(set_name);
      if (it == base_hours.end()) throw UnknownSourceSet(set_name);
      src_hours += it->second;
    }
    double h = 0.0;
    switch (rule.op) {
      case RecipeOp::speed:
      case RecipeOp::tempo:
        for (double f : rule.params) h += src_hours / f;
        break;
      case RecipeOp::pitch:
      case RecipeOp::reverb:
      case RecipeOp::copy:
        h = src_hours;
        break;
    }
    rep.rows.push_back({rule_label(rule), h});
    rep.total_hours += h;
  }
  return rep;
}

RunReport run_plan(const JobPlan &plan, int workers) {
  if (workers < 1) workers = 1;
  struct Slot {
    bool ok = false;
    std::string error;
    Utterance utt;
  };
  std::vector<Slot> slots(plan.jobs.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= plan.jobs.size()) return;
      const Job &job = plan.jobs[i];
      Slot &slot = slots[i];
      try {
        AudioBuffer buf = read_wav(job.source_path);
        AudioBuffer out;
        switch (job.op) {
          case RecipeOp::pitch: out = dsp::pitch_shift_cents(buf, job.param); break;
          case RecipeOp::speed: out = dsp::speed_perturb(buf, job.param); break;
          case RecipeOp::tempo: out = dsp::tempo_perturb(buf, job.param); break;
          case RecipeOp::reverb: out = dsp::reverberate(buf); break;
          case RecipeOp::copy: out = std::move(buf); break;
        }
        if (job.volume_gain) out = dsp::volume_scale(out, *job.volume_gain);
        write_wav(out, job.output_path);

        Utterance u;
        u.utt_id = job.output_utt_id;
        u.speaker_id = job.source_speaker;
        u.audio_path = job.output_path;
        u.duration_sec = out.duration_seconds();
        u.transcript = job.source_transcript;
        u.provenance = job.source_provenance;
        switch (job.op) {
          case RecipeOp::pitch: u.provenance.push_back("pp" + format_factor(job.param)); break;
          case RecipeOp::speed: u.provenance.push_back("sp" + format_factor(job.param)); break;
          case RecipeOp::tempo: u.provenance.push_back("tp" + format_factor(job.param)); break;
          case RecipeOp::reverb: u.provenance.push_back("rp"); break;
          case RecipeOp::copy: u.provenance.push_back("cp"); break;
        }
        if (job.volume_gain)
          u.provenance.push_back("vp" + format_factor(*job.volume_gain));
        slot.utt = std::move(u);
        slot.ok = true;
      } catch (const std::exception &e) {
        slot.error = e.what();
      }
    }
  };

  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto &t : pool) t.join();

  RunReport rep;
  rep.n_jobs = plan.jobs.size();
  rep.output.name = "augmented";
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].ok) {
      rep.output.utterances.push_back(std::move(slots[i].utt));
    } else {
      rep.failures.push_back({plan.jobs[i].output_utt_id, false, slots[i].error});
      ++rep.n_failed;
    }
  }
  std::sort(rep.output.utterances.begin(), rep.output.utterances.end(),
            [](const Utterance &a, const Utterance &b) { return a.utt_id < b.utt_id; });
  return rep;
}

namespace {

// "key rest-of-line" -> (key, rest); rest may be empty
std::pair<std::string, std::string> split_record(const std::string &line,
                                                 const std::string &file) {
  const std::size_t sp = line.find_first_of(" \t");
  if (sp == std::string::npos || sp == 0)
    throw MalformedScpLine(file + ": \"" + line + "\"");
  std::size_t start = line.find_first_not_of(" \t", sp);
  return {line.substr(0, sp), start == std::string::npos ? "" : line.substr(start)};
}

std::map<std::string, std::string> read_kaldi_table(const std::filesystem::path &p,
                                                    std::vector<std::string> *order) {
  std::ifstream f(p);
  if (!f) throw MissingFile(p.string());
  std::map<std::string, std::string> table;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto [key, value] = split_record(line, p.filename().string());
    table[key] = value;
    if (order) order->push_back(key);
  }
  return table;
}

}  // namespace

Manifest import_kaldi_dir(const std::filesystem::path &dir) {
  std::vector<std::string> order;
  auto wav = read_kaldi_table(dir / "wav.scp", &order);
  auto txt = read_kaldi_table(dir / "text", nullptr);
  auto u2s = read_kaldi_table(dir / "utt2spk", nullptr);

  Manifest m;
  m.name = dir.filename().string();
  for (const auto &utt_id : order) {
    Utterance u;
    u.utt_id = utt_id;
    u.audio_path = wav.at(utt_id);
    auto t = txt.find(utt_id);
    if (t != txt.end()) u.transcript = t->second;
    auto s = u2s.find(utt_id);
    if (s == u2s.end()) throw MalformedScpLine("utt2spk missing entry for " + utt_id);
    u.speaker_id = s->second;
    m.utterances.push_back(std::move(u));
  }
  return m;
}

void export_kaldi_dir(const Manifest &m, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  std::ofstream wav(dir / "wav.scp", std::ios::trunc);
  std::ofstream txt(dir / "text", std::ios::trunc);
  std::ofstream u2s(dir / "utt2spk", std::ios::trunc);
  if (!wav || !txt || !u2s) throw IoError("cannot write to " + dir.string());

  std::map<std::string, std::vector<std::string>> spk2utt;
  for (const auto &u : m.utterances) {
    wav << u.utt_id << ' ' << u.audio_path << '\n';
    txt << u.utt_id << ' ' << u.transcript << '\n';
    u2s << u.utt_id << ' ' << u.speaker_id << '\n';
    spk2utt[u.speaker_id].push_back(u.utt_id);
  }
  std::ofstream s2u(dir / "spk2utt", std::ios::trunc);
  for (const auto &[spk, utts] : spk2utt) {
    s2u << spk;
    for (const auto &u : utts) s2u << ' ' << u;
    s2u << '\n';
  }
}

}  // namespace speechaug::corpus
