// speechaug/corpus.hpp

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

#ifndef SPEECHAUG_CORPUS_HPP
#define SPEECHAUG_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "speechaug/dsp.hpp"
#include "speechaug/rng.hpp"

namespace speechaug::corpus {

struct Utterance {
  std::string utt_id;
  std::string speaker_id;
  std::string audio_path;
  double duration_sec = 0.0;
  std::string transcript;
  std::vector<std::string> provenance;  // applied perturbation tags
};

struct Manifest {
  std::string name;
  std::vector<Utterance> utterances;

  double total_hours() const;
  std::vector<std::string> speakers() const;  // sorted, unique
};

// JSONL, one Utterance object per line, UTF-8.
Manifest read_manifest(const std::filesystem::path &path, const std::string &name = "");
void write_manifest(const Manifest &m, const std::filesystem::path &path);

enum class RecipeOp { pitch, speed, tempo, reverb, copy };

struct RecipeRule {
  std::vector<std::string> source_sets;
  RecipeOp op = RecipeOp::copy;
  // factors for speed/tempo; [lo, hi] cents range for pitch; unused otherwise
  std::vector<double> params;
  bool apply_volume = false;
};

struct AugmentationRecipe {
  std::vector<RecipeRule> rules;
};

AugmentationRecipe read_recipe(const std::filesystem::path &path);
void validate_recipe(const AugmentationRecipe &r);

struct Job {
  std::string source_utt_id;
  std::string source_path;
  std::string source_speaker;
  std::string source_transcript;
  std::vector<std::string> source_provenance;
  RecipeOp op = RecipeOp::copy;
  double param = 0.0;                       // factor or cents; unused for reverb/copy
  std::optional<double> volume_gain;        // resolved log-uniform gain
  std::string output_utt_id;
  std::string output_path;
  std::uint64_t derived_seed = 0;
};

struct JobPlan {
  std::vector<Job> jobs;
};

// Text normalization: NFC, then longest-match left-to-right replacement.
// `mapping` is an ordered symbol -> replacement table.
std::string normalize_text(
    const std::string &t,
    const std::vector<std::pair<std::string, std::string>> &mapping);

// Speaker-disjoint split: seeded Fisher-Yates over the sorted speaker list,
// first n_speakers go to dev.
struct Partition {
  Manifest dev;
  Manifest train;
};
Partition partition_by_speaker(const Manifest &m, int n_speakers, std::uint64_t seed);

// Expands a recipe over named source manifests into one job per
// (utterance, parameter) pair.  All randomness (pitch cents, volume gains)
// is resolved here from content-keyed derived seeds, so the plan does not
// depend on iteration order or output directory naming.
JobPlan expand_recipe(const std::map<std::string, Manifest> &sources,
                      const AugmentationRecipe &r, std::uint64_t global_seed,
                      const std::filesystem::path &out_dir);

struct HoursRow {
  std::string label;
  double hours = 0.0;
};
struct HoursReport {
  std::vector<HoursRow> rows;  // one per rule
  double base_hours = 0.0;
  double total_hours = 0.0;
};

// Hour accounting: pitch/reverb/copy preserve hours, speed/tempo contribute
// sum(hours / f) per factor, volume never changes hours.
HoursReport estimate_hours(const AugmentationRecipe &r,
                           const std::map<std::string, double> &base_hours);

struct JobResult {
  std::string output_utt_id;
  bool ok = false;
  std::string error;
};
struct RunReport {
  Manifest output;  // sorted by utt_id
  std::vector<JobResult> failures;
  std::size_t n_jobs = 0;
  std::size_t n_failed = 0;
};

// Executes a plan with `workers` threads.  Output is bit-identical for any
// worker count; per-job failures are collected, not fatal.
RunReport run_plan(const JobPlan &plan, int workers);

// Kaldi-style directory interop: wav.scp / text / utt2spk (+ spk2utt on
// export), space-separated, one record per line.
Manifest import_kaldi_dir(const std::filesystem::path &dir);
void export_kaldi_dir(const Manifest &m, const std::filesystem::path &dir);

}  // namespace speechaug::corpus

#endif  // SPEECHAUG_CORPUS_HPP
