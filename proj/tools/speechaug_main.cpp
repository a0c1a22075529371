// tools/speechaug_main.cpp

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

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "speechaug/audio.hpp"
#include "speechaug/corpus.hpp"
#include "speechaug/error.hpp"
#include "speechaug/features.hpp"
#include "speechaug/scoring.hpp"
#include "speechaug/text.hpp"

namespace {

using namespace speechaug;
namespace fs = std::filesystem;

// exit codes: 0 success, 1 job/data failure, 2 usage error
constexpr int kOk = 0, kDataError = 1, kUsageError = 2;

std::pair<std::string, std::string> split_kv(const std::string &s, const char *what) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0)
    throw CLI::ValidationError(std::string(what) + " must be name=value, got \"" + s + "\"");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

std::map<std::string, std::string> read_trans_file(const fs::path &path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto sp = line.find_first_of(" \t");
    if (sp == std::string::npos)
      out[line] = "";
    else
      out[line.substr(0, sp)] = line.substr(line.find_first_not_of(" \t", sp) == std::string::npos
                                                ? line.size()
                                                : line.find_first_not_of(" \t", sp));
  }
  return out;
}

int cmd_augment(const std::string &recipe_path, const std::vector<std::string> &manifest_args,
                const std::string &out_dir, std::uint64_t seed, int workers) {
  auto recipe = corpus::read_recipe(recipe_path);
  std::map<std::string, corpus::Manifest> sources;
  for (const auto &arg : manifest_args) {
    auto [name, path] = split_kv(arg, "--manifest");
    sources[name] = corpus::read_manifest(path, name);
  }
  fs::create_directories(out_dir);
  auto plan = corpus::expand_recipe(sources, recipe, seed, out_dir);
  auto report = corpus::run_plan(plan, workers);
  corpus::write_manifest(report.output, fs::path(out_dir) / "manifest.jsonl");

  nlohmann::ordered_json j;
  j["jobs"] = report.n_jobs;
  j["failed"] = report.n_failed;
  j["output_hours"] = report.output.total_hours();
  j["failures"] = nlohmann::ordered_json::array();
  for (const auto &f : report.failures)
    j["failures"].push_back({{"utt_id", f.output_utt_id}, {"error", f.error}});
  std::ofstream rf(fs::path(out_dir) / "run_report.json", std::ios::trunc);
  rf << j.dump(2) << '\n';

  for (const auto &f : report.failures)
    std::cerr << "FAILED " << f.output_utt_id << ": " << f.error << '\n';
  std::cout << report.n_jobs - report.n_failed << "/" << report.n_jobs
            << " jobs ok, manifest: " << (fs::path(out_dir) / "manifest.jsonl").string() << '\n';
  return report.n_failed == 0 ? kOk : kDataError;
}

int cmd_hours(const std::string &recipe_path, const std::vector<std::string> &base_args) {
  auto recipe = corpus::read_recipe(recipe_path);
  std::map<std::string, double> base;
  for (const auto &arg : base_args) {
    auto [name, value] = split_kv(arg, "--base");
    base[name] = std::stod(value);
  }
  auto rep = corpus::estimate_hours(recipe, base);
  std::printf("%-60s %10.1f\n", "base sets", rep.base_hours);
  for (const auto &row : rep.rows) std::printf("%-60s %10.1f\n", row.label.c_str(), row.hours);
  std::printf("%-60s %10.1f\n", "total", rep.total_hours);
  return kOk;
}

int cmd_cer(const std::string &ref_path, const std::string &hyp_path, bool score_missing) {
  auto ref = read_trans_file(ref_path);
  auto hyp = read_trans_file(hyp_path);
  std::vector<std::string> missing_hyp, missing_ref;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto &[id, r] : ref) {
    auto h = hyp.find(id);
    if (h == hyp.end())
      missing_hyp.push_back(id);
    else
      pairs.emplace_back(r, h->second);
  }
  for (const auto &[id, h] : hyp)
    if (!ref.count(id)) missing_ref.push_back(id);

  if (!missing_hyp.empty() || !missing_ref.empty()) {
    for (const auto &id : missing_hyp) std::cerr << "missing hypothesis: " << id << '\n';
    for (const auto &id : missing_ref) std::cerr << "missing reference: " << id << '\n';
    if (!score_missing) {
      std::cerr << "unmatched utterance ids (use --score-missing to score anyway)\n";
      return kDataError;
    }
    // score-missing: absent hypothesis = full deletions, absent reference =
    // full insertions
    for (const auto &id : missing_hyp) pairs.emplace_back(ref.at(id), "");
    for (const auto &id : missing_ref) pairs.emplace_back("", hyp.at(id));
  }
  const double rate = scoring::cer(pairs);
  std::printf("CER %.4f (%zu utterances)\n", rate, pairs.size());
  return kOk;
}

int cmd_partition(const std::string &manifest_path, int n_speakers, std::uint64_t seed,
                  const std::string &dev_out, const std::string &train_out) {
  auto m = corpus::read_manifest(manifest_path);
  auto p = corpus::partition_by_speaker(m, n_speakers, seed);
  corpus::write_manifest(p.dev, dev_out);
  corpus::write_manifest(p.train, train_out);
  std::cout << "dev: " << p.dev.utterances.size() << " utts, "
            << p.dev.speakers().size() << " speakers; train: "
            << p.train.utterances.size() << " utts, " << p.train.speakers().size()
            << " speakers\n";
  return kOk;
}

int cmd_normalize(const std::string &mapping_path, const std::string &in_path,
                  const std::string &out_path) {
  std::ifstream mf(mapping_path);
  if (!mf) throw IoError("cannot open mapping " + mapping_path);
  nlohmann::ordered_json j;
  mf >> j;
  std::vector<std::pair<std::string, std::string>> mapping;
  for (const auto &[k, v] : j.items()) mapping.emplace_back(k, v.get<std::string>());

  std::ifstream in(in_path);
  if (!in) throw IoError("cannot open " + in_path);
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw IoError("cannot open for write " + out_path);
  std::string line;
  while (std::getline(in, line)) out << corpus::normalize_text(line, mapping) << '\n';
  return kOk;
}

int cmd_fbank(const std::string &wav_path, const std::string &out_path,
              const std::string &csv_path) {
  auto buf = read_wav(wav_path);
  auto m = features::compute_fbank(buf);
  features::write_fbm1(m, out_path);
  if (!csv_path.empty()) features::write_csv(m, csv_path);
  std::cout << m.rows() << " frames x " << m.cols() << " bins -> " << out_path << '\n';
  return kOk;
}

int cmd_specaug(const std::string &in_path, const std::string &out_path, std::uint64_t seed,
                features::SpecAugmentConfig cfg) {
  auto m = features::read_fbm1(in_path);
  auto masked = features::spec_augment(m, cfg, seed);
  features::write_fbm1(masked, out_path);
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"speech corpus augmentation toolkit"};
  app.require_subcommand(1);

  // augment
  auto *augment = app.add_subcommand("augment", "expand a recipe and render audio");
  std::string recipe_path, out_dir;
  std::vector<std::string> manifest_args;
  std::uint64_t seed = 0;
  int workers = 1;
  augment->add_option("--recipe", recipe_path)->required();
  augment->add_option("--manifest", manifest_args, "name=path, repeatable")->required();
  augment->add_option("--out", out_dir)->required();
  augment->add_option("--seed", seed)->required();
  augment->add_option("--workers", workers)->check(CLI::PositiveNumber);

  // hours
  auto *hours = app.add_subcommand("hours", "hour accounting for a recipe");
  std::string hours_recipe;
  std::vector<std::string> base_args;
  hours->add_option("--recipe", hours_recipe)->required();
  hours->add_option("--base", base_args, "name=hours, repeatable")->required();

  // cer
  auto *cer_cmd = app.add_subcommand("cer", "character error rate");
  std::string ref_path, hyp_path;
  bool score_missing = false;
  cer_cmd->add_option("--ref", ref_path)->required();
  cer_cmd->add_option("--hyp", hyp_path)->required();
  cer_cmd->add_flag("--score-missing", score_missing,
                    "score unmatched ids as full deletions/insertions");

  // partition
  auto *partition = app.add_subcommand("partition", "speaker-disjoint dev/train split");
  std::string part_manifest, dev_out = "dev.jsonl", train_out = "train.jsonl";
  int n_speakers = 0;
  std::uint64_t part_seed = 0;
  partition->add_option("--manifest", part_manifest)->required();
  partition->add_option("--speakers", n_speakers)->required();
  partition->add_option("--seed", part_seed)->required();
  partition->add_option("--dev-out", dev_out);
  partition->add_option("--train-out", train_out);

  // normalize
  auto *normalize = app.add_subcommand("normalize", "text normalization");
  std::string mapping_path, norm_in, norm_out;
  normalize->add_option("--mapping", mapping_path, "JSON object, symbol -> replacement")
      ->required();
  normalize->add_option("--in", norm_in)->required();
  normalize->add_option("--out", norm_out)->required();

  // fbank
  auto *fbank = app.add_subcommand("fbank", "80-dim log-mel FBANK features");
  std::string fb_wav, fb_out, fb_csv;
  fbank->add_option("--wav", fb_wav)->required();
  fbank->add_option("--out", fb_out)->required();
  fbank->add_option("--csv", fb_csv, "optional CSV export");

  // specaug
  auto *specaug = app.add_subcommand("specaug", "apply SpecAugment to an FBM1 file");
  std::string sa_in, sa_out;
  std::uint64_t sa_seed = 0;
  features::SpecAugmentConfig sa_cfg;
  specaug->add_option("--in", sa_in)->required();
  specaug->add_option("--out", sa_out)->required();
  specaug->add_option("--seed", sa_seed)->required();
  specaug->add_option("--freq-masks", sa_cfg.n_freq_masks);
  specaug->add_option("--freq-width", sa_cfg.max_freq_width);
  specaug->add_option("--time-masks", sa_cfg.n_time_masks);
  specaug->add_option("--time-width", sa_cfg.max_time_width);
  specaug->add_flag("--time-warp", sa_cfg.time_warp_enabled);
  specaug->add_option("--max-warp", sa_cfg.max_warp);

  // import-kaldi / export-kaldi
  auto *imp = app.add_subcommand("import-kaldi", "Kaldi dir -> manifest");
  std::string imp_dir, imp_out;
  imp->add_option("--dir", imp_dir)->required();
  imp->add_option("--out", imp_out)->required();
  auto *exp = app.add_subcommand("export-kaldi", "manifest -> Kaldi dir");
  std::string exp_manifest, exp_dir;
  exp->add_option("--manifest", exp_manifest)->required();
  exp->add_option("--dir", exp_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsageError;
  }

  try {
    if (*augment) return cmd_augment(recipe_path, manifest_args, out_dir, seed, workers);
    if (*hours) return cmd_hours(hours_recipe, base_args);
    if (*cer_cmd) return cmd_cer(ref_path, hyp_path, score_missing);
    if (*partition)
      return cmd_partition(part_manifest, n_speakers, part_seed, dev_out, train_out);
    if (*normalize) return cmd_normalize(mapping_path, norm_in, norm_out);
    if (*fbank) return cmd_fbank(fb_wav, fb_out, fb_csv);
    if (*specaug) return cmd_specaug(sa_in, sa_out, sa_seed, sa_cfg);
    if (*imp) {
      corpus::write_manifest(corpus::import_kaldi_dir(imp_dir), imp_out);
      return kOk;
    }
    if (*exp) {
      corpus::export_kaldi_dir(corpus::read_manifest(exp_manifest), exp_dir);
      return kOk;
    }
  } catch (const CLI::Error &e) {
    std::cerr << e.what() << '\n';
    return kUsageError;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}
