#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vmphase/features.hpp"
#include "vmphase/griffin_lim.hpp"
#include "vmphase/metrics.hpp"
#include "vmphase/model_io.hpp"
#include "vmphase/stft.hpp"
#include "vmphase/synth.hpp"
#include "vmphase/trainer.hpp"

namespace vmphase {

struct PipelinePaths {
  std::filesystem::path manifest;
  std::filesystem::path eval_manifest;
  /// Empty means <out_dir>/model.vmph.
  std::filesystem::path model;
  std::filesystem::path out_dir{"out"};
};

struct PipelineConfig {
  StftConfig stft;
  TrainConfig train;
  GriffinLimConfig gl;
  std::size_t refine_iterations = 100;
  PipelinePaths paths;
  /// Seeds network initialization, shuffling and every random phase.
  std::uint64_t seed = 0;
  std::size_t jobs = 1;

  [[nodiscard]] std::filesystem::path model_path() const;
};

/// INI-style text: [section] headers and key = value lines; '#' or ';'
/// start comments. Unknown sections or keys throw ConfigError.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);
/// Inverse of parse_config().
std::string format_config(const PipelineConfig& config);

/// Non-empty, non-comment lines; relative entries resolve against the
/// manifest's directory.
std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& manifest);

/// Reads every WAV listed in the manifest, sorted by path. Throws WavError
/// naming the offending file, SizeError for an empty manifest.
std::vector<Utterance> load_corpus(const std::filesystem::path& manifest,
                                   const StftConfig& config, std::size_t jobs = 1);

struct TrainSummary {
  std::filesystem::path model;
  std::filesystem::path history_csv;
  std::vector<double> history;
};

/// Features -> train -> model file (+ JSON sidecar) and loss_history.csv.
TrainSummary cmd_train(const PipelineConfig& config, std::ostream& log);

/// Same, on an in-memory corpus.
TrainSummary train_corpus(const PipelineConfig& config, std::span<const Utterance> corpus,
                          std::ostream& log);

enum class ReconstructMethod { GriffinLim, Model };

struct ReconstructOptions {
  ReconstructMethod method = ReconstructMethod::GriffinLim;
  /// Model path: run refine_iterations of Griffin-Lim on the prediction.
  bool refine = true;
  /// Griffin-Lim path: start from the true phase instead of random phases.
  bool oracle_init = false;
};

struct Reconstruction {
  PhaseSpectrogram phase;
  std::vector<double> trace;
  std::vector<double> signal;
};

/// Phase reconstruction of one amplitude spectrogram. `model` is required
/// for ReconstructMethod::Model; `true_phase` for oracle_init.
Reconstruction reconstruct(const PipelineConfig& config, const AmplitudeSpectrogram& amp,
                           const ReconstructOptions& options, const PhaseModel* model,
                           const PhaseSpectrogram* true_phase, std::uint64_t filler_seed);

struct ReconstructSummary {
  std::filesystem::path wav;
  std::filesystem::path trace_csv;
  Reconstruction result;
};

ReconstructSummary cmd_reconstruct(const PipelineConfig& config,
                                   const std::filesystem::path& wav_in,
                                   const ReconstructOptions& options);

/// Throws ConfigError (printing both shapes) unless the model fits the
/// configured STFT geometry and band.
void check_model_matches(const PhaseModel& model, const PipelineConfig& config,
                         const std::filesystem::path& model_path);

struct EvalOutcome {
  EvalReport report;
  Histogram histogram;
  std::filesystem::path report_csv;
  std::filesystem::path histogram_csv;
};

/// Per-utterance phase and group-delay distances on the predicted band.
/// With `random_baseline` the model is ignored and predictions are uniform
/// random phases. Writes eval_report.csv and phase_histogram.csv.
EvalOutcome cmd_evaluate(const PipelineConfig& config, const std::filesystem::path& model,
                         const std::filesystem::path& manifest, bool random_baseline = false);

/// In-memory variant of the evaluation (no files written).
EvalReport evaluate_model(const PipelineConfig& config, const PhaseModel& model,
                          std::span<const Utterance> corpus, Histogram* histogram = nullptr);
EvalReport evaluate_random_baseline(const PipelineConfig& config, Band band,
                                    std::span<const Utterance> corpus);

struct CompareOutcome {
  std::vector<std::string> labels;
  std::vector<EvalReport> reports;
  std::filesystem::path csv;
};

/// Side-by-side evaluation of two or more models sharing a band; writes
/// comparison.csv.
CompareOutcome cmd_compare(const PipelineConfig& config,
                           std::span<const std::filesystem::path> models,
                           const std::filesystem::path& manifest);

/// Writes `count` synthetic WAVs and manifest.txt into `out_dir`.
std::filesystem::path cmd_synth_corpus(const std::filesystem::path& out_dir,
                                       std::size_t count, const SynthParams& params,
                                       std::uint64_t seed);

} // namespace vmphase
