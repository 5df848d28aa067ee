// vmphase: phase reconstruction from amplitude spectrograms.
//
//   vmphase synth-corpus --out corpus --count 50
//   vmphase train        --config run.ini --band 4k --loss phgd
//   vmphase reconstruct  --config run.ini --in speech.wav --method model
//   vmphase evaluate     --config run.ini --manifest eval.txt
//   vmphase compare      --config run.ini --models ph.vmph gd.vmph --manifest eval.txt
//
// Exit codes: 0 success, 1 usage/config error, 2 data error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vmphase/error.hpp"
#include "vmphase/pipeline.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<std::string> band;
  std::optional<std::string> loss;
  std::optional<double> alpha;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> epochs;
  std::optional<std::string> out;
  std::optional<std::string> model;
};

void add_common(CLI::App* cmd, CommonFlags& f)
{
  cmd->add_option("--config", f.config, "Pipeline config file (INI)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Global random seed");
  cmd->add_option("--jobs", f.jobs, "Utterances processed in parallel")->check(CLI::PositiveNumber);
  cmd->add_option("--band", f.band, "Predicted band: 2k, 4k or 8k");
  cmd->add_option("--loss", f.loss, "Training loss: ph, gd or phgd");
  cmd->add_option("--alpha", f.alpha, "Group-delay weight for phgd");
  cmd->add_option("--iterations", f.iterations,
                  "Griffin-Lim iterations (standalone and refinement)");
  cmd->add_option("--epochs", f.epochs, "Training epochs")->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--model", f.model, "Model file");
}

vmphase::PipelineConfig resolve(const CommonFlags& f)
{
  vmphase::PipelineConfig c =
      f.config.empty() ? vmphase::PipelineConfig{} : vmphase::load_config(f.config);
  if (f.seed)
    c.seed = *f.seed;
  if (f.jobs)
    c.jobs = *f.jobs;
  if (f.band)
    c.train.band = vmphase::parse_band(*f.band);
  if (f.loss)
    c.train.loss.kind = vmphase::parse_loss_kind(*f.loss);
  if (f.alpha) {
    if (*f.alpha < 0.0)
      throw vmphase::ConfigError("--alpha must be non-negative");
    c.train.loss.alpha = *f.alpha;
  }
  if (f.iterations) {
    c.gl.iterations = *f.iterations;
    c.refine_iterations = *f.iterations;
  }
  if (f.epochs)
    c.train.epochs = *f.epochs;
  if (f.out)
    c.paths.out_dir = *f.out;
  if (f.model)
    c.paths.model = *f.model;
  return c;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Phase reconstruction with von Mises DNNs and Griffin-Lim"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* synth = app.add_subcommand("synth-corpus", "Write a deterministic synthetic WAV corpus");
  std::size_t synth_count = 50;
  double synth_seconds = 2.0;
  double synth_noise_db = -30.0;
  synth->add_option("--count", synth_count, "Number of utterances")->check(CLI::PositiveNumber);
  synth->add_option("--seconds", synth_seconds, "Duration of each utterance")
      ->check(CLI::PositiveNumber);
  synth->add_option("--noise-db", synth_noise_db, "Noise level relative to the harmonics");
  add_common(synth, flags);

  auto* train = app.add_subcommand("train", "Train a phase predictor");
  std::string train_manifest;
  train->add_option("--manifest", train_manifest, "Training WAV manifest");
  add_common(train, flags);

  auto* recon = app.add_subcommand("reconstruct", "Reconstruct a waveform from its amplitude");
  std::string wav_in;
  std::string method = "griffin-lim";
  bool refine = true;
  bool oracle = false;
  recon->add_option("--in", wav_in, "Input WAV")->required()->check(CLI::ExistingFile);
  recon->add_option("--method", method, "griffin-lim or model")
      ->check(CLI::IsMember({"griffin-lim", "model"}));
  recon->add_flag("--refine,!--no-refine", refine, "Refine model phases with Griffin-Lim");
  recon->add_flag("--oracle-init", oracle, "Start Griffin-Lim from the true phase");
  add_common(recon, flags);

  auto* eval = app.add_subcommand("evaluate", "Phase and group-delay distances on a corpus");
  std::string eval_manifest;
  bool baseline = false;
  eval->add_option("--manifest", eval_manifest, "Evaluation WAV manifest");
  eval->add_flag("--random-baseline", baseline, "Score uniform random phases instead");
  add_common(eval, flags);

  auto* compare = app.add_subcommand("compare", "Compare several models on one corpus");
  std::vector<std::string> models;
  std::string compare_manifest;
  compare->add_option("--models", models, "Model files")->required()->expected(2, -1);
  compare->add_option("--manifest", compare_manifest, "Evaluation WAV manifest");
  add_common(compare, flags);

  auto* show = app.add_subcommand("show-config", "Print the effective configuration");
  add_common(show, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    vmphase::PipelineConfig config = resolve(flags);

    if (*synth) {
      const auto manifest = vmphase::cmd_synth_corpus(
          config.paths.out_dir, synth_count,
          vmphase::SynthParams{.seconds = synth_seconds,
                               .sample_rate_hz = config.stft.sample_rate_hz,
                               .noise_db = synth_noise_db},
          config.seed);
      std::cout << "wrote " << manifest.string() << "\n";
    } else if (*train) {
      if (!train_manifest.empty())
        config.paths.manifest = train_manifest;
      const auto summary = vmphase::cmd_train(config, std::cout);
      std::cout << "model " << summary.model.string() << "\n";
    } else if (*recon) {
      vmphase::ReconstructOptions opts;
      opts.method = method == "model" ? vmphase::ReconstructMethod::Model
                                      : vmphase::ReconstructMethod::GriffinLim;
      opts.refine = refine;
      opts.oracle_init = oracle;
      const auto summary = vmphase::cmd_reconstruct(config, wav_in, opts);
      std::cout << "wrote " << summary.wav.string() << " and " << summary.trace_csv.string()
                << "\n";
    } else if (*eval) {
      const std::filesystem::path manifest =
          eval_manifest.empty() ? config.paths.eval_manifest : std::filesystem::path(eval_manifest);
      if (manifest.empty())
        throw vmphase::ConfigError("evaluate: no evaluation manifest");
      const auto out = vmphase::cmd_evaluate(config, config.model_path(), manifest, baseline);
      std::cout << "phase distance median " << vmphase::format_number(out.report.phase.median)
                << ", group-delay distance median "
                << vmphase::format_number(out.report.gd.median) << "\n";
    } else if (*compare) {
      const std::filesystem::path manifest =
          compare_manifest.empty() ? config.paths.eval_manifest : std::filesystem::path(compare_manifest);
      if (manifest.empty())
        throw vmphase::ConfigError("compare: no evaluation manifest");
      const std::vector<std::filesystem::path> paths(models.begin(), models.end());
      const auto out = vmphase::cmd_compare(config, paths, manifest);
      std::cout << "wrote " << out.csv.string() << "\n";
    } else if (*show) {
      std::cout << vmphase::format_config(config);
    }
  } catch (const vmphase::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const vmphase::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
