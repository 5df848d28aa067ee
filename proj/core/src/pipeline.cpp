#include "vmphase/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "vmphase/error.hpp"
#include "vmphase/parallel.hpp"
#include "vmphase/random.hpp"
#include "vmphase/wav.hpp"

namespace vmphase {
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot write " + path.string());
  out << text;
  if (!out)
    throw IoError("write failed for " + path.string());
}

void ensure_dir(const fs::path& dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string shape_text(Index in, Index out)
{
  return std::to_string(in) + " -> " + std::to_string(out);
}

struct Analysis {
  AmplitudeSpectrogram amp;
  PhaseSpectrogram phase;
};

Analysis analyze(std::span<const double> samples, const StftConfig& config)
{
  auto parts = polar_split(stft(samples, config));
  return {std::move(parts.amplitude), std::move(parts.phase)};
}

} // namespace

std::vector<fs::path> read_manifest(const fs::path& manifest)
{
  std::ifstream in(manifest);
  if (!in)
    throw IoError("cannot open manifest " + manifest.string());
  std::vector<fs::path> paths;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#')
      continue;
    const auto e = line.find_last_not_of(" \t\r");
    fs::path p = line.substr(b, e - b + 1);
    if (p.is_relative())
      p = manifest.parent_path() / p;
    paths.push_back(p.lexically_normal());
  }
  return paths;
}

std::vector<Utterance> load_corpus(const fs::path& manifest, const StftConfig& config,
                                   std::size_t jobs)
{
  auto paths = read_manifest(manifest);
  if (paths.empty())
    throw SizeError("manifest " + manifest.string() + " lists no files");
  std::sort(paths.begin(), paths.end());
  std::vector<Utterance> corpus(paths.size());
  parallel_for(paths.size(), jobs, [&](std::size_t i) {
    corpus[i].name = paths[i].stem().string();
    corpus[i].samples = read_wav(paths[i], config).samples;
    if (corpus[i].samples.size() < static_cast<std::size_t>(config.window_len))
      throw WavError(paths[i].string() + ": shorter than one analysis window");
  });
  return corpus;
}

TrainSummary train_corpus(const PipelineConfig& config, std::span<const Utterance> corpus,
                          std::ostream& log)
{
  TrainConfig tc = config.train;
  tc.seed = config.seed;
  const FrameDataset dataset = assemble_dataset(corpus, config.stft, tc.band, config.jobs);
  log << "training on " << dataset.size() << " frames from " << corpus.size()
      << " utterances (band " << band_name(tc.band) << ", loss "
      << loss_kind_name(tc.loss.kind) << ")\n";
  TrainResult result = train(dataset, tc, [&](std::size_t epoch, double loss) {
    log << "epoch " << (epoch + 1) << "/" << tc.epochs << " loss " << format_number(loss)
        << "\n";
  });

  ensure_dir(config.paths.out_dir);
  TrainSummary summary;
  summary.model = config.model_path();
  if (summary.model.has_parent_path())
    ensure_dir(summary.model.parent_path());
  save_model(summary.model, PhaseModel{std::move(result.network), std::move(result.stats)}, tc,
             config.stft);

  std::ostringstream csv;
  csv << "# mean per-frame training loss; loss=" << loss_kind_name(tc.loss.kind)
      << " alpha=" << format_number(tc.loss.alpha) << "\n";
  csv << "epoch,loss\n";
  for (std::size_t i = 0; i < result.history.size(); ++i)
    csv << (i + 1) << ',' << format_number(result.history[i]) << '\n';
  summary.history_csv = config.paths.out_dir / "loss_history.csv";
  write_text(summary.history_csv, csv.str());
  summary.history = std::move(result.history);
  if (!summary.history.empty())
    log << "final loss " << format_number(summary.history.back()) << "\n";
  return summary;
}

TrainSummary cmd_train(const PipelineConfig& config, std::ostream& log)
{
  if (config.paths.manifest.empty())
    throw ConfigError("train: no corpus manifest configured");
  const auto corpus = load_corpus(config.paths.manifest, config.stft, config.jobs);
  return train_corpus(config, corpus, log);
}

void check_model_matches(const PhaseModel& model, const PipelineConfig& config,
                         const fs::path& model_path)
{
  const Index expected_in = (2 * kContextRadius + 1) * config.stft.bins();
  const Index expected_out = band_dim(config.train.band);
  if (model.network.input_dim() != expected_in || model.network.output_dim() != expected_out)
    throw ConfigError("model " + model_path.string() + " has shape " +
                      shape_text(model.network.input_dim(), model.network.output_dim()) +
                      " but the configuration needs " +
                      shape_text(expected_in, expected_out) + " (band " +
                      band_name(config.train.band) + ")");
  if (model.stats.dim() != expected_in)
    throw ConfigError("model " + model_path.string() + " stores " +
                      std::to_string(model.stats.dim()) + " normalization dims, expected " +
                      std::to_string(expected_in));
  if (fs::exists(sidecar_path(model_path))) {
    const auto sidecar = load_model_sidecar(model_path);
    if (!(sidecar.stft == config.stft))
      throw ConfigError("model " + model_path.string() +
                        " was trained with a different STFT configuration");
  }
}

Reconstruction reconstruct(const PipelineConfig& config, const AmplitudeSpectrogram& amp,
                           const ReconstructOptions& options, const PhaseModel* model,
                           const PhaseSpectrogram* true_phase, std::uint64_t filler_seed)
{
  Reconstruction out;
  if (options.method == ReconstructMethod::GriffinLim) {
    GriffinLimResult gl;
    if (options.oracle_init) {
      if (!true_phase)
        throw DomainError("reconstruct: oracle initialization needs the true phase");
      gl = griffin_lim(amp, *true_phase, config.gl);
    } else {
      gl = griffin_lim(amp, filler_seed, config.gl);
    }
    out.phase = std::move(gl.phase);
    out.trace = std::move(gl.convergence);
  } else {
    if (!model)
      throw DomainError("reconstruct: model method needs a model");
    const RealMatrix predicted = predict_phase(model->network, model->stats, amp);
    PhaseSpectrogram phase =
        band_merge(predicted, random_phase(amp.config, amp.frames(), filler_seed));
    if (options.refine) {
      auto gl = griffin_lim(amp, phase, GriffinLimConfig{config.refine_iterations});
      out.phase = std::move(gl.phase);
      out.trace = std::move(gl.convergence);
    } else {
      out.phase = std::move(phase);
    }
  }
  out.signal = istft(polar_join(amp, out.phase));
  return out;
}

ReconstructSummary cmd_reconstruct(const PipelineConfig& config, const fs::path& wav_in,
                                   const ReconstructOptions& options)
{
  const WavData wav = read_wav(wav_in, config.stft);
  const Analysis a = analyze(wav.samples, config.stft);

  std::optional<PhaseModel> model;
  if (options.method == ReconstructMethod::Model) {
    const fs::path path = config.model_path();
    model = load_model(path);
    check_model_matches(*model, config, path);
  }
  ReconstructSummary summary;
  summary.result = reconstruct(config, a.amp, options, model ? &*model : nullptr, &a.phase,
                               mix_seed(config.seed, 0));
  summary.result.signal.resize(wav.samples.size());

  ensure_dir(config.paths.out_dir);
  const std::string method =
      options.method == ReconstructMethod::GriffinLim ? "griffinlim" : "model";
  const std::string stem = wav_in.stem().string() + "_" + method;
  summary.wav = config.paths.out_dir / (stem + ".wav");
  summary.trace_csv = config.paths.out_dir / (stem + "_trace.csv");
  write_wav(summary.wav, summary.result.signal, config.stft.sample_rate_hz);
  std::ostringstream csv;
  write_trace_csv(csv, summary.result.trace);
  write_text(summary.trace_csv, csv.str());
  return summary;
}

EvalReport evaluate_model(const PipelineConfig& config, const PhaseModel& model,
                          std::span<const Utterance> corpus, Histogram* histogram)
{
  const Band band = model.band();
  std::vector<UtteranceMetrics> rows(corpus.size());
  std::vector<RealMatrix> predictions(corpus.size());
  parallel_for(corpus.size(), config.jobs, [&](std::size_t i) {
    const Analysis a = analyze(corpus[i].samples, config.stft);
    predictions[i] = predict_phase(model.network, model.stats, a.amp);
    const RealMatrix target = band_slice(a.phase, band);
    rows[i] = {corpus[i].name, cosine_distance(target, predictions[i]),
               gd_cosine_distance(target, predictions[i]), band, a.amp.frames()};
  });
  if (histogram) {
    std::vector<double> all;
    for (const auto& p : predictions)
      all.insert(all.end(), p.data(), p.data() + p.size());
    *histogram = phase_histogram(all);
  }
  return summarize(std::move(rows));
}

EvalReport evaluate_random_baseline(const PipelineConfig& config, Band band,
                                    std::span<const Utterance> corpus)
{
  std::vector<UtteranceMetrics> rows(corpus.size());
  parallel_for(corpus.size(), config.jobs, [&](std::size_t i) {
    const Analysis a = analyze(corpus[i].samples, config.stft);
    const RealMatrix target = band_slice(a.phase, band);
    const RealMatrix guess =
        random_phase_matrix(target.rows(), target.cols(), mix_seed(config.seed, i));
    rows[i] = {corpus[i].name, cosine_distance(target, guess),
               gd_cosine_distance(target, guess), band, a.amp.frames()};
  });
  return summarize(std::move(rows));
}

EvalOutcome cmd_evaluate(const PipelineConfig& config, const fs::path& model_path,
                         const fs::path& manifest, bool random_baseline)
{
  const auto corpus = load_corpus(manifest, config.stft, config.jobs);
  EvalOutcome out;
  if (random_baseline) {
    out.report = evaluate_random_baseline(config, config.train.band, corpus);
    std::vector<double> all;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const Index frames = config.stft.frame_count(corpus[i].samples.size());
      const RealMatrix guess = random_phase_matrix(frames, band_dim(config.train.band),
                                                   mix_seed(config.seed, i));
      all.insert(all.end(), guess.data(), guess.data() + guess.size());
    }
    out.histogram = phase_histogram(all);
  } else {
    const PhaseModel model = load_model(model_path);
    check_model_matches(model, config, model_path);
    out.report = evaluate_model(config, model, corpus, &out.histogram);
  }
  ensure_dir(config.paths.out_dir);
  out.report_csv = config.paths.out_dir / "eval_report.csv";
  out.histogram_csv = config.paths.out_dir / "phase_histogram.csv";
  std::ostringstream report;
  write_eval_csv(report, out.report);
  write_text(out.report_csv, report.str());
  std::ostringstream hist;
  write_histogram_csv(hist, out.histogram);
  write_text(out.histogram_csv, hist.str());
  return out;
}

CompareOutcome cmd_compare(const PipelineConfig& config, std::span<const fs::path> models,
                           const fs::path& manifest)
{
  if (models.size() < 2)
    throw ConfigError("compare needs at least two model files");
  std::vector<PhaseModel> loaded;
  for (const auto& m : models)
    loaded.push_back(load_model(m));
  const Band band = loaded.front().band();
  for (std::size_t i = 1; i < loaded.size(); ++i)
    if (loaded[i].band() != band)
      throw ConfigError("compare: " + models[i].string() + " predicts band " +
                        band_name(loaded[i].band()) + " but " + models[0].string() +
                        " predicts " + band_name(band));
  PipelineConfig cfg = config;
  cfg.train.band = band;
  for (std::size_t i = 0; i < loaded.size(); ++i)
    check_model_matches(loaded[i], cfg, models[i]);

  const auto corpus = load_corpus(manifest, config.stft, config.jobs);
  CompareOutcome out;
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    out.labels.push_back(models[i].stem().string());
    out.reports.push_back(evaluate_model(cfg, loaded[i], corpus));
  }

  std::ostringstream csv;
  csv << "# distance = mean (1 - cos(a - b)) / 2 over band " << band_name(band) << "\n";
  csv << "utterance";
  for (const auto& label : out.labels)
    csv << ',' << label << "_phase_distance," << label << "_gd_distance";
  csv << '\n';
  for (std::size_t u = 0; u < corpus.size(); ++u) {
    csv << corpus[u].name;
    for (const auto& r : out.reports)
      csv << ',' << format_number(r.rows[u].phase_distance) << ','
          << format_number(r.rows[u].gd_distance);
    csv << '\n';
  }
  csv << "median";
  for (const auto& r : out.reports)
    csv << ',' << format_number(r.phase.median) << ',' << format_number(r.gd.median);
  csv << '\n';
  ensure_dir(config.paths.out_dir);
  out.csv = config.paths.out_dir / "comparison.csv";
  write_text(out.csv, csv.str());
  return out;
}

fs::path cmd_synth_corpus(const fs::path& out_dir, std::size_t count,
                          const SynthParams& params, std::uint64_t seed)
{
  ensure_dir(out_dir);
  const auto corpus = synth_corpus(count, params, seed);
  std::ostringstream manifest;
  for (const auto& u : corpus) {
    const std::string file = u.name + ".wav";
    write_wav(out_dir / file, u.samples, params.sample_rate_hz);
    manifest << file << '\n';
  }
  const fs::path path = out_dir / "manifest.txt";
  write_text(path, manifest.str());
  return path;
}

} // namespace vmphase
