#include "vmphase/model_io.hpp"

#include <nlohmann/json.hpp>

#include "binary_io.hpp"
#include "vmphase/error.hpp"

namespace vmphase {
namespace {

constexpr char kMagic[4] = {'V', 'M', 'P', 'H'};
constexpr std::uint32_t kMaxHiddenLayers = 64;

void write_row_major(detail::ByteWriter& w, const Matrix& m)
{
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c)
      w.f64(m(r, c));
}

void read_row_major(detail::ByteReader& r, Matrix& m)
{
  for (Index i = 0; i < m.rows(); ++i)
    for (Index c = 0; c < m.cols(); ++c)
      m(i, c) = r.f64();
}

void write_vector(detail::ByteWriter& w, const Vector& v)
{
  w.f64s(v.data(), static_cast<std::size_t>(v.size()));
}

void read_vector(detail::ByteReader& r, Vector& v)
{
  r.f64s(v.data(), static_cast<std::size_t>(v.size()));
}

} // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& model_path)
{
  return model_path.string() + ".json";
}

void save_model(const std::filesystem::path& path, const PhaseModel& model)
{
  const GluNetwork& net = model.network;
  net.validate();
  if (model.stats.dim() != net.input_dim() || model.stats.std.size() != net.input_dim())
    throw ShapeError("save_model: feature stats do not match network input");

  detail::ByteWriter w;
  w.bytes(kMagic, 4);
  w.u32(kModelFormatVersion);
  w.u32(static_cast<std::uint32_t>(net.input_dim()));
  w.u32(static_cast<std::uint32_t>(net.output_dim()));
  w.u32(static_cast<std::uint32_t>(net.layers.size()));
  for (const auto& l : net.layers)
    w.u32(static_cast<std::uint32_t>(l.output_dim()));
  for (const auto& l : net.layers) {
    write_row_major(w, l.value_weight);
    write_vector(w, l.value_bias);
    write_row_major(w, l.gate_weight);
    write_vector(w, l.gate_bias);
  }
  write_row_major(w, net.output_weight);
  write_vector(w, net.output_bias);
  write_vector(w, model.stats.mean);
  write_vector(w, model.stats.std);
  detail::write_file(path.string(), w.str());
}

void save_model(const std::filesystem::path& path, const PhaseModel& model,
                const TrainConfig& train, const StftConfig& stft)
{
  save_model(path, model);
  nlohmann::json j;
  j["format_version"] = kModelFormatVersion;
  j["train"] = {
      {"epochs", train.epochs},
      {"batch_frames", train.batch_frames},
      {"seed", train.seed},
      {"loss", loss_kind_name(train.loss.kind)},
      {"alpha", train.loss.alpha},
      {"band", band_name(train.band)},
      {"hidden", train.hidden},
      {"learning_rate", train.learning_rate},
      {"epsilon", train.epsilon},
  };
  j["stft"] = {
      {"sample_rate_hz", stft.sample_rate_hz},
      {"window_len", stft.window_len},
      {"hop_len", stft.hop_len},
      {"fft_len", stft.fft_len},
      {"window", "hamming"},
  };
  detail::write_file(sidecar_path(path).string(), j.dump(2) + "\n");
}

PhaseModel load_model(const std::filesystem::path& path)
{
  const std::string name = path.string();
  const auto bytes = detail::read_file(name);
  detail::ByteReader r(bytes, name);
  if (!r.match(kMagic, 4))
    throw FormatError(name + ": not a model file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kModelFormatVersion)
    throw VersionError(name + ": model format version " + std::to_string(version) +
                       " is not supported (expected " +
                       std::to_string(kModelFormatVersion) + ")");
  const Index input_dim = r.u32();
  const Index output_dim = r.u32();
  const std::uint32_t hidden_count = r.u32();
  if (input_dim == 0 || output_dim == 0)
    throw ShapeError(name + ": zero input or output dimension");
  if (hidden_count > kMaxHiddenLayers)
    throw ShapeError(name + ": implausible hidden layer count " +
                     std::to_string(hidden_count));
  std::vector<Index> hidden(hidden_count);
  for (auto& h : hidden) {
    h = r.u32();
    if (h == 0)
      throw ShapeError(name + ": zero-width hidden layer");
  }

  std::size_t expected = 0;
  Index fan_in = input_dim;
  for (Index h : hidden) {
    expected += static_cast<std::size_t>(2 * h * fan_in + 2 * h);
    fan_in = h;
  }
  expected += static_cast<std::size_t>(output_dim * fan_in + output_dim + 2 * input_dim);
  r.need(expected * 8);
  if (r.remaining() != expected * 8)
    throw ShapeError(name + ": payload size disagrees with header dimensions");

  PhaseModel model;
  GluNetwork& net = model.network;
  fan_in = input_dim;
  for (Index h : hidden) {
    GluLayer l{Matrix(h, fan_in), Vector(h), Matrix(h, fan_in), Vector(h)};
    read_row_major(r, l.value_weight);
    read_vector(r, l.value_bias);
    read_row_major(r, l.gate_weight);
    read_vector(r, l.gate_bias);
    net.layers.push_back(std::move(l));
    fan_in = h;
  }
  net.output_weight.resize(output_dim, fan_in);
  net.output_bias.resize(output_dim);
  read_row_major(r, net.output_weight);
  read_vector(r, net.output_bias);
  model.stats.mean.resize(input_dim);
  model.stats.std.resize(input_dim);
  read_vector(r, model.stats.mean);
  read_vector(r, model.stats.std);
  return model;
}

ModelSidecar load_model_sidecar(const std::filesystem::path& model_path)
{
  const auto path = sidecar_path(model_path);
  const auto bytes = detail::read_file(path.string());
  ModelSidecar out;
  try {
    const auto j = nlohmann::json::parse(bytes.begin(), bytes.end());
    const auto& t = j.at("train");
    out.train.epochs = t.at("epochs").get<std::size_t>();
    out.train.batch_frames = t.at("batch_frames").get<std::size_t>();
    out.train.seed = t.at("seed").get<std::uint64_t>();
    out.train.loss.kind = parse_loss_kind(t.at("loss").get<std::string>());
    out.train.loss.alpha = t.at("alpha").get<double>();
    out.train.band = parse_band(t.at("band").get<std::string>());
    out.train.hidden = t.at("hidden").get<std::vector<Index>>();
    out.train.learning_rate = t.at("learning_rate").get<double>();
    out.train.epsilon = t.at("epsilon").get<double>();
    const auto& s = j.at("stft");
    out.stft.sample_rate_hz = s.at("sample_rate_hz").get<int>();
    out.stft.window_len = s.at("window_len").get<int>();
    out.stft.hop_len = s.at("hop_len").get<int>();
    out.stft.fft_len = s.at("fft_len").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": invalid model sidecar: " + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(path.string() + ": invalid model sidecar: " + e.what());
  }
  return out;
}

} // namespace vmphase
