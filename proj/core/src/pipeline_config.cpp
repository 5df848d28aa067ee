#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "vmphase/error.hpp"
#include "vmphase/pipeline.hpp"

namespace vmphase {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys()
{
  static const std::map<std::string, std::set<std::string>> keys = {
      {"stft", {"sample_rate_hz", "window_len", "hop_len", "fft_len", "window"}},
      {"train",
       {"epochs", "batch_frames", "band", "loss", "alpha", "hidden", "learning_rate",
        "epsilon"}},
      {"griffin_lim", {"iterations", "refine_iterations"}},
      {"paths", {"manifest", "eval_manifest", "model", "out_dir"}},
      {"run", {"seed", "jobs"}},
  };
  return keys;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text)
{
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last)
    throw ConfigError("config key '" + key + "': cannot parse '" + text + "'");
  return value;
}

template <typename T>
T positive(const std::string& key, const std::string& text)
{
  const T v = parse_number<T>(key, text);
  if (!(v > T(0)))
    throw ConfigError("config key '" + key + "' must be positive");
  return v;
}

std::vector<Index> parse_hidden(const std::string& text)
{
  std::vector<Index> dims;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos)
      throw ConfigError("config key 'train.hidden': empty entry");
    dims.push_back(positive<Index>("train.hidden", item.substr(b, e - b + 1)));
  }
  if (dims.empty())
    throw ConfigError("config key 'train.hidden' must list at least one width");
  return dims;
}

void apply(PipelineConfig& c, const std::string& section, const std::string& key,
           const std::string& v)
{
  const std::string name = section + "." + key;
  if (section == "stft") {
    if (key == "sample_rate_hz")
      c.stft.sample_rate_hz = positive<int>(name, v);
    else if (key == "window_len")
      c.stft.window_len = positive<int>(name, v);
    else if (key == "hop_len")
      c.stft.hop_len = positive<int>(name, v);
    else if (key == "fft_len")
      c.stft.fft_len = positive<int>(name, v);
    else if (key == "window" && v != "hamming")
      throw ConfigError("config key 'stft.window': only 'hamming' is supported");
  } else if (section == "train") {
    if (key == "epochs")
      c.train.epochs = positive<std::size_t>(name, v);
    else if (key == "batch_frames")
      c.train.batch_frames = positive<std::size_t>(name, v);
    else if (key == "band")
      c.train.band = parse_band(v);
    else if (key == "loss")
      c.train.loss.kind = parse_loss_kind(v);
    else if (key == "alpha") {
      c.train.loss.alpha = parse_number<double>(name, v);
      if (c.train.loss.alpha < 0.0)
        throw ConfigError("config key 'train.alpha' must be non-negative");
    } else if (key == "hidden")
      c.train.hidden = parse_hidden(v);
    else if (key == "learning_rate")
      c.train.learning_rate = positive<double>(name, v);
    else if (key == "epsilon")
      c.train.epsilon = positive<double>(name, v);
  } else if (section == "griffin_lim") {
    if (key == "iterations")
      c.gl.iterations = parse_number<std::size_t>(name, v);
    else if (key == "refine_iterations")
      c.refine_iterations = parse_number<std::size_t>(name, v);
  } else if (section == "paths") {
    if (key == "manifest")
      c.paths.manifest = v;
    else if (key == "eval_manifest")
      c.paths.eval_manifest = v;
    else if (key == "model")
      c.paths.model = v;
    else if (key == "out_dir")
      c.paths.out_dir = v;
  } else if (section == "run") {
    if (key == "seed")
      c.seed = parse_number<std::uint64_t>(name, v);
    else if (key == "jobs")
      c.jobs = positive<std::size_t>(name, v);
  }
}

} // namespace

std::filesystem::path PipelineConfig::model_path() const
{
  return paths.model.empty() ? paths.out_dir / "model.vmph" : paths.model;
}

PipelineConfig parse_config(std::string_view text)
{
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  PipelineConfig config;
  const auto& keys = known_keys();
  for (const auto& [section, body] : tree) {
    const auto it = keys.find(section);
    if (it == keys.end() || !body.data().empty())
      throw ConfigError("unknown config section or top-level key '" + section + "'");
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key))
        throw ConfigError("unknown config key '" + section + "." + key + "'");
      apply(config, section, key, value.data());
    }
  }
  try {
    config.stft.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid [stft] section: ") + e.what());
  }
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_config(const PipelineConfig& c)
{
  std::ostringstream out;
  out << "[stft]\n"
      << "sample_rate_hz = " << c.stft.sample_rate_hz << "\n"
      << "window_len = " << c.stft.window_len << "\n"
      << "hop_len = " << c.stft.hop_len << "\n"
      << "fft_len = " << c.stft.fft_len << "\n"
      << "window = hamming\n\n";
  out << "[train]\n"
      << "epochs = " << c.train.epochs << "\n"
      << "batch_frames = " << c.train.batch_frames << "\n"
      << "band = " << band_name(c.train.band) << "\n"
      << "loss = " << loss_kind_name(c.train.loss.kind) << "\n"
      << "alpha = " << format_number(c.train.loss.alpha) << "\n"
      << "hidden = ";
  for (std::size_t i = 0; i < c.train.hidden.size(); ++i)
    out << (i ? "," : "") << c.train.hidden[i];
  out << "\n"
      << "learning_rate = " << format_number(c.train.learning_rate) << "\n"
      << "epsilon = " << format_number(c.train.epsilon) << "\n\n";
  out << "[griffin_lim]\n"
      << "iterations = " << c.gl.iterations << "\n"
      << "refine_iterations = " << c.refine_iterations << "\n\n";
  out << "[paths]\n";
  if (!c.paths.manifest.empty())
    out << "manifest = " << c.paths.manifest.string() << "\n";
  if (!c.paths.eval_manifest.empty())
    out << "eval_manifest = " << c.paths.eval_manifest.string() << "\n";
  if (!c.paths.model.empty())
    out << "model = " << c.paths.model.string() << "\n";
  out << "out_dir = " << c.paths.out_dir.string() << "\n\n";
  out << "[run]\n"
      << "seed = " << c.seed << "\n"
      << "jobs = " << c.jobs << "\n";
  return out.str();
}

} // namespace vmphase
