#include "conjparse/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "conjparse/error.hpp"

namespace conjparse {

static_assert(std::endian::native == std::endian::little, "model files assume little-endian hosts");

namespace {

using nlohmann::json;

class HashingWriter {
 public:
  explicit HashingWriter(std::ostream& out) : out_(out) {}

  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  template <class T>
  void value(T v) {
    bytes(&v, sizeof v);
  }
  std::uint64_t hash() const { return hash_; }

 private:
  std::ostream& out_;
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

class HashingReader {
 public:
  explicit HashingReader(std::istream& in) : in_(in) {}

  void bytes(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw ModelFormatError("model file is truncated");
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  template <class T>
  T value() {
    T v;
    bytes(&v, sizeof v);
    return v;
  }
  std::uint64_t hash() const { return hash_; }

 private:
  std::istream& in_;
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

json hyper_to_json(const Hyperparams& hp) {
  return {{"word_dim", hp.word_dim},
          {"pos_dim", hp.pos_dim},
          {"lstm_layers", hp.lstm_layers},
          {"lstm_hidden", hp.lstm_hidden},
          {"mlp_hidden", hp.mlp_hidden},
          {"conj_hidden", hp.conj_hidden},
          {"learning_rate", hp.learning_rate},
          {"adam_beta1", hp.adam_beta1},
          {"adam_beta2", hp.adam_beta2},
          {"adam_eps", hp.adam_eps},
          {"word_dropout_alpha", hp.word_dropout_alpha},
          {"use_conj_features", hp.use_conj_features},
          {"freeze_pretrained", hp.freeze_pretrained},
          {"single_root", hp.single_root}};
}

Hyperparams hyper_from_json(const json& j) {
  Hyperparams hp;
  hp.word_dim = j.at("word_dim").get<std::size_t>();
  hp.pos_dim = j.at("pos_dim").get<std::size_t>();
  hp.lstm_layers = j.at("lstm_layers").get<std::size_t>();
  hp.lstm_hidden = j.at("lstm_hidden").get<std::size_t>();
  hp.mlp_hidden = j.at("mlp_hidden").get<std::size_t>();
  hp.conj_hidden = j.at("conj_hidden").get<std::size_t>();
  hp.learning_rate = j.at("learning_rate").get<double>();
  hp.adam_beta1 = j.at("adam_beta1").get<double>();
  hp.adam_beta2 = j.at("adam_beta2").get<double>();
  hp.adam_eps = j.at("adam_eps").get<double>();
  hp.word_dropout_alpha = j.at("word_dropout_alpha").get<double>();
  hp.use_conj_features = j.at("use_conj_features").get<bool>();
  hp.freeze_pretrained = j.at("freeze_pretrained").get<bool>();
  hp.single_root = j.at("single_root").get<bool>();
  return hp;
}

}  // namespace

void save_model(std::ostream& out, const Model& m) {
  const auto& vocab = m.vocab();
  json manifest = json::array();
  for (const auto& t : m.params().tensors()) {
    manifest.push_back({{"name", t.name}, {"rows", t.rows}, {"cols", t.cols}});
  }
  json header = {
      {"hyperparams", hyper_to_json(m.hyper())},
      {"labels", m.labels().labels()},
      {"words", std::vector<std::string>(vocab.words().begin() + 2, vocab.words().end())},
      {"word_counts", std::vector<std::size_t>(vocab.counts().begin() + 2, vocab.counts().end())},
      {"pos_tags", std::vector<std::string>(vocab.pos_tags().begin() + 2, vocab.pos_tags().end())},
      {"pretrained_words", m.pretrained_words()},
      {"pretrained_dim", m.pretrained_dim()},
      {"tensors", manifest},
      {"metadata", m.metadata()},
  };
  const std::string text = header.dump();

  HashingWriter w(out);
  w.bytes(kModelMagic, sizeof kModelMagic);
  w.value<std::uint32_t>(kModelVersion);
  w.value<std::uint64_t>(text.size());
  w.bytes(text.data(), text.size());
  for (const auto& t : m.params().tensors()) w.bytes(t.data, t.size() * sizeof(double));
  const std::uint64_t digest = w.hash();
  out.write(reinterpret_cast<const char*>(&digest), sizeof digest);
  if (!out) throw ModelFormatError("failed writing model");
}

void save_model_file(const std::string& path, const Model& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelFormatError("cannot write '" + path + "'");
  save_model(out, m);
}

Model load_model(std::istream& in) {
  HashingReader r(in);
  char magic[sizeof kModelMagic];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kModelMagic, sizeof magic) != 0) {
    throw ModelFormatError("not a model file (bad magic bytes)");
  }
  const auto version = r.value<std::uint32_t>();
  if (version != kModelVersion) {
    throw ModelFormatError("model format version " + std::to_string(version) +
                           " is not supported (expected " + std::to_string(kModelVersion) + ")");
  }
  const auto header_len = r.value<std::uint64_t>();
  if (header_len > (std::uint64_t{1} << 34)) throw ModelFormatError("implausible header length");
  std::string text(header_len, '\0');
  r.bytes(text.data(), text.size());

  json header;
  try {
    header = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("corrupt model header: ") + e.what());
  }

  std::optional<Model> model;
  try {
    Vocabulary vocab;
    const auto words = header.at("words").get<std::vector<std::string>>();
    const auto counts = header.at("word_counts").get<std::vector<std::size_t>>();
    if (words.size() != counts.size()) throw ModelFormatError("vocabulary counts do not match");
    for (std::size_t i = 0; i < words.size(); ++i) vocab.add_word(words[i], counts[i]);
    for (const auto& tag : header.at("pos_tags").get<std::vector<std::string>>()) vocab.add_pos(tag);
    model.emplace(hyper_from_json(header.at("hyperparams")), std::move(vocab),
                  LabelInventory(header.at("labels").get<std::vector<std::string>>()),
                  header.at("pretrained_words").get<std::vector<std::string>>(),
                  header.at("pretrained_dim").get<std::size_t>());
    model->metadata() = header.at("metadata").get<std::map<std::string, std::string>>();

    auto tensors = model->params().tensors();
    const auto& manifest = header.at("tensors");
    if (manifest.size() != tensors.size()) throw ModelFormatError("tensor manifest does not match");
    for (std::size_t i = 0; i < tensors.size(); ++i) {
      const auto& entry = manifest[i];
      if (entry.at("name").get<std::string>() != tensors[i].name ||
          entry.at("rows").get<Eigen::Index>() != tensors[i].rows ||
          entry.at("cols").get<Eigen::Index>() != tensors[i].cols) {
        throw ModelFormatError("tensor '" + tensors[i].name + "' has an unexpected shape");
      }
    }
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("corrupt model header: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(std::string("corrupt model header: ") + e.what());
  }

  for (auto& t : model->params().tensors()) r.bytes(t.data, t.size() * sizeof(double));
  const std::uint64_t expected = r.hash();
  std::uint64_t stored = 0;
  in.read(reinterpret_cast<char*>(&stored), sizeof stored);
  if (static_cast<std::size_t>(in.gcount()) != sizeof stored) {
    throw ModelFormatError("model file is truncated");
  }
  if (stored != expected) throw ModelFormatError("model checksum mismatch");
  return std::move(*model);
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelFormatError("cannot open '" + path + "'");
  return load_model(in);
}

}  // namespace conjparse
