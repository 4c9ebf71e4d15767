#include "suf/checkpoint.hpp"

#include <nlohmann/json.hpp>

#include "suf/error.hpp"
#include "suf/ingest.hpp"

namespace suf::checkpoint {
namespace {

using nlohmann::json;
constexpr std::string_view kFormatName = "suf-gru-checkpoint";

[[noreturn]] void corrupt(const std::string& why) { fail(ErrorCode::CorruptDocument, why); }

std::pair<long, long> shape_of(const model::GruParameters& p, const std::string& name) {
  if (name == "embedding") return {p.embedding.rows(), p.embedding.cols()};
  if (name == "head_weight") return {p.head_weight.rows(), p.head_weight.cols()};
  if (name == "head_bias") return {p.head_bias.size(), 1};
  const auto dot = name.find('.', 7);
  const auto& L = p.layers.at(std::stoul(name.substr(7, dot - 7)));
  const std::string field = name.substr(dot + 1);
  if (field.starts_with("w_")) return {L.w_r.rows(), L.w_r.cols()};
  if (field.starts_with("u_")) return {L.u_r.rows(), L.u_r.cols()};
  return {L.b_ir.size(), 1};
}

json tensors_to_json(const model::GruParameters& p) {
  json arr = json::array();
  p.for_each([&](const std::string& name, std::span<const double> s) {
    auto [rows, cols] = shape_of(p, name);
    arr.push_back({{"name", name},
                   {"rows", rows},
                   {"cols", cols},
                   {"values", std::vector<double>(s.begin(), s.end())}});
  });
  return arr;
}

}  // namespace

std::string to_string(const Checkpoint& c) {
  json doc;
  doc["format"] = kFormatName;
  doc["format_version"] = c.format_version;
  doc["config"] = {{"vocab_size", c.config.vocab_size},
                   {"hidden_dim", c.config.hidden_dim},
                   {"num_layers", c.config.num_layers},
                   {"num_classes", c.config.num_classes},
                   {"dropout_p", c.config.dropout_p},
                   {"window", c.window}};
  doc["parameters"] = tensors_to_json(c.params);
  doc["scaler"] = {{"kind", c.scaler.kind == preprocess::ScalerKind::MinMax ? "minmax" : "zscore"},
                   {"feature_names", c.scaler.feature_names},
                   {"data_min", c.scaler.data_min},
                   {"data_max", c.scaler.data_max},
                   {"range_min", c.scaler.range_min},
                   {"range_max", c.scaler.range_max}};
  doc["vocabulary"] = {{"chars", c.vocabulary.chars()}};
  doc["labels"] = c.labels.names();
  json epochs = json::array();
  for (const auto& e : c.history.epochs) {
    epochs.push_back({{"train_loss", e.train_loss}, {"val_loss", e.val_loss}, {"val_accuracy", e.val_accuracy}});
  }
  doc["history"] = {{"epochs", epochs},
                    {"best_epoch", c.history.best_epoch},
                    {"train_accuracy", c.train_accuracy},
                    {"source_accuracy", c.source_accuracy}};
  return doc.dump(1) + "\n";
}

Checkpoint from_string(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    corrupt(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", std::string()) != kFormatName) {
      corrupt("not a suf checkpoint document");
    }
    if (!doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
      corrupt("missing format_version");
    }
    const int version = doc["format_version"].get<int>();
    if (version != kFormatVersion) {
      fail(ErrorCode::VersionMismatch, "checkpoint format_version " + std::to_string(version) +
                                           " (supported: " + std::to_string(kFormatVersion) + ")");
    }

    Checkpoint c;
    const auto& cfg = doc.at("config");
    c.config.vocab_size = cfg.at("vocab_size").get<std::size_t>();
    c.config.hidden_dim = cfg.at("hidden_dim").get<std::size_t>();
    c.config.num_layers = cfg.at("num_layers").get<std::size_t>();
    c.config.num_classes = cfg.at("num_classes").get<std::size_t>();
    c.config.dropout_p = cfg.at("dropout_p").get<double>();
    c.window = cfg.at("window").get<std::size_t>();
    try {
      c.config.validate();
    } catch (const Error& e) {
      corrupt(std::string("invalid model config: ") + e.what());
    }

    c.params = model::GruParameters::zeros(c.config);
    const auto& tensors = doc.at("parameters");
    std::size_t k = 0;
    c.params.for_each([&](const std::string& name, std::span<double> s) {
      if (k >= tensors.size()) corrupt("checkpoint is missing tensor " + name);
      const auto& t = tensors[k++];
      if (t.at("name").get<std::string>() != name) corrupt("unexpected tensor order at " + name);
      if (std::pair{t.at("rows").get<long>(), t.at("cols").get<long>()} != shape_of(c.params, name)) {
        corrupt("tensor " + name + " has the wrong shape");
      }
      const auto values = t.at("values").get<std::vector<double>>();
      if (values.size() != s.size()) corrupt("tensor " + name + " has wrong size");
      std::copy(values.begin(), values.end(), s.begin());
    });
    if (k != tensors.size()) corrupt("checkpoint has extra tensors");

    const auto& sc = doc.at("scaler");
    const auto kind = sc.at("kind").get<std::string>();
    if (kind != "minmax" && kind != "zscore") corrupt("unknown scaler kind " + kind);
    c.scaler.kind = kind == "minmax" ? preprocess::ScalerKind::MinMax : preprocess::ScalerKind::ZScore;
    c.scaler.feature_names = sc.at("feature_names").get<std::vector<std::string>>();
    c.scaler.data_min = sc.at("data_min").get<std::vector<double>>();
    c.scaler.data_max = sc.at("data_max").get<std::vector<double>>();
    c.scaler.range_min = sc.at("range_min").get<double>();
    c.scaler.range_max = sc.at("range_max").get<double>();
    if (c.scaler.data_min.size() != c.scaler.feature_names.size() ||
        c.scaler.data_max.size() != c.scaler.feature_names.size()) {
      corrupt("scaler arrays have inconsistent lengths");
    }

    c.vocabulary = preprocess::Vocabulary(doc.at("vocabulary").at("chars").get<std::string>());
    if (c.vocabulary.size() != c.config.vocab_size) corrupt("vocabulary size disagrees with config");
    c.labels = dataset::LabelMap(doc.at("labels").get<std::vector<std::string>>());
    if (c.labels.size() != c.config.num_classes) corrupt("label map size disagrees with config");

    const auto& h = doc.at("history");
    for (const auto& e : h.at("epochs")) {
      c.history.epochs.push_back({e.at("train_loss").get<double>(), e.at("val_loss").get<double>(),
                                  e.at("val_accuracy").get<double>()});
    }
    c.history.best_epoch = h.at("best_epoch").get<std::size_t>();
    c.train_accuracy = h.at("train_accuracy").get<double>();
    c.source_accuracy = h.at("source_accuracy").get<double>();
    return c;
  } catch (const json::exception& e) {
    corrupt(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  ingest::write_text_file(path, to_string(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return from_string(ingest::read_text_file(path));
}

}  // namespace suf::checkpoint
