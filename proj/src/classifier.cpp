#include "scriptid/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#include "scriptid/rng.hpp"

namespace scriptid {

namespace {

std::string format_percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::vector<std::string> ScriptModelSet::labels() const {
  std::vector<std::string> out;
  out.reserve(models.size());
  for (const auto& [label, model] : models) out.push_back(label);
  return out;
}

std::int64_t EvalReport::total() const {
  std::int64_t t = 0;
  for (const auto& row : confusion)
    for (std::int64_t c : row) t += c;
  return t;
}

std::vector<std::vector<double>> frames_of(const WordFeatures& word) {
  return {word.f1, word.f2, word.f3, word.f4, word.f5, word.f6};
}

ScriptModelSet train(const FeatureCorpus& corpus, int order, std::uint64_t seed,
                     const EmOptions& opts, TrainInfo* info) {
  if (corpus.empty()) throw EmptyData("train: empty corpus");
  if (order < 1) throw Error("train: order must be >= 1");

  int side = 0;
  for (const auto& [label, words] : corpus) {
    if (words.empty()) throw EmptyScript("train: no words for script '" + label + "'");
    for (const auto& w : words) {
      if (side == 0) side = w.n;
      if (w.n != side)
        throw DimensionMismatch("train: mixed feature dimensions in corpus");
    }
  }

  ScriptModelSet set;
  set.side = side;
  set.order = order;

  std::size_t script_index = 0;
  for (const auto& [label, words] : corpus) {
    std::vector<std::vector<double>> frames;
    frames.reserve(words.size() * 6);
    for (const auto& w : words)
      for (auto& f : frames_of(w)) frames.push_back(std::move(f));

    int effective = order;
    if (frames.size() < static_cast<std::size_t>(order)) {
      effective = static_cast<int>(frames.size());
      if (info)
        info->warnings.push_back("script '" + label + "': order reduced to " +
                                 std::to_string(effective) + " (only " +
                                 std::to_string(frames.size()) + " frames)");
    }

    const std::uint64_t script_seed = mix_seed(seed ^ mix_seed(script_index));
    GmmModel init = kmeans_init(frames, effective, script_seed, opts.variance_floor);
    auto [model, fit] = em_fit(frames, init, opts);
    if (info) {
      info->fits[label] = std::move(fit);
      info->effective_orders[label] = effective;
    }
    set.models.emplace(label, std::move(model));
    ++script_index;
  }
  return set;
}

std::pair<std::string, std::map<std::string, double>> classify(
    const ScriptModelSet& models, const WordFeatures& word) {
  if (models.models.empty()) throw EmptyData("classify: no models");
  if (word.n != models.side)
    throw DimensionMismatch("classify: word dimension does not match models");

  const auto frames = frames_of(word);
  std::map<std::string, double> scores;
  std::string best_label;
  double best_score = -std::numeric_limits<double>::infinity();
  for (const auto& [label, model] : models.models) {
    const double s = avg_log_likelihood(model, frames);
    scores.emplace(label, s);
    if (s > best_score) {  // strict: ties keep the lexicographically first
      best_score = s;
      best_label = label;
    }
  }
  return {best_label, std::move(scores)};
}

EvalReport tally(const std::vector<std::string>& model_labels,
                 const std::vector<std::pair<std::string, std::string>>& true_pred) {
  if (true_pred.empty()) throw EmptyData("tally: no test samples");

  std::map<std::string, std::size_t> col_of;
  for (std::size_t i = 0; i < model_labels.size(); ++i) col_of[model_labels[i]] = i;

  std::map<std::string, std::size_t> row_of;
  for (const auto& tp : true_pred) row_of.try_emplace(tp.first);
  std::size_t r = 0;
  for (auto& [label, idx] : row_of) idx = r++;

  EvalReport rep;
  rep.pred_labels = model_labels;
  rep.labels.resize(row_of.size());
  for (const auto& [label, idx] : row_of) rep.labels[idx] = label;
  rep.confusion.assign(row_of.size(), std::vector<std::int64_t>(model_labels.size(), 0));

  for (const auto& [t, p] : true_pred) {
    auto col = col_of.find(p);
    if (col == col_of.end()) throw UnknownLabel("tally: unknown predicted label '" + p + "'");
    ++rep.confusion[row_of[t]][col->second];
  }

  rep.per_class_accuracy.resize(rep.labels.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < rep.labels.size(); ++i) {
    std::int64_t row_total = 0;
    for (std::int64_t c : rep.confusion[i]) row_total += c;
    auto col = col_of.find(rep.labels[i]);
    const std::int64_t hits = col == col_of.end() ? 0 : rep.confusion[i][col->second];
    rep.per_class_accuracy[i] = 100.0 * static_cast<double>(hits) / static_cast<double>(row_total);
    sum += rep.per_class_accuracy[i];
  }
  rep.average_accuracy = sum / static_cast<double>(rep.labels.size());
  return rep;
}

EvalReport evaluate(const ScriptModelSet& models, const FeatureCorpus& test) {
  if (test.empty()) throw EmptyData("evaluate: no test samples");
  for (const auto& [label, words] : test) {
    if (!models.models.count(label))
      throw UnknownLabel("evaluate: test label '" + label + "' has no model");
    if (words.empty()) throw EmptyScript("evaluate: no test samples for '" + label + "'");
  }

  std::vector<std::pair<std::string, std::string>> true_pred;
  for (const auto& [label, words] : test)
    for (const auto& w : words) true_pred.emplace_back(label, classify(models, w).first);
  return tally(models.labels(), true_pred);
}

std::vector<SweepRow> sweep_orders(const FeatureCorpus& corpus, const FeatureCorpus& test,
                                   const std::vector<int>& orders, std::uint64_t seed,
                                   const EmOptions& opts) {
  if (orders.empty()) throw Error("sweep_orders: no orders given");
  std::vector<SweepRow> rows;
  for (int order : orders) {
    const ScriptModelSet set = train(corpus, order, seed, opts);
    const EvalReport rep = evaluate(set, test);
    for (std::size_t i = 0; i < rep.labels.size(); ++i)
      rows.push_back({order, rep.labels[i], rep.per_class_accuracy[i]});
    rows.push_back({order, "average", rep.average_accuracy});
  }
  return rows;
}

nlohmann::json model_set_to_json(const ScriptModelSet& set) {
  nlohmann::json models = nlohmann::json::array();
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& [label, model] : set.models) {
    labels.push_back(label);
    models.push_back(gmm_to_json(model));
  }
  return nlohmann::json{{"format_version", 1},
                        {"side", set.side},
                        {"order", set.order},
                        {"labels", labels},
                        {"models", models}};
}

ScriptModelSet model_set_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("format_version"))
    throw ModelFormatError("model set JSON: missing format_version");
  if (j.at("format_version") != 1)
    throw ModelFormatError("model set JSON: unknown format_version");
  ScriptModelSet set;
  try {
    set.side = j.at("side").get<int>();
    set.order = j.at("order").get<int>();
    const auto labels = j.at("labels").get<std::vector<std::string>>();
    const auto& models = j.at("models");
    if (labels.size() != models.size())
      throw ModelFormatError("model set JSON: labels/models size mismatch");
    for (std::size_t i = 0; i < labels.size(); ++i)
      set.models.emplace(labels[i], gmm_from_json(models[i]));
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("model set JSON: ") + e.what());
  }
  for (const auto& [label, model] : set.models)
    if (model.dim != set.side)
      throw ModelFormatError("model set JSON: model dimension does not match side");
  return set;
}

void save_model_set(const ScriptModelSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file: " + path.string());
  out << model_set_to_json(set).dump(2) << "\n";
  if (!out) throw Error("failed writing model file: " + path.string());
}

ScriptModelSet load_model_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("cannot open model file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError("model JSON parse error in " + path.string() + ": " + e.what());
  }
  return model_set_from_json(j);
}

void write_eval_csv(const EvalReport& report, std::ostream& out) {
  out << "true_label,pred_label,count\n";
  for (std::size_t i = 0; i < report.labels.size(); ++i)
    for (std::size_t k = 0; k < report.pred_labels.size(); ++k)
      out << report.labels[i] << "," << report.pred_labels[k] << ","
          << report.confusion[i][k] << "\n";
  out << "label,accuracy_percent\n";
  for (std::size_t i = 0; i < report.labels.size(); ++i)
    out << report.labels[i] << "," << format_percent(report.per_class_accuracy[i]) << "\n";
  out << "average," << format_percent(report.average_accuracy) << "\n";
}

void print_eval_table(const EvalReport& report, std::ostream& out) {
  std::size_t width = 9;
  for (const auto& l : report.labels) width = std::max(width, l.size() + 2);
  for (const auto& l : report.labels) out << std::setw(static_cast<int>(width)) << l;
  out << std::setw(static_cast<int>(width)) << "average" << "\n";
  out << std::fixed << std::setprecision(2);
  for (double a : report.per_class_accuracy) out << std::setw(static_cast<int>(width)) << a;
  out << std::setw(static_cast<int>(width)) << report.average_accuracy << "\n";
  out.unsetf(std::ios::fixed);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "order,label,accuracy_percent\n";
  for (const auto& row : rows)
    out << row.order << "," << row.label << "," << format_percent(row.accuracy) << "\n";
}

}  // namespace scriptid
