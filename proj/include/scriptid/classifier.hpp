#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "scriptid/features.hpp"
#include "scriptid/gmm.hpp"

namespace scriptid {

using FeatureCorpus = std::map<std::string, std::vector<WordFeatures>>;

// One GMM per script label. `order` is the requested mixture count; a
// script whose pooled frame count falls below it gets a model of reduced
// order (reported through TrainInfo).
struct ScriptModelSet {
  int side = 0;
  int order = 0;
  std::map<std::string, GmmModel> models;

  std::vector<std::string> labels() const;
};

struct TrainInfo {
  std::map<std::string, FitReport> fits;
  std::map<std::string, int> effective_orders;
  std::vector<std::string> warnings;
};

// Confusion rows cover the labels present in the test set; columns cover
// every model label, so off-set predictions stay countable. In the standard
// protocol (every script tested) the matrix is square.
struct EvalReport {
  std::vector<std::string> labels;       // row labels (true)
  std::vector<std::string> pred_labels;  // column labels (predicted)
  std::vector<std::vector<std::int64_t>> confusion;
  std::vector<double> per_class_accuracy;  // percent, aligned with labels
  double average_accuracy = 0.0;           // unweighted mean of per-class

  std::int64_t total() const;
};

struct SweepRow {
  int order = 0;
  std::string label;  // script label or "average"
  double accuracy = 0.0;
};

// The T = 6 frames of one word: [f1, f2, f3, f4, f5, f6].
std::vector<std::vector<double>> frames_of(const WordFeatures& word);

// Fits one GMM per script on the pooled frames of its words.
ScriptModelSet train(const FeatureCorpus& corpus, int order, std::uint64_t seed,
                     const EmOptions& opts = {}, TrainInfo* info = nullptr);

// Argmax of the per-script average log-likelihood over the word's frames;
// ties go to the lexicographically first label.
std::pair<std::string, std::map<std::string, double>> classify(
    const ScriptModelSet& models, const WordFeatures& word);

EvalReport evaluate(const ScriptModelSet& models, const FeatureCorpus& test);

// Confusion bookkeeping from explicit (true, predicted) pairs; evaluate is
// built on this.
EvalReport tally(const std::vector<std::string>& model_labels,
                 const std::vector<std::pair<std::string, std::string>>& true_pred);

// train + evaluate at each order; rows come out grouped per order, each
// group listing every script and then the "average" row.
std::vector<SweepRow> sweep_orders(const FeatureCorpus& corpus, const FeatureCorpus& test,
                                   const std::vector<int>& orders, std::uint64_t seed,
                                   const EmOptions& opts = {});

// Versioned JSON persistence for the whole model set.
nlohmann::json model_set_to_json(const ScriptModelSet& set);
ScriptModelSet model_set_from_json(const nlohmann::json& j);
void save_model_set(const ScriptModelSet& set, const std::filesystem::path& path);
ScriptModelSet load_model_set(const std::filesystem::path& path);

// CSV: true_label,pred_label,count rows, then a label,accuracy_percent
// summary block closed by the average row.
void write_eval_csv(const EvalReport& report, std::ostream& out);

// One column per script plus the average.
void print_eval_table(const EvalReport& report, std::ostream& out);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace scriptid
