#include "scriptid/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "scriptid/classifier.hpp"
#include "scriptid/dataset.hpp"
#include "scriptid/synth.hpp"

namespace scriptid {

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_feature_row(std::ostream& out, const char* name, const std::vector<double>& v) {
  out << name;
  for (double x : v) out << "," << format_value(x);
  out << "\n";
}

DatasetSplit scan_for(const RunConfig& config) {
  if (config.data.empty()) throw UsageError("--data is required");
  return scan_dataset(config.data, config.manifest);
}

FeatureCorpus require_nonempty(FeatureCorpus corpus, const char* what) {
  if (corpus.empty()) throw EmptyData(std::string("no ") + what + " samples");
  return corpus;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write output file: " + path.string());
  return f;
}

}  // namespace

void RunConfig::check() const {
  if (side < 8) throw UsageError("--side must be >= 8");
  if (order < 1) throw UsageError("--order must be >= 1");
  if (variance_floor <= 0.0) throw UsageError("--var-floor must be > 0");
  if (max_iter < 1) throw UsageError("--max-iter must be >= 1");
  if (rel_tol < 0.0) throw UsageError("--rel-tol must be >= 0");
  if (per_class < 1) throw UsageError("--per-class must be >= 1");
  for (int m : orders)
    if (m < 1) throw UsageError("--orders entries must be >= 1");
}

void run_synth(const RunConfig& config, std::ostream& log) {
  config.check();
  if (config.out.empty()) throw UsageError("--out directory is required");
  const auto specs = default_four_class();
  write_corpus(specs, config.side, config.per_class, config.seed, config.out);
  log << "wrote " << specs.size() * static_cast<std::size_t>(config.per_class)
      << " images (" << specs.size() << " classes x " << config.per_class
      << ") under " << config.out.string() << "\n";
}

void run_features(const RunConfig& config, const std::filesystem::path& image,
                  std::ostream& out) {
  config.check();
  const WordFeatures f = featurize_image(image, config.side);
  write_feature_row(out, "f1", f.f1);
  write_feature_row(out, "f2", f.f2);
  write_feature_row(out, "f3", f.f3);
  write_feature_row(out, "f4", f.f4);
  write_feature_row(out, "f5", f.f5);
  write_feature_row(out, "f6", f.f6);
}

void run_train(const RunConfig& config, std::ostream& log) {
  config.check();
  if (config.model.empty()) throw UsageError("--model output path is required");
  const DatasetSplit split = scan_for(config);
  if (split.train.size() < 2) throw Error("at least 2 scripts required");

  const FeatureCorpus corpus =
      require_nonempty(load_word_features(split.train, config.side), "training");
  TrainInfo info;
  const ScriptModelSet set =
      train(corpus, config.order, config.seed, config.em_options(), &info);
  save_model_set(set, config.model);

  for (const auto& warning : info.warnings) log << "warning: " << warning << "\n";
  for (const auto& [label, fit] : info.fits)
    log << label << ": order " << info.effective_orders.at(label) << ", "
        << fit.iterations << " iterations, log-likelihood "
        << format_value(fit.log_likelihood_trace.back())
        << (fit.converged ? "" : " (not converged)") << "\n";
  log << "model written to " << config.model.string() << "\n";
}

void run_classify(const RunConfig& config, const std::filesystem::path& image,
                  std::ostream& out) {
  config.check();
  if (config.model.empty()) throw UsageError("--model is required");
  const ScriptModelSet set = load_model_set(config.model);
  const WordFeatures word = featurize_image(image, set.side);
  const auto [label, scores] = classify(set, word);
  out << "label=" << label << "\n";
  for (const auto& [script, score] : scores)
    out << "score," << script << "," << format_value(score) << "\n";
}

void run_evaluate(const RunConfig& config, std::ostream& out) {
  config.check();
  if (config.model.empty()) throw UsageError("--model is required");
  const ScriptModelSet set = load_model_set(config.model);
  const DatasetSplit split = scan_for(config);
  const FeatureCorpus test =
      require_nonempty(load_word_features(split.test, set.side), "test");
  const EvalReport report = evaluate(set, test);

  if (!config.out.empty()) {
    auto f = open_out(config.out);
    write_eval_csv(report, f);
  }
  print_eval_table(report, out);
}

void run_sweep(const RunConfig& config, std::ostream& out) {
  config.check();
  const DatasetSplit split = scan_for(config);
  const FeatureCorpus corpus =
      require_nonempty(load_word_features(split.train, config.side), "training");
  const FeatureCorpus test =
      require_nonempty(load_word_features(split.test, config.side), "test");
  if (corpus.size() < 2) throw Error("at least 2 scripts required");

  const auto rows = sweep_orders(corpus, test, config.orders, config.seed,
                                 config.em_options());
  if (!config.out.empty()) {
    auto f = open_out(config.out);
    write_sweep_csv(rows, f);
  } else {
    write_sweep_csv(rows, out);
  }
}

}  // namespace scriptid
