#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "scriptid/cli.hpp"
#include "scriptid/errors.hpp"

namespace {

void add_common_flags(CLI::App* sub, scriptid::RunConfig& config) {
  sub->add_option("--side", config.side, "canonical square side")->capture_default_str();
  sub->add_option("--seed", config.seed, "RNG seed")->capture_default_str();
}

void add_em_flags(CLI::App* sub, scriptid::RunConfig& config) {
  sub->add_option("--order", config.order, "GMM mixture count")->capture_default_str();
  sub->add_option("--rel-tol", config.rel_tol, "EM relative log-likelihood tolerance")
      ->capture_default_str();
  sub->add_option("--max-iter", config.max_iter, "EM iteration cap")->capture_default_str();
  sub->add_option("--var-floor", config.variance_floor, "variance floor")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "scriptid - directional-energy script identification with per-script "
      "Gaussian mixture models"};
  app.require_subcommand(1);

  scriptid::RunConfig config;
  std::string image_path;

  auto* synth = app.add_subcommand("synth", "generate a synthetic word-image corpus");
  add_common_flags(synth, config);
  synth->add_option("--out", config.out, "output dataset directory")->required();
  synth->add_option("--per-class", config.per_class, "images per class")
      ->capture_default_str();

  auto* features = app.add_subcommand("features", "print the six feature vectors as CSV");
  add_common_flags(features, config);
  features->add_option("image", image_path, "word image file")->required();

  auto* train = app.add_subcommand("train", "fit one GMM per script directory");
  add_common_flags(train, config);
  add_em_flags(train, config);
  train->add_option("--data", config.data, "dataset root (<root>/<script>/*.pgm)")->required();
  train->add_option("--model", config.model, "output model JSON file")->required();
  train->add_option("--manifest", config.manifest, "explicit path,split manifest");

  auto* classify = app.add_subcommand("classify", "classify one word image");
  add_common_flags(classify, config);
  classify->add_option("--model", config.model, "model JSON file")->required();
  classify->add_option("image", image_path, "word image file")->required();

  auto* evaluate = app.add_subcommand("evaluate", "confusion matrix over the test split");
  add_common_flags(evaluate, config);
  evaluate->add_option("--data", config.data, "dataset root")->required();
  evaluate->add_option("--model", config.model, "model JSON file")->required();
  evaluate->add_option("--out", config.out, "confusion CSV output file")->required();
  evaluate->add_option("--manifest", config.manifest, "explicit path,split manifest");

  auto* sweep = app.add_subcommand("sweep", "train and evaluate across GMM orders");
  add_common_flags(sweep, config);
  add_em_flags(sweep, config);
  sweep->add_option("--data", config.data, "dataset root")->required();
  sweep->add_option("--out", config.out, "sweep CSV output file (default: stdout)");
  sweep->add_option("--manifest", config.manifest, "explicit path,split manifest");
  sweep->add_option("--orders", config.orders, "comma-separated mixture counts")
      ->delimiter(',')
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (synth->parsed()) {
      scriptid::run_synth(config, std::cout);
    } else if (features->parsed()) {
      scriptid::run_features(config, image_path, std::cout);
    } else if (train->parsed()) {
      scriptid::run_train(config, std::cout);
    } else if (classify->parsed()) {
      scriptid::run_classify(config, image_path, std::cout);
    } else if (evaluate->parsed()) {
      scriptid::run_evaluate(config, std::cout);
    } else if (sweep->parsed()) {
      scriptid::run_sweep(config, std::cout);
    }
  } catch (const scriptid::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
