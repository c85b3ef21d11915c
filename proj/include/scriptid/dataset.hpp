#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "scriptid/classifier.hpp"

namespace scriptid {

// Word image files grouped by script label.
using LabeledPaths = std::map<std::string, std::vector<std::filesystem::path>>;

struct DatasetSplit {
  LabeledPaths train;
  LabeledPaths test;
};

// Scans <root>/<script_label>/*.{pgm,png}. Without a manifest the split is
// sorted-filename parity per script (even index = train, odd = test); a
// manifest lists one `path,split` line per image, paths relative to root.
DatasetSplit scan_dataset(const std::filesystem::path& root,
                          const std::filesystem::path& manifest = {});

// load -> Otsu -> binarize -> normalize -> features, for one image.
WordFeatures featurize_image(const std::filesystem::path& path, int side);

FeatureCorpus load_word_features(const LabeledPaths& files, int side);

}  // namespace scriptid
