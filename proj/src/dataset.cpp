#include "scriptid/dataset.hpp"

#include <algorithm>
#include <fstream>

#include "scriptid/image.hpp"

namespace scriptid {

namespace {

bool supported_image(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  return ext == ".pgm" || (png_supported() && ext == ".png");
}

// manifest lines: <relative path>,<train|test>
std::map<std::string, std::string> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("cannot open manifest: " + path.string());
  std::map<std::string, std::string> split_of;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos)
      throw Error("manifest line " + std::to_string(line_no) + ": expected 'path,split'");
    const std::string p = line.substr(0, comma);
    const std::string s = line.substr(comma + 1);
    if (s != "train" && s != "test")
      throw Error("manifest line " + std::to_string(line_no) + ": split must be train or test");
    split_of[p] = s;
  }
  return split_of;
}

}  // namespace

DatasetSplit scan_dataset(const std::filesystem::path& root,
                          const std::filesystem::path& manifest) {
  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec))
    throw FileNotFound("dataset directory not found: " + root.string());

  std::map<std::string, std::string> split_of;
  const bool use_manifest = !manifest.empty();
  if (use_manifest) split_of = read_manifest(manifest);

  DatasetSplit out;
  std::vector<std::filesystem::path> script_dirs;
  for (const auto& entry : std::filesystem::directory_iterator(root))
    if (entry.is_directory()) script_dirs.push_back(entry.path());
  std::sort(script_dirs.begin(), script_dirs.end());

  for (const auto& dir : script_dirs) {
    const std::string label = dir.filename().string();
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
      if (entry.is_regular_file() && supported_image(entry.path()))
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) continue;

    for (std::size_t i = 0; i < files.size(); ++i) {
      bool is_train;
      if (use_manifest) {
        const std::string rel = label + "/" + files[i].filename().string();
        auto it = split_of.find(rel);
        if (it == split_of.end()) continue;  // unlisted files are excluded
        is_train = it->second == "train";
      } else {
        is_train = i % 2 == 0;
      }
      (is_train ? out.train : out.test)[label].push_back(files[i]);
    }
  }
  return out;
}

WordFeatures featurize_image(const std::filesystem::path& path, int side) {
  const GrayImage gray = load_gray(path);
  const int t = otsu_threshold(gray);
  const BinaryImage binary = binarize(gray, t);
  return extract_word_features(normalize_to_square(binary, side));
}

FeatureCorpus load_word_features(const LabeledPaths& files, int side) {
  FeatureCorpus corpus;
  for (const auto& [label, paths] : files) {
    auto& words = corpus[label];
    words.reserve(paths.size());
    for (const auto& p : paths) words.push_back(featurize_image(p, side));
  }
  return corpus;
}

}  // namespace scriptid
