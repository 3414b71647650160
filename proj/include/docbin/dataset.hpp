#ifndef DOCBIN_DATASET_HPP
#define DOCBIN_DATASET_HPP

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "docbin/errors.hpp"

namespace docbin {

struct DatasetPair {
  std::filesystem::path image;
  std::filesystem::path gt;
};

struct DatasetManifest {
  std::string name;
  std::vector<DatasetPair> pairs;  // sorted by image filename
};

namespace detail {

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline bool supported_image_ext(const std::filesystem::path& p) {
  const std::string e = lower(p.extension().string());
  return e == ".png" || e == ".pgm";
}

}  // namespace detail

// Pairs every image in `dir` with its ground truth named <stem><suffix>
// (case-insensitive, any supported extension). Files carrying the suffix
// are treated as ground truth only.
inline DatasetManifest discover_dataset(const std::filesystem::path& dir,
                                        const std::string& gt_suffix = "_GT") {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec) || ec)
    throw FileNotFound("dataset directory not found: " + dir.string());
  if (gt_suffix.empty()) throw InvalidParams("discover_dataset: gt suffix must be non-empty");

  const std::string suffix = detail::lower(gt_suffix);
  std::map<std::string, std::filesystem::path> gts;
  std::vector<std::filesystem::path> originals;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::filesystem::path& p = entry.path();
    if (!detail::supported_image_ext(p)) continue;
    const std::string stem = detail::lower(p.stem().string());
    if (stem.size() > suffix.size() && stem.ends_with(suffix))
      gts.emplace(stem.substr(0, stem.size() - suffix.size()), p);
    else
      originals.push_back(p);
  }

  DatasetManifest m;
  m.name = dir.filename().string();
  if (m.name.empty()) m.name = dir.parent_path().filename().string();
  for (const auto& img : originals) {
    auto it = gts.find(detail::lower(img.stem().string()));
    if (it != gts.end()) m.pairs.push_back({img, it->second});
  }
  std::sort(m.pairs.begin(), m.pairs.end(),
            [](const DatasetPair& a, const DatasetPair& b) { return a.image.filename() < b.image.filename(); });
  return m;
}

}  // namespace docbin

#endif  // DOCBIN_DATASET_HPP
