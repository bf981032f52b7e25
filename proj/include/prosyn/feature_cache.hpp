#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "prosyn/pipeline.hpp"

namespace prosyn {

inline constexpr const char* kFeatureCacheFile = "features.tsv";
inline constexpr const char* kFeatureCacheVersion = "prosyn-features-v1";

/// Hash over every recording's meta, tokens, track and audio bytes.
std::string corpus_content_hash(const Corpus& corpus);
/// Hash over the extraction settings and the duration model.
std::string extraction_config_hash(const ExtractConfig& config, const DurationModel& durations);

struct FeatureCacheKey {
  std::string corpus_hash;
  std::string config_hash;
  bool operator==(const FeatureCacheKey&) const = default;
};

std::string render_feature_cache(const FeatureTable& table, const FeatureCacheKey& key);
void save_feature_cache(const FeatureTable& table, const FeatureCacheKey& key,
                        const std::filesystem::path& path);

/// Returns the cached table, or nothing when the file is missing, carries
/// another format version, or was built from different content or settings.
std::optional<FeatureTable> load_feature_cache(const std::filesystem::path& path,
                                               const FeatureCacheKey& expected);

}  // namespace prosyn
