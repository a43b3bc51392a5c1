#pragma once

#include <nlohmann/json_fwd.hpp>
#include <memory>
#include <string>
#include <vector>

namespace eigencond {

inline constexpr const char* kToolVersion = "0.1.0";

/// SHA-256 of a file's contents as lowercase hex.
std::string sha256_file(const std::string& path);

/// Run provenance record. A run writes the manifest with status "running"
/// before emitting data, then rewrites it with output digests and status
/// "complete" (or "interrupted"); a manifest stuck at "running" marks an
/// aborted run.
class RunManifest {
 public:
  RunManifest(std::string path, std::string command, const nlohmann::json& config,
              std::uint64_t seed);
  ~RunManifest();

  void add_output(const std::string& path);
  void finalize(const std::string& status = "complete");

 private:
  std::string path_;
  std::unique_ptr<nlohmann::json> body_;
  std::vector<std::string> outputs_;
  bool finalized_ = false;

  void write(const std::string& status, bool with_digests);
};

}  // namespace eigencond
