#include "eigencond/manifest.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <fstream>

#include "eigencond/errors.hpp"

namespace eigencond {

using nlohmann::json;

namespace {

std::string timestamp_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for digest: " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.good()) {
    in.read(buf, sizeof(buf));
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

RunManifest::RunManifest(std::string path, std::string command, const json& config,
                         std::uint64_t seed)
    : path_(std::move(path)), body_(std::make_unique<json>()) {
  (*body_)["tool"] = "eigencond";
  (*body_)["tool_version"] = kToolVersion;
  (*body_)["command"] = std::move(command);
  (*body_)["config"] = config;
  (*body_)["seed"] = seed;
  (*body_)["started"] = timestamp_now();
  write("running", false);
}

RunManifest::~RunManifest() = default;

void RunManifest::add_output(const std::string& path) { outputs_.push_back(path); }

void RunManifest::write(const std::string& status, bool with_digests) {
  (*body_)["status"] = status;
  json outs = json::array();
  for (const std::string& p : outputs_) {
    json o = {{"path", p}};
    if (with_digests) o["sha256"] = sha256_file(p);
    outs.push_back(o);
  }
  (*body_)["outputs"] = outs;
  if (with_digests) (*body_)["finished"] = timestamp_now();
  std::ofstream out(path_);
  if (!out) throw Error("cannot write manifest: " + path_);
  out << body_->dump(2) << "\n";
}

void RunManifest::finalize(const std::string& status) {
  if (finalized_) return;
  write(status, true);
  finalized_ = true;
}

}  // namespace eigencond
