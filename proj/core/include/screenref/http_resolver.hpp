#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "screenref/eval_harness.hpp"

namespace screenref {

struct HttpResolverConfig {
  /// Full endpoint, e.g. "http://localhost:8080/v1/resolve".
  std::string url;
  /// Sent as "Authorization: Bearer <token>" when present.
  std::optional<std::string> auth_token;
  int max_tokens = 16;
  std::chrono::seconds timeout{60};
};

/// Environment variable consulted for the bearer token.
inline constexpr const char* kAuthTokenEnv = "SCREENREF_API_TOKEN";

/// Remote resolver. POSTs {"prompt": ..., "max_tokens": ...} as JSON and
/// expects {"text": ...} back. One request per prompt, no retries. Any
/// failure raises TransportError.
class HttpResolver final : public Resolver {
 public:
  /// Throws ValidationError on a URL that is not http(s)://host[:port][/path].
  explicit HttpResolver(HttpResolverConfig config);

  std::string resolve(const Prompt& prompt) override;
  std::string name() const override { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

 private:
  HttpResolverConfig config_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
  std::string name_ = "remote";
};

}  // namespace screenref
