#include "screenref/http_resolver.hpp"

#include <httplib.h>
#include <json.hpp>

#include "screenref/error.hpp"

namespace screenref {

HttpResolver::HttpResolver(HttpResolverConfig config) : config_(std::move(config)) {
  const std::string& url = config_.url;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("endpoint URL needs a scheme: " + url);
  std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw ValidationError("unsupported endpoint scheme: " + scheme);
  auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (origin_.size() <= scheme_end + 3) throw ValidationError("endpoint URL has no host: " + url);
}

std::string HttpResolver::resolve(const Prompt& prompt) {
  httplib::Client client(origin_);
  auto secs = static_cast<time_t>(config_.timeout.count());
  client.set_connection_timeout(secs, 0);
  client.set_read_timeout(secs, 0);
  client.set_write_timeout(secs, 0);

  httplib::Headers headers;
  if (config_.auth_token) headers.emplace("Authorization", "Bearer " + *config_.auth_token);

  nlohmann::json body{{"prompt", prompt.text}, {"max_tokens", config_.max_tokens}};
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) throw TransportError("request to " + config_.url + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw TransportError("endpoint " + config_.url + " returned HTTP " + std::to_string(res->status));
  }

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error&) {
    throw TransportError("endpoint reply is not JSON");
  }
  auto it = reply.find("text");
  if (it == reply.end() || !it->is_string()) throw TransportError("endpoint reply has no string \"text\" field");
  return it->get<std::string>();
}

}  // namespace screenref
