#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "interdiv/http.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "interdiv/error.hpp"
#include "json.hpp"

namespace interdiv {

using nlohmann::json;

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string fixture_key(std::string_view url) {
  const auto query = url.find('?');
  if (query == std::string_view::npos) return sha256_hex(url);

  std::string canonical(url.substr(0, query));
  char separator = '?';
  std::string_view params = url.substr(query + 1);
  while (!params.empty()) {
    const auto amp = params.find('&');
    const auto param = params.substr(0, amp);
    if (!param.starts_with("mailto=") && !param.empty()) {
      canonical += separator;
      canonical += param;
      separator = '&';
    }
    if (amp == std::string_view::npos) break;
    params.remove_prefix(amp + 1);
  }
  return sha256_hex(canonical);
}

std::string fixture_document(const std::string& url, const HttpResponse& response) {
  json headers = json::object();
  for (const auto& [name, value] : response.headers) headers[name] = value;
  json doc{{"request", {{"method", "GET"}, {"url", url}}},
           {"response", {{"status", response.status}, {"headers", headers}, {"body", response.body}}}};
  return doc.dump(2) + "\n";
}

HttpResponse parse_fixture_document(std::string_view text) {
  const auto doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.contains("response")) throw NetworkError("malformed fixture document");
  const auto& r = doc.at("response");
  HttpResponse response;
  response.status = r.value("status", 0);
  if (r.contains("headers")) {
    for (const auto& [name, value] : r.at("headers").items()) {
      std::string lower = name;
      std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
      response.headers[lower] = value.get<std::string>();
    }
  }
  // Bodies may be stored as a JSON string or inline as a JSON value for readability.
  const auto& body = r.at("body");
  response.body = body.is_string() ? body.get<std::string>() : body.dump();
  return response;
}

HttpResponse LiveTransport::get(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_follow_location(true);
  auto result = client.Get(path);
  HttpResponse response;
  if (!result) return response;
  response.status = result->status;
  response.body = result->body;
  for (const auto& [name, value] : result->headers) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    response.headers[lower] = value;
  }
  return response;
}

HttpResponse FixtureTransport::get(const std::string& url) {
  const auto path = dir_ / (fixture_key(url) + ".json");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NetworkError("no recorded fixture for " + url + " (expected " + path.string() + ")");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_fixture_document(buffer.str());
}

RecordingTransport::RecordingTransport(std::shared_ptr<HttpTransport> inner, std::filesystem::path dir)
    : inner_(std::move(inner)), dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

HttpResponse RecordingTransport::get(const std::string& url) {
  auto response = inner_->get(url);
  std::lock_guard lock(write_mutex_);
  std::ofstream out(dir_ / (fixture_key(url) + ".json"), std::ios::binary);
  out << fixture_document(url, response);
  return response;
}

}  // namespace interdiv
