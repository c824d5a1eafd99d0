#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

namespace interdiv {

struct HttpResponse {
  int status = 0;  // 0 means the transport failed before a response arrived
  std::string body;
  std::map<std::string, std::string> headers;  // lower-case names
};

/// GET-only transport; implementations must be safe to call from several threads.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse get(const std::string& url) = 0;
};

/// Real network transport (cpp-httplib, TLS via OpenSSL).
class LiveTransport final : public HttpTransport {
 public:
  explicit LiveTransport(std::chrono::seconds timeout = std::chrono::seconds(30)) : timeout_(timeout) {}
  HttpResponse get(const std::string& url) override;

 private:
  std::chrono::seconds timeout_;
};

/// Stable fixture name for a request: SHA-256 of the URL with any `mailto` query parameter removed.
std::string fixture_key(std::string_view url);

/// Replays recorded responses from `<dir>/<fixture_key(url)>.json`; a missing fixture is a NetworkError.
class FixtureTransport final : public HttpTransport {
 public:
  explicit FixtureTransport(std::filesystem::path dir) : dir_(std::move(dir)) {}
  HttpResponse get(const std::string& url) override;

 private:
  std::filesystem::path dir_;
};

/// Forwards to another transport and writes every response as a fixture.
class RecordingTransport final : public HttpTransport {
 public:
  RecordingTransport(std::shared_ptr<HttpTransport> inner, std::filesystem::path dir);
  HttpResponse get(const std::string& url) override;

 private:
  std::shared_ptr<HttpTransport> inner_;
  std::filesystem::path dir_;
  std::mutex write_mutex_;
};

/// Serialized fixture document: {"request": {"method", "url"}, "response": {"status", "headers", "body"}}.
std::string fixture_document(const std::string& url, const HttpResponse& response);
HttpResponse parse_fixture_document(std::string_view text);

std::string sha256_hex(std::string_view bytes);

}  // namespace interdiv
