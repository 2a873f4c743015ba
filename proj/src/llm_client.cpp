#include "qmigrate/llm_client.hpp"

#include <openssl/evp.h>
#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <random>
#include <semaphore>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace qmigrate {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr std::string_view kKeyDomain = "qmigrate.chat-request.v1\n";

std::string kind_name(LlmError::Kind kind) {
  switch (kind) {
    case LlmError::Kind::TransportError: return "transport error";
    case LlmError::Kind::RateLimited: return "rate limited";
    case LlmError::Kind::ContextOverflow: return "context overflow";
    case LlmError::Kind::CassetteMiss: return "cassette miss";
    case LlmError::Kind::CredentialMissing: return "credential missing";
    case LlmError::Kind::ScriptExhausted: return "scripted responses exhausted";
    case LlmError::Kind::InvalidRequest: return "invalid request";
  }
  return "error";
}

bool is_valid_utf8(std::string_view text) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

std::string to_nfc(std::string_view text) {
  if (!is_valid_utf8(text)) return std::string{text};
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) return std::string{text};
  auto unicode = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  auto normalized = nfc->normalize(unicode, status);
  if (U_FAILURE(status)) return std::string{text};
  std::string out;
  normalized.toUTF8String(out);
  return out;
}


std::string shortest_decimal(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return ec == std::errc{} ? std::string(buffer, ptr) : std::to_string(value);
}

json message_json(const ChatMessage& m) {
  return json{{"role", to_string(m.role)}, {"content", m.content}};
}

json response_json(const ChatResponse& r) {
  return json{{"content", r.content},
              {"model", r.model_id},
              {"finish_reason", r.finish_reason},
              {"prompt_tokens", r.prompt_tokens},
              {"completion_tokens", r.completion_tokens}};
}

struct Endpoint {
  std::string scheme_host_port;
  std::string path;
};

Endpoint split_endpoint(std::string_view url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw LlmError(LlmError::Kind::InvalidRequest, "endpoint '" + std::string{url} + "' lacks a scheme");
  }
  auto path_start = url.find('/', scheme_end + 3);
  Endpoint e;
  if (path_start == std::string_view::npos) {
    e.scheme_host_port = std::string{url};
    e.path = "/v1/chat/completions";
  } else {
    e.scheme_host_port = std::string{url.substr(0, path_start)};
    e.path = std::string{url.substr(path_start)};
  }
  return e;
}

bool mentions_context_limit(const std::string& body) {
  try {
    auto doc = json::parse(body);
    if (doc.contains("error") && doc["error"].is_object()) {
      const auto& err = doc["error"];
      if (err.value("code", json()).is_string() && err["code"].get<std::string>() == "context_length_exceeded") {
        return true;
      }
      if (err.value("message", json()).is_string()) {
        auto msg = err["message"].get<std::string>();
        return msg.find("maximum context length") != std::string::npos ||
               msg.find("context_length_exceeded") != std::string::npos;
      }
    }
  } catch (const json::exception&) {
  }
  return body.find("context_length_exceeded") != std::string::npos;
}

std::optional<std::chrono::seconds> parse_retry_after(const httplib::Result& result) {
  if (!result || !result->has_header("Retry-After")) return std::nullopt;
  auto value = result->get_header_value("Retry-After");
  long seconds = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seconds);
  if (ec != std::errc{} || seconds < 0) return std::nullopt;
  return std::chrono::seconds{seconds};
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0x0f];
  }
  return out;
}

std::string_view to_string(ChatRole role) {
  switch (role) {
    case ChatRole::System: return "system";
    case ChatRole::User: return "user";
    case ChatRole::Assistant: return "assistant";
  }
  return "user";
}

LlmError::LlmError(Kind kind, std::string detail, std::optional<std::chrono::seconds> retry_after)
    : std::runtime_error(kind_name(kind) + (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      detail_(std::move(detail)),
      retry_after_(retry_after) {}

void validate_request(const ChatRequest& request) {
  if (request.messages.empty()) throw LlmError(LlmError::Kind::InvalidRequest, "no messages");
  if (!(request.temperature >= 0.0 && request.temperature <= 2.0)) {
    throw LlmError(LlmError::Kind::InvalidRequest, "temperature outside [0, 2]");
  }
  for (std::size_t i = 0; i < request.messages.size(); ++i) {
    const auto& m = request.messages[i];
    if (m.role == ChatRole::System && i != 0) {
      throw LlmError(LlmError::Kind::InvalidRequest, "system message must come first");
    }
    if (m.role != ChatRole::Assistant && m.content.empty()) {
      throw LlmError(LlmError::Kind::InvalidRequest, "empty " + std::string{to_string(m.role)} + " message");
    }
  }
}

std::string request_key(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back(json{{"role", to_string(m.role)}, {"content", to_nfc(m.content)}});
  }
  // Keys of json objects are ordered, so dump() is canonical.
  json canonical{{"model", to_nfc(request.model_id)},
                 {"temperature", shortest_decimal(request.temperature)},
                 {"messages", std::move(messages)}};
  std::string payload{kKeyDomain};
  payload += canonical.dump(-1, ' ', false, json::error_handler_t::replace);
  return sha256_hex(payload);
}

std::string request_body(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) messages.push_back(message_json(m));
  json body{{"model", request.model_id}, {"temperature", request.temperature}, {"messages", messages}};
  return body.dump(-1, ' ', false, json::error_handler_t::replace);
}

ChatResponse parse_completion_body(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw LlmError(LlmError::Kind::TransportError, std::string{"malformed response body: "} + e.what());
  }
  if (!doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty()) {
    throw LlmError(LlmError::Kind::TransportError, "response has no choices");
  }
  const auto& choice = doc["choices"][0];
  ChatResponse r;
  if (choice.contains("message") && choice["message"].is_object()) {
    const auto& content = choice["message"].value("content", json());
    if (content.is_string()) r.content = content.get<std::string>();
  }
  if (choice.value("finish_reason", json()).is_string()) r.finish_reason = choice["finish_reason"].get<std::string>();
  if (doc.value("model", json()).is_string()) r.model_id = doc["model"].get<std::string>();
  if (doc.contains("usage") && doc["usage"].is_object()) {
    const auto& usage = doc["usage"];
    if (usage.value("prompt_tokens", json()).is_number_unsigned()) r.prompt_tokens = usage["prompt_tokens"].get<std::uint64_t>();
    if (usage.value("completion_tokens", json()).is_number_unsigned()) {
      r.completion_tokens = usage["completion_tokens"].get<std::uint64_t>();
    }
  }
  if (r.finish_reason == "stop" && r.content.empty()) {
    throw LlmError(LlmError::Kind::TransportError, "completion finished without content");
  }
  return r;
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::random_device rd;
  auto tmp = path;
  tmp += ".tmp." + std::to_string(rd()) + "." +
         std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

fs::path cassette_path(const fs::path& dir, std::string_view key) {
  return dir / (std::string{key} + ".json");
}

void write_cassette(const fs::path& dir, const ChatRequest& request, const ChatResponse& response) {
  auto key = request_key(request);
  json doc{{"key", key},
           {"model", request.model_id},
           {"temperature", request.temperature},
           {"messages", request.messages.size()},
           {"response", response_json(response)}};
  write_file_atomic(cassette_path(dir, key), doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n");
}

ChatResponse read_cassette(const fs::path& dir, const ChatRequest& request) {
  auto key = request_key(request);
  auto path = cassette_path(dir, key);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LlmError(LlmError::Kind::CassetteMiss, key);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw LlmError(LlmError::Kind::TransportError, path.string() + ": " + e.what());
  }
  if (doc.value("key", std::string{}) != key || !doc.contains("response")) {
    throw LlmError(LlmError::Kind::CassetteMiss, key + " (cassette does not match request)");
  }
  const auto& r = doc["response"];
  return ChatResponse{r.value("content", std::string{}), r.value("model", std::string{}),
                      r.value("finish_reason", std::string{}), r.value("prompt_tokens", std::uint64_t{0}),
                      r.value("completion_tokens", std::uint64_t{0})};
}

struct ChatClient::State {
  explicit State(std::size_t cap) : in_flight(static_cast<std::ptrdiff_t>(std::max<std::size_t>(cap, 1))) {}

  std::counting_semaphore<1024> in_flight;
  std::mutex script_mutex;
  std::size_t script_next = 0;
};

ChatClient::ChatClient(ProviderKind provider, ClientOptions options)
    : provider_(std::move(provider)),
      options_(std::move(options)),
      state_(std::make_unique<State>(std::min<std::size_t>(options_.concurrency_cap, 1024))) {}

ChatClient::~ChatClient() = default;

void ChatClient::log(std::string_view message) const {
  if (options_.log) options_.log(message);
}

ChatResponse ChatClient::complete(const ChatRequest& request) {
  validate_request(request);
  ChatResponse response;
  bool record = false;
  if (const auto* replay = std::get_if<ReplayProvider>(&provider_)) {
    response = read_cassette(replay->cassette_dir, request);
  } else if (const auto* scripted = std::get_if<ScriptedProvider>(&provider_)) {
    std::lock_guard lock(state_->script_mutex);
    if (state_->script_next >= scripted->responses.size()) {
      throw LlmError(LlmError::Kind::ScriptExhausted,
                     std::to_string(scripted->responses.size()) + " responses configured");
    }
    response = scripted->responses[state_->script_next++];
    record = true;
  } else {
    response = complete_live(std::get<LiveProvider>(provider_), request);
    record = true;
  }
  if (record && options_.record_dir) write_cassette(*options_.record_dir, request, response);
  ++completions_;
  return response;
}

ChatResponse ChatClient::complete_live(const LiveProvider& live, const ChatRequest& request) {
  const char* credential = std::getenv(live.credential_env.c_str());
  if (credential == nullptr || *credential == '\0') {
    throw LlmError(LlmError::Kind::CredentialMissing, live.credential_env);
  }
  auto endpoint = split_endpoint(live.endpoint);
  auto body = request_body(request);

  state_->in_flight.acquire();
  struct Release {
    std::counting_semaphore<1024>& s;
    ~Release() { s.release(); }
  } release{state_->in_flight};

  httplib::Client client(endpoint.scheme_host_port);
  auto seconds = static_cast<time_t>(options_.timeout.count());
  client.set_connection_timeout(seconds, 0);
  client.set_read_timeout(seconds, 0);
  client.set_write_timeout(seconds, 0);
  httplib::Headers headers{{"Authorization", std::string{"Bearer "} + credential}};

  auto backoff = options_.initial_backoff;
  const unsigned total = options_.max_retries + 1;
  for (unsigned attempt = 1;; ++attempt) {
    ++http_attempts_;
    log("POST " + endpoint.path + " attempt " + std::to_string(attempt) + "/" + std::to_string(total));
    auto result = client.Post(endpoint.path, headers, body, "application/json");

    std::optional<LlmError> failure;
    bool retryable = false;
    std::optional<std::chrono::seconds> retry_after;
    if (!result) {
      failure.emplace(LlmError::Kind::TransportError, httplib::to_string(result.error()));
      retryable = true;
    } else if (result->status == 200) {
      auto response = parse_completion_body(result->body);
      if (response.model_id.empty()) response.model_id = request.model_id;
      return response;
    } else if (result->status == 429) {
      retry_after = parse_retry_after(result);
      failure.emplace(LlmError::Kind::RateLimited, "HTTP 429", retry_after);
      retryable = true;
    } else if (result->status >= 500) {
      failure.emplace(LlmError::Kind::TransportError, "HTTP " + std::to_string(result->status));
      retryable = true;
    } else if ((result->status == 400 || result->status == 413) && mentions_context_limit(result->body)) {
      throw LlmError(LlmError::Kind::ContextOverflow, result->body);
    } else {
      throw LlmError(LlmError::Kind::TransportError,
                     "HTTP " + std::to_string(result->status) + ": " + result->body.substr(0, 512));
    }

    if (!retryable || attempt >= total) {
      log("giving up after " + std::to_string(attempt) + " attempts: " + failure->what());
      throw *failure;
    }
    auto wait = backoff;
    if (retry_after) wait = std::max<std::chrono::milliseconds>(wait, *retry_after);
    wait = std::min(wait, options_.max_backoff);
    log(std::string{failure->what()} + "; retrying in " + std::to_string(wait.count()) + " ms");
    std::this_thread::sleep_for(wait);
    backoff = std::min(backoff * 2, options_.max_backoff);
  }
}

}  // namespace qmigrate
