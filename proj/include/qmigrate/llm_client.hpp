#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qmigrate {

enum class ChatRole { System, User, Assistant };

std::string_view to_string(ChatRole role);

struct ChatMessage {
  ChatRole role = ChatRole::User;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

inline constexpr double kDefaultTemperature = 0.1;

struct ChatRequest {
  std::string model_id;
  double temperature = kDefaultTemperature;
  std::vector<ChatMessage> messages;

  bool operator==(const ChatRequest&) const = default;
};

struct ChatResponse {
  std::string content;
  std::string model_id;
  std::string finish_reason;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;

  bool operator==(const ChatResponse&) const = default;
};

/// A chat-completion compatible HTTP endpoint. The credential is read from
/// the named environment variable at request time.
struct LiveProvider {
  std::string endpoint;
  std::string credential_env = "QMIGRATE_API_KEY";
};

/// Serves stored cassettes and never touches the network.
struct ReplayProvider {
  std::filesystem::path cassette_dir;
};

/// Returns the given responses in order, one per request.
struct ScriptedProvider {
  std::vector<ChatResponse> responses;
};

using ProviderKind = std::variant<LiveProvider, ReplayProvider, ScriptedProvider>;

class LlmError : public std::runtime_error {
 public:
  enum class Kind {
    TransportError,
    RateLimited,
    ContextOverflow,
    CassetteMiss,
    CredentialMissing,
    ScriptExhausted,
    InvalidRequest,
  };

  LlmError(Kind kind, std::string detail, std::optional<std::chrono::seconds> retry_after = {});

  Kind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }
  std::optional<std::chrono::seconds> retry_after() const { return retry_after_; }

 private:
  Kind kind_;
  std::string detail_;
  std::optional<std::chrono::seconds> retry_after_;
};

struct ClientOptions {
  /// When set, successful live and scripted completions are stored here as
  /// cassettes.
  std::optional<std::filesystem::path> record_dir;
  unsigned max_retries = 3;
  std::chrono::milliseconds initial_backoff{1000};
  std::chrono::milliseconds max_backoff{30000};
  std::chrono::seconds timeout{180};
  /// Bound on in-flight live requests.
  std::size_t concurrency_cap = 4;
  std::function<void(std::string_view)> log;
};

/// Throws LlmError(InvalidRequest) unless the request has messages, a system
/// message only in first position, non-empty system/user content and a
/// temperature in [0, 2].
void validate_request(const ChatRequest& request);

/// Hex SHA-256 over a canonical JSON rendering of model, temperature and the
/// NFC-normalised messages. Stable across processes and platforms.
std::string request_key(const ChatRequest& request);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view data);

/// The body sent to a chat-completion endpoint.
std::string request_body(const ChatRequest& request);

/// Reads the first choice of a chat-completion response body.
ChatResponse parse_completion_body(std::string_view body);

std::filesystem::path cassette_path(const std::filesystem::path& dir, std::string_view key);
void write_cassette(const std::filesystem::path& dir, const ChatRequest& request,
                    const ChatResponse& response);
/// Throws LlmError(CassetteMiss) when no cassette exists for the request.
ChatResponse read_cassette(const std::filesystem::path& dir, const ChatRequest& request);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Thread-safe chat-completion client over one provider.
class ChatClient {
 public:
  explicit ChatClient(ProviderKind provider, ClientOptions options = {});
  ~ChatClient();
  ChatClient(const ChatClient&) = delete;
  ChatClient& operator=(const ChatClient&) = delete;

  ChatResponse complete(const ChatRequest& request);

  const ProviderKind& provider() const { return provider_; }
  bool is_offline() const { return !std::holds_alternative<LiveProvider>(provider_); }

  /// Successful completions served so far.
  std::size_t completions() const { return completions_.load(); }
  /// HTTP attempts made by a live provider, retries included.
  std::size_t http_attempts() const { return http_attempts_.load(); }

 private:
  struct State;

  ChatResponse complete_live(const LiveProvider& live, const ChatRequest& request);
  void log(std::string_view message) const;

  ProviderKind provider_;
  ClientOptions options_;
  std::unique_ptr<State> state_;
  std::atomic<std::size_t> completions_{0};
  std::atomic<std::size_t> http_attempts_{0};
};

}  // namespace qmigrate
