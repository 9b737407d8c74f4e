#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace marlo::protocol {

class NetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Owning TCP socket descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { close(); }

  [[nodiscard]] int fd() const { return fd_; }
  [[nodiscard]] bool valid() const { return fd_ >= 0; }
  void close();
  /// Half-closes both directions so a blocked reader wakes up.
  void shutdown();
  /// Sends FIN after queued data; reads continue.
  void shutdown_write();

  /// false when the peer is gone.
  bool send_all(std::string_view bytes);
  /// Waits up to `timeout` for readability; false on timeout.
  [[nodiscard]] bool wait_readable(std::chrono::milliseconds timeout) const;

 private:
  int fd_ = -1;
};

struct Endpoint {
  std::string host = "127.0.0.1";
  int port = 0;
};
/// "host:port", "port", or ":port".
Endpoint parse_endpoint(std::string_view text);

Socket listen_tcp(const Endpoint& at, int backlog = 16);
int local_port(const Socket& s);
/// nullopt on timeout.
std::optional<Socket> accept_client(const Socket& listener, std::chrono::milliseconds timeout);
Socket connect_tcp(const Endpoint& to, std::chrono::milliseconds timeout = std::chrono::seconds(5));

/// Splits a byte stream into LF-terminated frames, enforcing the frame size cap. An oversize
/// frame is skipped up to its terminating LF and reported once.
class LineReader {
 public:
  struct Oversize {};
  struct Closed {};
  struct Timeout {};
  using Result = std::variant<std::string, Oversize, Closed, Timeout>;

  explicit LineReader(std::size_t max_frame) : max_(max_frame) {}
  Result next(Socket& s, std::chrono::milliseconds timeout);

 private:
  std::optional<Result> take();

  std::size_t max_;
  std::string buf_;
  bool discarding_ = false;
  bool oversize_pending_ = false;
};

}  // namespace marlo::protocol
