#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace mecsim::net {

std::array<std::uint8_t, 20> sha1(const std::string& data);
std::string base64_encode(const std::uint8_t* data, std::size_t len);

/// Sec-WebSocket-Accept value for a client key (RFC 6455 section 4.2.2).
std::string ws_accept_key(const std::string& client_key);

enum class WsOpcode : std::uint8_t {
    text = 0x1,
    binary = 0x2,
    close = 0x8,
    ping = 0x9,
    pong = 0xa,
};

struct WsFrame {
    WsOpcode opcode = WsOpcode::text;
    std::string payload;
};

/// Single unfragmented frame. Client-to-server frames must be masked.
std::string encode_frame(const WsFrame& frame, bool masked, std::uint32_t masking_key = 0);

/// Parses one frame from the front of `data`; returns the frame and the
/// number of bytes consumed, or nullopt if more bytes are needed.
std::optional<std::pair<WsFrame, std::size_t>> decode_frame(const std::string& data);

/// Blocking WebSocket server for the gNB stats/control API. One thread per
/// connection; each text frame is answered with handler(payload).
class WsServer {
public:
    using Handler = std::function<std::string(const std::string&)>;

    WsServer() = default;
    ~WsServer() { stop(); }

    bool start(const std::string& host, int port, Handler handler);
    void stop();
    bool running() const { return running_.load(); }
    int port() const { return port_; }

private:
    void accept_loop();
    void serve_connection(int fd);

    Handler handler_;
    int listen_fd_ = -1;
    int port_ = 0;
    std::atomic<bool> running_{false};
    std::thread accept_thread_;
    std::vector<std::thread> connections_;
};

/// Minimal client used by tests and the CLI to talk to a WsServer.
class WsClient {
public:
    ~WsClient() { close(); }

    bool connect(const std::string& host, int port);
    bool send_text(const std::string& payload);
    std::optional<std::string> recv_text();
    void close();

private:
    bool read_more();

    int fd_ = -1;
    std::string buffer_;
};

}  // namespace mecsim::net
