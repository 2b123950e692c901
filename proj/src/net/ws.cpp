#include "mecsim/net/ws.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

namespace mecsim::net {

// ---- SHA-1 (FIPS 180-1), enough for the handshake accept key ----

std::array<std::uint8_t, 20> sha1(const std::string& data) {
    std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};

    std::string msg = data;
    std::uint64_t bit_len = static_cast<std::uint64_t>(msg.size()) * 8;
    msg.push_back(static_cast<char>(0x80));
    while (msg.size() % 64 != 56) {
        msg.push_back('\0');
    }
    for (int i = 7; i >= 0; --i) {
        msg.push_back(static_cast<char>((bit_len >> (i * 8)) & 0xff));
    }

    auto rotl = [](std::uint32_t x, int n) { return (x << n) | (x >> (32 - n)); };

    for (std::size_t chunk = 0; chunk < msg.size(); chunk += 64) {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i) {
            w[i] = (static_cast<std::uint8_t>(msg[chunk + i * 4]) << 24) |
                   (static_cast<std::uint8_t>(msg[chunk + i * 4 + 1]) << 16) |
                   (static_cast<std::uint8_t>(msg[chunk + i * 4 + 2]) << 8) |
                   static_cast<std::uint8_t>(msg[chunk + i * 4 + 3]);
        }
        for (int i = 16; i < 80; ++i) {
            w[i] = rotl(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        }
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) {
                f = (b & c) | ((~b) & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            std::uint32_t temp = rotl(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rotl(b, 30);
            b = a;
            a = temp;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }

    std::array<std::uint8_t, 20> digest{};
    for (int i = 0; i < 5; ++i) {
        digest[i * 4] = (h[i] >> 24) & 0xff;
        digest[i * 4 + 1] = (h[i] >> 16) & 0xff;
        digest[i * 4 + 2] = (h[i] >> 8) & 0xff;
        digest[i * 4 + 3] = h[i] & 0xff;
    }
    return digest;
}

std::string base64_encode(const std::uint8_t* data, std::size_t len) {
    static const char alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (std::size_t i = 0; i < len; i += 3) {
        std::uint32_t block = data[i] << 16;
        if (i + 1 < len) block |= data[i + 1] << 8;
        if (i + 2 < len) block |= data[i + 2];
        out += alphabet[(block >> 18) & 0x3f];
        out += alphabet[(block >> 12) & 0x3f];
        out += i + 1 < len ? alphabet[(block >> 6) & 0x3f] : '=';
        out += i + 2 < len ? alphabet[block & 0x3f] : '=';
    }
    return out;
}

std::string ws_accept_key(const std::string& client_key) {
    static const char guid[] = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
    auto digest = sha1(client_key + guid);
    return base64_encode(digest.data(), digest.size());
}

std::string encode_frame(const WsFrame& frame, bool masked, std::uint32_t masking_key) {
    std::string out;
    out.push_back(static_cast<char>(0x80 | static_cast<std::uint8_t>(frame.opcode)));
    std::size_t len = frame.payload.size();
    std::uint8_t mask_bit = masked ? 0x80 : 0x00;
    if (len < 126) {
        out.push_back(static_cast<char>(mask_bit | len));
    } else if (len <= 0xffff) {
        out.push_back(static_cast<char>(mask_bit | 126));
        out.push_back(static_cast<char>((len >> 8) & 0xff));
        out.push_back(static_cast<char>(len & 0xff));
    } else {
        out.push_back(static_cast<char>(mask_bit | 127));
        for (int i = 7; i >= 0; --i) {
            out.push_back(static_cast<char>((static_cast<std::uint64_t>(len) >> (i * 8)) & 0xff));
        }
    }
    if (masked) {
        std::uint8_t key[4] = {static_cast<std::uint8_t>((masking_key >> 24) & 0xff),
                               static_cast<std::uint8_t>((masking_key >> 16) & 0xff),
                               static_cast<std::uint8_t>((masking_key >> 8) & 0xff),
                               static_cast<std::uint8_t>(masking_key & 0xff)};
        out.append(reinterpret_cast<const char*>(key), 4);
        for (std::size_t i = 0; i < len; ++i) {
            out.push_back(static_cast<char>(frame.payload[i] ^ key[i % 4]));
        }
    } else {
        out += frame.payload;
    }
    return out;
}

std::optional<std::pair<WsFrame, std::size_t>> decode_frame(const std::string& data) {
    if (data.size() < 2) {
        return std::nullopt;
    }
    std::uint8_t byte0 = static_cast<std::uint8_t>(data[0]);
    std::uint8_t byte1 = static_cast<std::uint8_t>(data[1]);
    bool masked = byte1 & 0x80;
    std::uint64_t len = byte1 & 0x7f;
    std::size_t pos = 2;
    if (len == 126) {
        if (data.size() < 4) return std::nullopt;
        len = (static_cast<std::uint8_t>(data[2]) << 8) | static_cast<std::uint8_t>(data[3]);
        pos = 4;
    } else if (len == 127) {
        if (data.size() < 10) return std::nullopt;
        len = 0;
        for (int i = 0; i < 8; ++i) {
            len = (len << 8) | static_cast<std::uint8_t>(data[2 + i]);
        }
        pos = 10;
    }
    std::uint8_t key[4] = {0, 0, 0, 0};
    if (masked) {
        if (data.size() < pos + 4) return std::nullopt;
        std::memcpy(key, data.data() + pos, 4);
        pos += 4;
    }
    if (data.size() < pos + len) {
        return std::nullopt;
    }
    WsFrame frame;
    frame.opcode = static_cast<WsOpcode>(byte0 & 0x0f);
    frame.payload.resize(len);
    for (std::uint64_t i = 0; i < len; ++i) {
        char c = data[pos + i];
        frame.payload[i] = masked ? static_cast<char>(c ^ key[i % 4]) : c;
    }
    return std::make_pair(std::move(frame), pos + len);
}

// ---- server ----

namespace {

bool send_all(int fd, const std::string& data) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) {
            return false;
        }
        sent += static_cast<std::size_t>(n);
    }
    return true;
}

std::string header_value(const std::string& request, const std::string& name) {
    // case-insensitive header lookup
    std::string lower_request;
    lower_request.reserve(request.size());
    for (char c : request) {
        lower_request += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    std::string needle = "\r\n";
    for (char c : name) {
        needle += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    needle += ":";
    auto pos = lower_request.find(needle);
    if (pos == std::string::npos) {
        return "";
    }
    pos += needle.size();
    auto end = request.find("\r\n", pos);
    std::string value = request.substr(pos, end - pos);
    while (!value.empty() && value.front() == ' ') value.erase(value.begin());
    while (!value.empty() && (value.back() == ' ' || value.back() == '\r')) value.pop_back();
    return value;
}

}  // namespace

bool WsServer::start(const std::string& host, int port, Handler handler) {
    handler_ = std::move(handler);
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) {
        return false;
    }
    int yes = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    ::inet_pton(AF_INET, host.c_str(), &addr.sin_addr);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0 ||
        ::listen(listen_fd_, 8) < 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        return false;
    }
    port_ = port;
    running_ = true;
    accept_thread_ = std::thread([this] { accept_loop(); });
    return true;
}

void WsServer::stop() {
    if (!running_.exchange(false)) {
        return;
    }
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    if (accept_thread_.joinable()) {
        accept_thread_.join();
    }
    for (auto& thread : connections_) {
        if (thread.joinable()) {
            thread.join();
        }
    }
    connections_.clear();
}

void WsServer::accept_loop() {
    while (running_) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            break;
        }
        connections_.emplace_back([this, fd] { serve_connection(fd); });
    }
}

void WsServer::serve_connection(int fd) {
    std::string request;
    char chunk[1024];
    while (request.find("\r\n\r\n") == std::string::npos) {
        ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
        if (n <= 0) {
            ::close(fd);
            return;
        }
        request.append(chunk, static_cast<std::size_t>(n));
        if (request.size() > 16384) {
            ::close(fd);
            return;
        }
    }
    std::string key = header_value(request, "Sec-WebSocket-Key");
    if (key.empty()) {
        send_all(fd, "HTTP/1.1 400 Bad Request\r\nConnection: close\r\n\r\n");
        ::close(fd);
        return;
    }
    std::string response = "HTTP/1.1 101 Switching Protocols\r\n"
                           "Upgrade: websocket\r\n"
                           "Connection: Upgrade\r\n"
                           "Sec-WebSocket-Accept: " + ws_accept_key(key) + "\r\n\r\n";
    if (!send_all(fd, response)) {
        ::close(fd);
        return;
    }

    std::string buffer = request.substr(request.find("\r\n\r\n") + 4);
    while (running_) {
        auto decoded = decode_frame(buffer);
        if (!decoded) {
            ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
            if (n <= 0) {
                break;
            }
            buffer.append(chunk, static_cast<std::size_t>(n));
            continue;
        }
        auto [frame, consumed] = std::move(*decoded);
        buffer.erase(0, consumed);
        if (frame.opcode == WsOpcode::close) {
            send_all(fd, encode_frame(WsFrame{WsOpcode::close, ""}, false));
            break;
        }
        if (frame.opcode == WsOpcode::ping) {
            send_all(fd, encode_frame(WsFrame{WsOpcode::pong, frame.payload}, false));
            continue;
        }
        if (frame.opcode == WsOpcode::text) {
            std::string reply = handler_(frame.payload);
            if (!send_all(fd, encode_frame(WsFrame{WsOpcode::text, reply}, false))) {
                break;
            }
        }
    }
    ::close(fd);
}

// ---- client ----

bool WsClient::connect(const std::string& host, int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) {
        return false;
    }
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    ::inet_pton(AF_INET, host.c_str(), &addr.sin_addr);
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        close();
        return false;
    }
    std::string request = "GET / HTTP/1.1\r\n"
                          "Host: " + host + ":" + std::to_string(port) + "\r\n"
                          "Upgrade: websocket\r\n"
                          "Connection: Upgrade\r\n"
                          "Sec-WebSocket-Key: dGhlIHNhbXBsZSBub25jZQ==\r\n"
                          "Sec-WebSocket-Version: 13\r\n\r\n";
    if (!send_all(fd_, request)) {
        close();
        return false;
    }
    std::string response;
    char chunk[1024];
    while (response.find("\r\n\r\n") == std::string::npos) {
        ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
        if (n <= 0) {
            close();
            return false;
        }
        response.append(chunk, static_cast<std::size_t>(n));
    }
    if (response.find(" 101 ") == std::string::npos) {
        close();
        return false;
    }
    buffer_ = response.substr(response.find("\r\n\r\n") + 4);
    return true;
}

bool WsClient::send_text(const std::string& payload) {
    if (fd_ < 0) {
        return false;
    }
    return send_all(fd_, encode_frame(WsFrame{WsOpcode::text, payload}, true, 0xa5a5a5a5u));
}

bool WsClient::read_more() {
    char chunk[1024];
    ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (n <= 0) {
        return false;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
    return true;
}

std::optional<std::string> WsClient::recv_text() {
    if (fd_ < 0) {
        return std::nullopt;
    }
    while (true) {
        auto decoded = decode_frame(buffer_);
        if (!decoded) {
            if (!read_more()) {
                return std::nullopt;
            }
            continue;
        }
        auto [frame, consumed] = std::move(*decoded);
        buffer_.erase(0, consumed);
        if (frame.opcode == WsOpcode::text) {
            return frame.payload;
        }
        if (frame.opcode == WsOpcode::close) {
            return std::nullopt;
        }
        // ignore pings/pongs from the server side
    }
}

void WsClient::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

}  // namespace mecsim::net
