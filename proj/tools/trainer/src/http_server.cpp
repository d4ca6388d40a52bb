#include "calib/trainer/http_server.hpp"

#include <charconv>

#include <httplib.h>

#include "calib/error.hpp"

namespace calib::trainer {

ListenAddress parse_listen_address(const std::string& text) {
  ListenAddress address;
  std::string port_text = text;
  if (const auto colon = text.rfind(':'); colon != std::string::npos) {
    if (colon > 0) address.host = text.substr(0, colon);
    port_text = text.substr(colon + 1);
  }
  int port = -1;
  const auto [end, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (port_text.empty() || ec != std::errc() || end != port_text.data() + port_text.size() ||
      port < 0 || port > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "bad listen address '" + text + "'");
  }
  address.port = port;
  return address;
}

struct HttpFrontend::Impl {
  explicit Impl(const api::ApiService& s) : service(s) {}

  const api::ApiService& service;
  httplib::Server server;
};

HttpFrontend::HttpFrontend(const api::ApiService& service) : impl_(std::make_unique<Impl>(service)) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    api::ApiRequest request;
    request.method = req.method;
    request.path = req.path;
    request.body = req.body;
    for (const auto& [key, value] : req.params) request.query[key] = value;
    const api::ApiResponse response = impl_->service.handle(request);
    res.status = response.status;
    res.set_content(response.body.dump(), "application/json");
  };
  auto& server = impl_->server;
  server.Get(".*", forward);
  server.Post(".*", forward);
  server.Put(".*", forward);
  server.Delete(".*", forward);
  server.Patch(".*", forward);
}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::bind(const ListenAddress& address) {
  int port = address.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(address.host);
    if (port < 0) throw Error(ErrorCode::kIo, "cannot bind " + address.host);
  } else if (!impl_->server.bind_to_port(address.host, port)) {
    throw Error(ErrorCode::kIo, "cannot bind " + address.host + ":" + std::to_string(port));
  }
  return port;
}

void HttpFrontend::serve() { impl_->server.listen_after_bind(); }

void HttpFrontend::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpFrontend::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace calib::trainer
