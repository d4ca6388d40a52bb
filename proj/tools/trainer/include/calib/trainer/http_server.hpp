#pragma once

#include <memory>
#include <string>

#include "calib/api/service.hpp"

namespace calib::trainer {

struct ListenAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

// "host:port", ":port" or "port". Throws Error(kInvalidArgument).
ListenAddress parse_listen_address(const std::string& text);

// HTTP/1.1 adapter in front of ApiService. Every request is answered with the
// service's JSON body and status.
class HttpFrontend {
 public:
  explicit HttpFrontend(const api::ApiService& service);
  ~HttpFrontend();

  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  // Returns the bound port; port 0 picks a free one. Throws Error(kIo).
  int bind(const ListenAddress& address);
  // Blocks until stop().
  void serve();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace calib::trainer
