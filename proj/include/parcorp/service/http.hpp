// Copyright 2026 The parcorp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cpp-httplib glue: server side adapts to Router, client side produces the
// same Request/Response pair.

#pragma once

#include <httplib.h>

#include <cctype>
#include <string>
#include <utility>

#include "parcorp/service/router.hpp"

namespace parcorp {

inline std::pair<std::string, int> split_host_port(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::InvalidValue, "bind address must be host:port", bind);
  int port = 0;
  const auto text = bind.substr(colon + 1);
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), port);
  if (ec != std::errc() || p != text.data() + text.size() || port < 0 || port > 65535) {
    throw Error(ErrorCode::InvalidValue, "bad port", bind);
  }
  return {bind.substr(0, colon), port};
}

inline Request to_request(const httplib::Request& r) {
  Request req{r.method, r.path, {}, {}, r.body};
  for (const auto& [k, v] : r.params) req.query[k] = v;
  for (const auto& [k, v] : r.headers) {
    std::string key = k;
    for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    req.headers[key] = v;
  }
  return req;
}

class HttpServer {
 public:
  explicit HttpServer(Service& service) : router_(service) {
    server_.set_payload_max_length(256u << 20);
    auto handler = [this](const httplib::Request& r, httplib::Response& res) {
      const auto out = router_.handle(to_request(r));
      res.status = out.status;
      res.set_content(out.body, out.content_type);
    };
    const std::string all = "/.*";
    server_.Get(all, handler);
    server_.Post(all, handler);
    server_.Put(all, handler);
    server_.Patch(all, handler);
    server_.Delete(all, handler);
  }

  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& address) {
    auto [host, port] = split_host_port(address);
    if (port == 0) {
      port = server_.bind_to_any_port(host);
      if (port < 0) throw Error(ErrorCode::BindFailure, "cannot bind " + address, address);
    } else if (!server_.bind_to_port(host, port)) {
      throw Error(ErrorCode::BindFailure, "cannot bind " + address, address);
    }
    return port;
  }

  /// Blocks until stop().
  void serve() { server_.listen_after_bind(); }
  void stop() { server_.stop(); }

 private:
  Router router_;
  httplib::Server server_;
};

/// Sends a Request to a running server.
inline Response http_send(const std::string& base_url, const Request& req) {
  httplib::Client client(base_url);
  client.set_read_timeout(120, 0);
  httplib::Headers headers;
  for (const auto& [k, v] : req.headers) headers.emplace(k, v);
  std::string path = req.path;
  if (!req.query.empty()) path += "?" + httplib::detail::params_to_query_str(httplib::Params(req.query.begin(), req.query.end()));
  const std::string type = req.headers.count("content-type") ? req.headers.at("content-type") : "application/json";
  httplib::Result res;
  if (req.method == "GET") {
    res = client.Get(path, headers);
  } else if (req.method == "POST") {
    res = client.Post(path, headers, req.body, type);
  } else if (req.method == "PUT") {
    res = client.Put(path, headers, req.body, type);
  } else if (req.method == "PATCH") {
    res = client.Patch(path, headers, req.body, type);
  } else if (req.method == "DELETE") {
    res = client.Delete(path, headers, req.body, type);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unsupported method " + req.method);
  }
  if (!res) {
    throw Error(ErrorCode::StoreUnavailable, "cannot reach " + base_url + ": " + httplib::to_string(res.error()), base_url);
  }
  const auto type_it = res->headers.find("Content-Type");
  return {res->status, type_it == res->headers.end() ? std::string() : type_it->second, res->body};
}

}  // namespace parcorp
