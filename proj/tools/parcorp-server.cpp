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

// Runs the service with configuration from PARCORP_* environment keys (see
// service.hpp). Prints "listening <host>:<port>" once bound.

#include <csignal>
#include <iostream>

#include "parcorp/service/http.hpp"

namespace {
parcorp::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}
}  // namespace

int main() {
  try {
    auto config = parcorp::config_from_env();
    parcorp::Service service(config);
    parcorp::HttpServer server(service);
    const auto host = parcorp::split_host_port(config.bind).first;
    const int bound = server.bind(config.bind);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening " << host << ":" << bound << std::endl;
    server.serve();
  } catch (const parcorp::Error& e) {
    std::cerr << "parcorp-server: " << parcorp::to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
