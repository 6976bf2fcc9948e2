/*
 * Copyright 2026 The Lacuna Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LACUNA_APP_SERVICE_HPP_
#define LACUNA_APP_SERVICE_HPP_

#include <memory>

#include "app/service_config.hpp"
#include "common/error.hpp"

namespace lacuna::app {

// HTTP status for a domain error.
int http_status(ErrorCode code);

// The /v1 suggestion and annotation service.
//
//   POST /v1/suggest                suggestions for one gap
//   GET  /v1/health                 status, model hash, uptime
//   GET  /v1/docs                   document index
//   GET  /v1/docs/{id}              one normalized document
//   POST /v1/annotation/instances   build an instance for a doc span
//   GET  /v1/annotation/instances   blind instance records
//   POST /v1/annotation/labels      store one label
//   GET  /v1/annotation/report      agreement over stored labels
//
// Everything but /v1/health answers 503 until loading finishes.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds the socket, starts loading in the background and serves on a
  // worker thread. Returns the bound port (useful with port 0). Throws
  // Error(kIo) when the address cannot be bound.
  int start();

  // Blocks until loading finished; rethrows a load failure.
  void wait_ready();
  bool ready() const;

  // Blocks until stop() is called from elsewhere.
  void wait();
  void stop();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

}  // namespace lacuna::app

#endif  // LACUNA_APP_SERVICE_HPP_
