#pragma once

#include <memory>
#include <string>

#include "tripplan/service/service.h"

namespace tripplan::service {

// HTTP binding of a service:
//   POST /datasets?name=<name>&radius=<m>   CSV body
//   GET  /datasets
//   GET  /elicitation/questions
//   POST /elicitation/answers               JSON body
//   GET  /profiles/<id>
//   POST /plan                              JSON body
class http_server {
public:
  explicit http_server(service&);
  ~http_server();

  http_server(http_server const&) = delete;
  http_server& operator=(http_server const&) = delete;

  // Returns the bound port (port 0 picks a free one), or -1 on failure.
  int bind(std::string const& host, int port);

  // Blocks until stop() is called.
  bool listen();
  void stop();

private:
  struct impl;
  std::unique_ptr<impl> impl_;
};

}  // namespace tripplan::service
