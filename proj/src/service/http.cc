#include "tripplan/service/http.h"

#include "httplib.h"

namespace tripplan::service {

namespace {

void reply(httplib::Response& res, response const& r) {
  res.status = r.status_;
  res.set_content(r.body_.dump(), "application/json");
}

}  // namespace

struct http_server::impl {
  explicit impl(service& s) : service_{s} {
    server_.Post("/datasets", [this](httplib::Request const& req,
                                     httplib::Response& res) {
      reply(res, service_.upload_dataset(req.get_param_value("name"),
                                         req.get_param_value("radius"),
                                         req.body));
    });
    server_.Get("/datasets", [this](httplib::Request const&,
                                    httplib::Response& res) {
      reply(res, service_.list_datasets());
    });
    server_.Get("/elicitation/questions",
                [](httplib::Request const&, httplib::Response& res) {
                  reply(res, service::questions());
                });
    server_.Post("/elicitation/answers", [this](httplib::Request const& req,
                                                httplib::Response& res) {
      reply(res, service_.submit_answers(req.body));
    });
    server_.Get(R"(/profiles/([A-Za-z0-9_-]+))",
                [this](httplib::Request const& req, httplib::Response& res) {
                  reply(res, service_.get_profile(req.matches[1].str()));
                });
    server_.Post("/plan", [this](httplib::Request const& req,
                                 httplib::Response& res) {
      reply(res, service_.plan(req.body));
    });
  }

  service& service_;
  httplib::Server server_;
};

http_server::http_server(service& s) : impl_{std::make_unique<impl>(s)} {}

http_server::~http_server() = default;

int http_server::bind(std::string const& host, int const port) {
  if (port == 0) {
    return impl_->server_.bind_to_any_port(host);
  }
  return impl_->server_.bind_to_port(host, port) ? port : -1;
}

bool http_server::listen() { return impl_->server_.listen_after_bind(); }

void http_server::stop() { impl_->server_.stop(); }

}  // namespace tripplan::service
