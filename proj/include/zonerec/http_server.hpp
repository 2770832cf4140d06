#pragma once

// Binds RecommendService to HTTP routes:
//   POST /api/recommend   GET /api/zones   GET /api/health

#include <string>

#include <httplib.h>

#include "zonerec/service.hpp"

namespace zonerec {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string cors_origin;  // empty disables CORS headers
};

inline void install_routes(httplib::Server& server, const RecommendService& service,
                           const ServerOptions& options) {
  const std::string origin = options.cors_origin;
  auto reply = [origin](httplib::Response& res, const HandlerResult& r) {
    res.status = r.status;
    if (!origin.empty()) res.set_header("Access-Control-Allow-Origin", origin);
    res.set_content(r.body.dump(), "application/json");
  };
  server.Post("/api/recommend", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.handle_recommend(req.body));
  });
  server.Get("/api/zones", [&service, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, service.handle_zones());
  });
  server.Get("/api/health", [&service, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, service.handle_health());
  });
  server.Options(R"(/api/.*)", [origin](const httplib::Request&, httplib::Response& res) {
    if (!origin.empty()) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    }
    res.status = 204;
  });
}

}  // namespace zonerec
