#pragma once

// HTTP routes over a SessionManager. Requests and responses are JSON bodies.

#include <majority/session.hpp>

#include <httplib.h>
#include <json.hpp>

#include <string>

namespace majority::service {

namespace detail {

inline void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw SessionError(400, "bad_request", std::string("malformed JSON: ") + e.what());
  }
}

template <class F>
httplib::Server::Handler handle(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      reply(res, 200, f(req));
    } catch (const SessionError& e) {
      reply(res, e.status(), e.body());
    } catch (const std::exception& e) {
      reply(res, 500, {{"error", "internal"}, {"message", e.what()}});
    }
  };
}

}  // namespace detail

inline void mount(httplib::Server& server, SessionManager& sessions) {
  using detail::handle;
  using detail::parse_body;
  auto id = [](const httplib::Request& req) { return req.path_params.at("id"); };

  server.Post("/sessions", handle([&](const httplib::Request& req) { return sessions.create(parse_body(req)); }));
  server.Post("/sessions/:id/query",
              handle([&, id](const httplib::Request& req) { return sessions.query(id(req), parse_body(req)); }));
  server.Post("/sessions/:id/answer",
              handle([&, id](const httplib::Request& req) { return sessions.answer(id(req), parse_body(req)); }));
  server.Post("/sessions/:id/output",
              handle([&, id](const httplib::Request& req) { return sessions.output(id(req), parse_body(req)); }));
  server.Post("/sessions/:id/step", handle([&, id](const httplib::Request& req) { return sessions.step(id(req)); }));
  server.Get("/sessions/:id", handle([&, id](const httplib::Request& req) { return sessions.state(id(req)); }));
  server.Get("/sessions/:id/transcript",
             handle([&, id](const httplib::Request& req) { return sessions.transcript(id(req)); }));
}

}  // namespace majority::service
