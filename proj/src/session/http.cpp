#include <regex>

#include "httplib.h"

#include "cmc/session/session.hpp"

namespace cmc::session {

using nlohmann::json;

namespace {

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ApiError(400, "MalformedRequest", std::string("body is not valid JSON: ") + e.what());
  }
}

HttpResponse ok(int status, const json& j) { return {status, j.dump() + "\n"}; }

}  // namespace

HttpResponse dispatch(SessionManager& manager, const std::string& method,
                      const std::string& path, const std::string& body) {
  static const std::regex session_re(R"(^/sessions/([A-Za-z0-9_-]+)(/[a-z-]+)?/?$)");
  try {
    if (path == "/sessions" || path == "/sessions/") {
      if (method != "POST") throw ApiError(405, "MethodNotAllowed", "use POST /sessions");
      return ok(201, manager.create(parse_body(body)));
    }
    std::smatch m;
    if (std::regex_match(path, m, session_re)) {
      const std::string id = m[1];
      const std::string sub = m[2];
      if (sub.empty()) {
        if (method != "GET") throw ApiError(405, "MethodNotAllowed", "use GET");
        return ok(200, manager.get(id));
      }
      if (sub == "/resolutions") {
        if (method != "POST") throw ApiError(405, "MethodNotAllowed", "use POST");
        return ok(200, manager.post_resolution(id, parse_body(body)));
      }
      if (sub == "/statistical-choices") {
        if (method != "POST") throw ApiError(405, "MethodNotAllowed", "use POST");
        return ok(200, manager.post_statistical_choices(id, parse_body(body)));
      }
      if (sub == "/artifacts") {
        if (method != "GET") throw ApiError(405, "MethodNotAllowed", "use GET");
        return ok(200, manager.get_artifacts(id));
      }
    }
    throw ApiError(404, "NotFound", "no endpoint " + method + " " + path);
  } catch (const ApiError& e) {
    return {e.status(), e.body().dump() + "\n"};
  } catch (const std::exception& e) {
    return {500, ApiError(500, "InternalError", e.what()).body().dump() + "\n"};
  }
}

void install_routes(httplib::Server& server, SessionManager& manager) {
  auto handler = [&manager](const httplib::Request& req, httplib::Response& res) {
    HttpResponse r = dispatch(manager, req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Post(R"(/sessions/?)", handler);
  server.Get(R"(/sessions/[A-Za-z0-9_-]+/?)", handler);
  server.Post(R"(/sessions/[A-Za-z0-9_-]+/(resolutions|statistical-choices))", handler);
  server.Get(R"(/sessions/[A-Za-z0-9_-]+/artifacts)", handler);
  server.set_payload_max_length(std::size_t{8} << 20);
}

}  // namespace cmc::session
