#include "counselforge/review/review_server.hpp"

#include <httplib.h>

#include "counselforge/common/jsonl.hpp"

namespace counselforge::review {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code,
                std::string_view message, json extra = json::object()) {
  extra["error"] = code;
  extra["message"] = message;
  send_json(res, status, extra);
}

}  // namespace

struct ReviewServer::Impl {
  explicit Impl(ReviewStore& s) : store(s) {}
  ReviewStore& store;
  httplib::Server server;
};

ReviewServer::ReviewServer(ReviewStore& store) : impl_(std::make_unique<Impl>(store)) {
  auto& srv = impl_->server;
  auto& st = impl_->store;

  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });

  srv.Get("/api/queue", [&st](const httplib::Request& req, httplib::Response& res) {
    std::optional<ReviewStatus> filter;
    if (req.has_param("status")) {
      try {
        filter = review_status_from_string(req.get_param_value("status"));
      } catch (const PreconditionError& e) {
        return send_error(res, 400, "bad_status", e.what());
      }
    }
    auto items = st.items(filter);
    std::stable_sort(items.begin(), items.end(), [](const ReviewItem& a, const ReviewItem& b) {
      const double ma = a.score ? a.score->mean() : 0.0;
      const double mb = b.score ? b.score->mean() : 0.0;
      return ma < mb;
    });
    json rows = json::array();
    for (const auto& item : items) rows.push_back(summarize_item(item));
    send_json(res, 200, json{{"items", rows}});
  });

  srv.Get(R"(/api/items/([^/]+))", [&st](const httplib::Request& req, httplib::Response& res) {
    auto item = st.get(req.matches[1].str());
    if (!item) return send_error(res, 404, "not_found", "no review item " + req.matches[1].str());
    send_json(res, 200, *item);
  });

  srv.Post(R"(/api/items/([^/]+)/decision)",
           [&st](const httplib::Request& req, httplib::Response& res) {
             const std::string id = req.matches[1].str();
             ReviewDecision decision;
             try {
               decision = json::parse(req.body).get<ReviewDecision>();
             } catch (const json::exception& e) {
               return send_error(res, 400, "bad_request", e.what());
             } catch (const PreconditionError& e) {
               return send_error(res, 400, "bad_request", e.what());
             }
             if (!decision.item_id.empty() && decision.item_id != id) {
               return send_error(res, 400, "bad_request", "item_id does not match the path");
             }
             decision.item_id = id;
             try {
               send_json(res, 200, st.decide(decision));
             } catch (const ItemNotFound& e) {
               send_error(res, 404, "not_found", e.what());
             } catch (const RevisionConflict& e) {
               send_error(res, 409, "revision_conflict", e.what(),
                          json{{"current_revision", e.current_revision}});
             } catch (const InvalidTransition& e) {
               send_error(res, 409, "invalid_transition", e.what());
             } catch (const InvalidEdit& e) {
               send_error(res, 422, "invalid_edit", e.what());
             }
           });

  srv.Get("/api/export", [&st](const httplib::Request&, httplib::Response& res) {
    res.status = 200;
    res.set_content(to_jsonl(to_json_rows(st.export_approved())), "application/x-ndjson");
  });

  srv.Get("/api/stats", [&st](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, st.stats());
  });

  srv.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          send_error(res, 500, "internal", e.what());
        } catch (...) {
          send_error(res, 500, "internal", "unknown error");
        }
      });
}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::bind(const std::string& host, int port) {
  auto& srv = impl_->server;
  int bound = port == 0 ? srv.bind_to_any_port(host) : (srv.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw IoError("cannot bind review server to " + host + ":" + std::to_string(port));
  return bound;
}

void ReviewServer::serve() { impl_->server.listen_after_bind(); }

void ReviewServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace counselforge::review
