#include "torque/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <random>

#include "torque/cut.hpp"
#include "torque/io.hpp"
#include "torque/projection.hpp"

namespace torque::service {

using nlohmann::json;

struct AnalysisService::Session {
  std::string id;
  std::shared_ptr<const Dataset> data;  // null for matrix sessions
  std::shared_ptr<const TorqueResult> result;
  std::size_t dims = 0;

  std::mutex mutex;  // guards everything below
  std::set<ConnectionId> removed;
  std::uint64_t version = 0;
};

namespace {

Response error(int status, std::string_view code, const std::string& message) {
  return {status, json{{"code", code}, {"message", message}}.dump()};
}

Response not_found(const std::string& id) {
  return error(404, "not_found", "unknown session '" + id + "'");
}

json connection_json(const Connection& c) {
  return json{{"id", c.id},
              {"round", c.round},
              {"from_cluster", c.from_cluster},
              {"to_cluster", c.to_cluster},
              {"from_mass", c.from_mass},
              {"to_mass", c.to_mass},
              {"distance", c.distance},
              {"mass_product", c.mass_product},
              {"squared_distance", c.squared_distance},
              {"gamma", c.gamma},
              {"redundant", c.redundant},
              {"sample_a", c.samples.first},
              {"sample_b", c.samples.second}};
}

std::string new_token() {
  static std::mutex mutex;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mutex);
  static constexpr char hex[] = "0123456789abcdef";
  std::string token(16, '0');
  auto bits = rng();
  for (auto& ch : token) {
    ch = hex[bits & 0xf];
    bits >>= 4;
  }
  return token;
}

// Maps library exceptions onto HTTP status codes.
template <typename Fn>
Response guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const UnsupportedModeError& e) {
    return error(409, "unsupported", e.what());
  } catch (const StateError& e) {
    return error(409, "invalid_state", e.what());
  } catch (const InputError& e) {
    return error(400, "invalid_input", e.what());
  } catch (const json::exception& e) {
    return error(400, "invalid_json", e.what());
  } catch (const std::logic_error& e) {
    return error(400, "invalid_input", e.what());
  }
}

RunOptions run_options(const std::string& metric, const std::string& linkage, bool approx) {
  RunOptions o;
  o.metric = parse_metric(metric);
  o.linkage = approx ? Linkage::mean_representative : parse_linkage(linkage);
  return o;
}

}  // namespace

AnalysisService::AnalysisService(Options options) : options_(std::move(options)) {}
AnalysisService::~AnalysisService() = default;

std::size_t AnalysisService::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

std::shared_ptr<AnalysisService::Session> AnalysisService::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::string AnalysisService::insert(std::shared_ptr<Session> session) {
  std::unique_lock lock(sessions_mutex_);
  do {
    session->id = new_token();
  } while (sessions_.contains(session->id));
  auto id = session->id;
  sessions_.emplace(id, std::move(session));
  return id;
}

std::string AnalysisService::open(std::shared_ptr<const Dataset> data, RunOptions options) {
  auto session = std::make_shared<Session>();
  session->result = std::make_shared<const TorqueResult>(run(*data, options));
  session->dims = data->cols();
  session->data = std::move(data);
  const auto removed = auto_cut(session->result->connections);
  session->removed.insert(removed.begin(), removed.end());
  return insert(std::move(session));
}

std::string AnalysisService::open(std::shared_ptr<const DistanceMatrix> matrix,
                                  RunOptions options) {
  auto session = std::make_shared<Session>();
  session->result = std::make_shared<const TorqueResult>(run(*matrix, options));
  const auto removed = auto_cut(session->result->connections);
  session->removed.insert(removed.begin(), removed.end());
  return insert(std::move(session));
}

Response AnalysisService::create_session(std::string_view body, std::string_view content_type,
                                         const std::map<std::string, std::string>& query) {
  return guarded([&]() -> Response {
    std::string csv;
    std::string kind = "points";
    std::string metric = "euclidean";
    std::string linkage = "single";
    bool approx = false;
    std::optional<int> label_col;

    auto from_query = [&](const char* key, std::string& target) {
      if (auto it = query.find(key); it != query.end()) target = it->second;
    };
    if (content_type.starts_with("application/json")) {
      const json req = json::parse(body);
      if (!req.contains("csv") || !req["csv"].is_string()) {
        throw InputError("request body needs a string field 'csv'");
      }
      csv = req["csv"].get<std::string>();
      kind = req.value("input_kind", kind);
      metric = req.value("metric", metric);
      linkage = req.value("linkage", linkage);
      approx = req.value("approx", approx);
      if (req.contains("label_col") && !req["label_col"].is_null()) {
        label_col = req["label_col"].get<int>();
      }
    } else {
      csv = std::string(body);
      from_query("input_kind", kind);
      from_query("metric", metric);
      from_query("linkage", linkage);
      if (auto it = query.find("approx"); it != query.end()) approx = it->second == "true";
      if (auto it = query.find("label_col"); it != query.end()) label_col = std::stoi(it->second);
    }

    std::string id;
    if (kind == "points") {
      auto table = parse_points_csv(csv, label_col);
      id = open(std::make_shared<const Dataset>(std::move(table.data)),
                run_options(metric, linkage, approx));
    } else if (kind == "matrix") {
      if (metric != "precomputed" && metric != "euclidean") {
        throw InputError("matrix input implies the precomputed metric");
      }
      id = open(std::make_shared<const DistanceMatrix>(parse_distance_csv(csv)),
                run_options("precomputed", linkage, approx));
    } else {
      throw InputError("input_kind must be 'points' or 'matrix'");
    }

    auto session = find(id);
    std::lock_guard lock(session->mutex);
    auto response = partition_response(*session, {});
    auto payload = json::parse(response.body);
    payload["session_id"] = id;
    payload["n"] = session->result->n;
    payload["d"] = session->dims;
    payload["projection_available"] = session->data != nullptr;
    payload["rounds"] = session->result->rounds;
    return {201, payload.dump()};
  });
}

Response AnalysisService::get_graph(const std::string& session_id) const {
  auto session = find(session_id);
  if (!session) return not_found(session_id);
  json connections = json::array();
  for (const auto& c : session->result->connections) connections.push_back(connection_json(c));
  std::lock_guard lock(session->mutex);
  json payload{{"session_id", session_id},
               {"version", session->version},
               {"n", session->result->n},
               {"rounds", session->result->rounds},
               {"removed", session->removed},
               {"connections", std::move(connections)}};
  return {200, payload.dump()};
}

Response AnalysisService::partition_response(Session& session,
                                             const std::vector<std::string>& warnings) const {
  const std::vector<ConnectionId> removed(session.removed.begin(), session.removed.end());
  const Partition p = apply_cut(*session.result, removed);
  json payload{{"session_id", session.id},
               {"version", session.version},
               {"k", p.k},
               {"cluster_sizes", p.cluster_sizes()},
               {"removed", removed},
               {"warnings", warnings}};
  if (p.labels.size() <= options_.inline_label_limit) {
    payload["labels"] = p.labels;
  } else {
    const auto path = options_.spill_directory /
                      ("torque-" + session.id + "-v" + std::to_string(session.version) + ".labels");
    std::ofstream out(path);
    write_labels(out, p);
    out.close();
    if (!out) throw InputError("cannot write labels to " + path.string());
    payload["labels_path"] = path.string();
  }
  return {200, payload.dump()};
}

Response AnalysisService::post_cut(const std::string& session_id, std::string_view body) {
  auto session = find(session_id);
  if (!session) return not_found(session_id);
  return guarded([&]() -> Response {
    const json req = json::parse(body);
    const std::string mode = req.at("mode").get<std::string>();
    const auto& result = *session->result;

    std::lock_guard lock(session->mutex);
    std::set<ConnectionId> next = session->removed;
    std::vector<std::string> warnings;
    if (mode == "auto") {
      const auto ids = auto_cut(result.connections);
      next = {ids.begin(), ids.end()};
    } else if (mode == "topk") {
      const auto ids = topk_cut(result, req.at("k").get<std::size_t>());
      next = {ids.begin(), ids.end()};
    } else if (mode == "toggle") {
      const auto id = req.at("id").get<ConnectionId>();
      const ConnectionId one[] = {id};
      warnings = manual_cut(result.connections, one).warnings;
      if (!next.erase(id)) next.insert(id);
    } else if (mode == "set") {
      const auto ids = req.at("ids").get<std::vector<ConnectionId>>();
      auto selection = manual_cut(result.connections, ids);
      warnings = std::move(selection.warnings);
      next = {selection.removed.begin(), selection.removed.end()};
    } else {
      throw InputError("unknown cut mode '" + mode + "' (auto, topk, toggle, set)");
    }
    session->removed = std::move(next);
    ++session->version;
    return partition_response(*session, warnings);
  });
}

Response AnalysisService::get_partition(const std::string& session_id) const {
  auto session = find(session_id);
  if (!session) return not_found(session_id);
  return guarded([&]() -> Response {
    std::lock_guard lock(session->mutex);
    return partition_response(*session, {});
  });
}

Response AnalysisService::get_projection(const std::string& session_id) const {
  auto session = find(session_id);
  if (!session) return not_found(session_id);
  if (!session->data) {
    return error(409, "unsupported", "session was created from a distance matrix; no features");
  }
  const auto coords = project_2d(*session->data);
  json rows = json::array();
  for (std::size_t i = 0; i < coords.size(); i += 2) rows.push_back({coords[i], coords[i + 1]});
  return {200, json{{"session_id", session_id},
                    {"n", session->result->n},
                    {"coordinates", std::move(rows)}}
                   .dump()};
}

void mount(httplib::Server& server, AnalysisService& service) {
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Post("/v1/sessions", [&service, reply](const httplib::Request& req,
                                                httplib::Response& res) {
    std::map<std::string, std::string> query(req.params.begin(), req.params.end());
    reply(res, service.create_session(req.body, req.get_header_value("Content-Type"), query));
  });
  server.Get(R"(/v1/sessions/([0-9a-f]+)/graph)",
             [&service, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, service.get_graph(req.matches[1]));
             });
  server.Post(R"(/v1/sessions/([0-9a-f]+)/cut)",
              [&service, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, service.post_cut(req.matches[1], req.body));
              });
  server.Get(R"(/v1/sessions/([0-9a-f]+)/partition)",
             [&service, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, service.get_partition(req.matches[1]));
             });
  server.Get(R"(/v1/sessions/([0-9a-f]+)/projection)",
             [&service, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, service.get_projection(req.matches[1]));
             });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      res.set_content(json{{"code", "not_found"}, {"message", "no such route"}}.dump(),
                      "application/json");
    }
  });
}

}  // namespace torque::service
