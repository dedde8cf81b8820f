#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "torque/core.hpp"
#include "torque/engine.hpp"

namespace httplib {
class Server;
}

namespace torque::service {

struct Response {
  int status = 200;
  std::string body;  // JSON
};

struct Options {
  // Partitions larger than this are written to `spill_directory` and the
  // response carries the file path instead of inline labels.
  std::size_t inline_label_limit = 100000;
  std::filesystem::path spill_directory = std::filesystem::temp_directory_path();
};

/// Session-based analysis API over immutable clustering runs. Every method is
/// safe to call concurrently; cut mutations within one session are serialized.
class AnalysisService {
 public:
  explicit AnalysisService(Options options = {});
  ~AnalysisService();

  /// Body is either JSON {"csv": ..., "input_kind", "metric", "linkage",
  /// "approx", "label_col"} or raw CSV with the options in `query`.
  Response create_session(std::string_view body, std::string_view content_type,
                          const std::map<std::string, std::string>& query = {});
  Response get_graph(const std::string& session_id) const;
  Response post_cut(const std::string& session_id, std::string_view body);
  Response get_partition(const std::string& session_id) const;
  Response get_projection(const std::string& session_id) const;

  /// Creates a session directly from a loaded dataset; returns its id.
  std::string open(std::shared_ptr<const Dataset> data, RunOptions options);
  std::string open(std::shared_ptr<const DistanceMatrix> matrix, RunOptions options);

  std::size_t session_count() const;

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;
  std::string insert(std::shared_ptr<Session> session);
  Response partition_response(Session& session, const std::vector<std::string>& warnings) const;

  Options options_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Mounts the /v1 routes on an httplib server.
void mount(httplib::Server& server, AnalysisService& service);

}  // namespace torque::service
