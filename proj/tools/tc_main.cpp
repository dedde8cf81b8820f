// tc: command-line front end for torque clustering.
//
//   tc fit   --input points.csv [--cut auto|topk:K|manual:FILE] [--labels-out F] ...
//   tc eval  --pred a.txt --truth b.txt --metric nmi|acc|ami
//   tc serve --port 8080 [--dataset points.csv]

#include <CLI11.hpp>
#include <httplib.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "torque/cut.hpp"
#include "torque/engine.hpp"
#include "torque/io.hpp"
#include "torque/metrics.hpp"
#include "torque/service.hpp"

namespace {

using namespace torque;

struct FitConfig {
  std::string input;
  std::string input_kind = "points";
  std::string metric = "euclidean";
  std::string linkage = "single";
  bool approx = false;
  std::string cut = "auto";
  std::string labels_out;
  std::string decision_graph_out;
  std::string hierarchy_out;
  std::string gamma_out;
  std::optional<int> label_col;
  bool metric_given = false;
};

CutSpec resolve_cut(const std::string& text) {
  if (text.starts_with("manual:")) {
    // manual:FILE lists connection ids, one per line or comma-separated.
    std::string ids = read_text_file(text.substr(7));
    for (auto& ch : ids) {
      if (ch == '\n' || ch == '\r' || ch == ' ' || ch == '\t') ch = ',';
    }
    std::string compact;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] == ',' && (compact.empty() || compact.back() == ',')) continue;
      compact += ids[i];
    }
    if (!compact.empty() && compact.back() == ',') compact.pop_back();
    return parse_cut_spec("manual:" + compact);
  }
  return parse_cut_spec(text);
}

template <typename Writer>
void write_artifact(const std::string& path, Writer&& writer) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  writer(out);
  out.close();
  if (!out) throw InputError("failed writing '" + path + "'");
}

TorqueResult run_fit_input(const FitConfig& cfg) {
  if (cfg.input_kind == "matrix") {
    if (cfg.metric_given && cfg.metric != "precomputed") {
      throw InputError("matrix input requires --metric precomputed");
    }
    if (cfg.approx) throw UnsupportedModeError("--approx needs raw feature vectors");
    const auto matrix = load_distance_csv(cfg.input);
    return run(matrix, RunOptions{Metric::precomputed, parse_linkage(cfg.linkage)});
  }
  if (cfg.input_kind != "points") throw InputError("--input-kind must be points or matrix");
  const auto table = load_points_csv(cfg.input, cfg.label_col);
  RunOptions options{parse_metric(cfg.metric), parse_linkage(cfg.linkage)};
  if (cfg.approx) options.linkage = Linkage::mean_representative;
  return run(table.data, options);
}

int fit(const FitConfig& cfg) {
  const auto result = run_fit_input(cfg);
  const auto selection = select_cut(result, resolve_cut(cfg.cut));
  for (const auto& w : selection.warnings) std::cerr << "warning: " << w << '\n';
  const auto partition = apply_cut(result, selection.removed);

  write_artifact(cfg.labels_out, [&](std::ostream& o) { write_labels(o, partition); });
  write_artifact(cfg.decision_graph_out,
                 [&](std::ostream& o) { write_decision_graph(o, result.connections); });
  write_artifact(cfg.hierarchy_out, [&](std::ostream& o) { write_hierarchy(o, result.rounds); });
  write_artifact(cfg.gamma_out, [&](std::ostream& o) {
    write_gamma_ranking(o, gamma_ranking(result.connections));
  });

  std::cout << "K=" << partition.k << " rounds=" << result.rounds.size() - 1 << '\n';
  return 0;
}

int eval(const std::string& pred_path, const std::string& truth_path, const std::string& metric) {
  const auto pred = load_labels(pred_path);
  const auto truth = load_labels(truth_path);
  double score = 0.0;
  if (metric == "nmi") {
    score = nmi(pred, truth);
  } else if (metric == "acc") {
    score = acc(pred, truth);
  } else if (metric == "ami") {
    score = ami(pred, truth);
  } else {
    throw InputError("unknown metric '" + metric + "' (nmi, acc, ami)");
  }
  std::printf("%.4f\n", score);
  return 0;
}

int serve(const std::string& host, int port, const FitConfig& preload) {
  service::AnalysisService svc;
  if (!preload.input.empty()) {
    std::string id;
    if (preload.input_kind == "matrix") {
      id = svc.open(std::make_shared<const DistanceMatrix>(load_distance_csv(preload.input)),
                    RunOptions{Metric::precomputed, parse_linkage(preload.linkage)});
    } else {
      auto table = load_points_csv(preload.input, preload.label_col);
      RunOptions options{parse_metric(preload.metric), parse_linkage(preload.linkage)};
      if (preload.approx) options.linkage = Linkage::mean_representative;
      id = svc.open(std::make_shared<const Dataset>(std::move(table.data)), options);
    }
    std::cout << "session " << id << '\n';
  }
  httplib::Server server;
  service::mount(server, svc);
  std::cout << "listening on http://" << host << ':' << port << "/v1/" << std::endl;
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ':' << port << '\n';
    return 1;
  }
  return 0;
}

void add_input_options(CLI::App* cmd, FitConfig& cfg) {
  cmd->add_option("--input-kind", cfg.input_kind, "points or matrix")
      ->check(CLI::IsMember({"points", "matrix"}));
  cmd->add_option("--metric", cfg.metric, "euclidean, cosine or precomputed")
      ->check(CLI::IsMember({"euclidean", "cosine", "precomputed"}))
      ->each([&cfg](const std::string&) { cfg.metric_given = true; });
  cmd->add_option("--linkage", cfg.linkage, "single, complete, average or centroid")
      ->check(CLI::IsMember({"single", "complete", "average", "centroid"}));
  cmd->add_flag("--approx", cfg.approx, "mean-representative nearest clusters via k-d tree");
  cmd->add_option("--label-col", cfg.label_col,
                  "column holding ground-truth labels (negative counts from the end)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Torque clustering: parameter-free hierarchical clustering"};
  app.require_subcommand(1);

  FitConfig fit_cfg;
  auto* fit_cmd = app.add_subcommand("fit", "cluster a dataset and write artifacts");
  fit_cmd->add_option("--input", fit_cfg.input, "CSV input")->required();
  add_input_options(fit_cmd, fit_cfg);
  fit_cmd->add_option("--cut", fit_cfg.cut, "auto, topk:K or manual:FILE");
  fit_cmd->add_option("--labels-out", fit_cfg.labels_out);
  fit_cmd->add_option("--decision-graph-out", fit_cfg.decision_graph_out);
  fit_cmd->add_option("--hierarchy-out", fit_cfg.hierarchy_out);
  fit_cmd->add_option("--gamma-out", fit_cfg.gamma_out);

  std::string pred, truth, score_metric = "nmi";
  auto* eval_cmd = app.add_subcommand("eval", "score predicted labels against ground truth");
  eval_cmd->add_option("--pred", pred)->required();
  eval_cmd->add_option("--truth", truth)->required();
  eval_cmd->add_option("--metric", score_metric)->check(CLI::IsMember({"nmi", "acc", "ami"}));

  FitConfig serve_cfg;
  int port = 8080;
  std::string host = "127.0.0.1";
  auto* serve_cmd = app.add_subcommand("serve", "run the local decision-graph API");
  serve_cmd->add_option("--port", port);
  serve_cmd->add_option("--host", host, "bind address (loopback by default)");
  serve_cmd->add_option("--dataset", serve_cfg.input, "preload a session from this CSV");
  add_input_options(serve_cmd, serve_cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit_cmd) return fit(fit_cfg);
    if (*eval_cmd) return eval(pred, truth, score_metric);
    if (*serve_cmd) return serve(host, port, serve_cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
