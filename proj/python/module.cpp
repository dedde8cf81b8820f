#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "torque/cut.hpp"
#include "torque/engine.hpp"
#include "torque/linkage.hpp"
#include "torque/metrics.hpp"
#include "torque/projection.hpp"

namespace py = pybind11;
using namespace torque;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using LabelArray = py::array_t<Label, py::array::c_style | py::array::forcecast>;

Dataset to_dataset(const Array& points) {
  if (points.ndim() != 2) throw InputError("points must be a 2-D array");
  const auto rows = static_cast<std::size_t>(points.shape(0));
  const auto cols = static_cast<std::size_t>(points.shape(1));
  return Dataset(rows, cols, std::vector<double>(points.data(), points.data() + rows * cols));
}

DistanceMatrix to_matrix(const Array& m) {
  if (m.ndim() != 2 || m.shape(0) != m.shape(1)) throw InputError("matrix must be square");
  const auto n = static_cast<std::size_t>(m.shape(0));
  return DistanceMatrix(n, std::vector<double>(m.data(), m.data() + n * n));
}

std::vector<Label> to_labels(const LabelArray& a) {
  if (a.ndim() != 1) throw InputError("labels must be 1-D");
  return {a.data(), a.data() + a.shape(0)};
}

py::array_t<std::int64_t> labels_array(const Partition& p) {
  py::array_t<std::int64_t> out(static_cast<py::ssize_t>(p.labels.size()));
  auto view = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < p.labels.size(); ++i) {
    view(static_cast<py::ssize_t>(i)) = static_cast<std::int64_t>(p.labels[i]);
  }
  return out;
}

RunOptions options_from(const std::string& metric, const std::string& linkage, bool approx) {
  RunOptions o{parse_metric(metric), parse_linkage(linkage)};
  if (approx) o.linkage = Linkage::mean_representative;
  return o;
}

}  // namespace

PYBIND11_MODULE(_torque, m) {
  m.doc() = "Torque clustering core (C++)";

  py::register_exception<UnsupportedModeError>(m, "UnsupportedModeError", PyExc_ValueError);
  py::register_exception<StateError>(m, "StateError", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  py::class_<Connection>(m, "Connection")
      .def_readonly("id", &Connection::id)
      .def_readonly("round", &Connection::round)
      .def_readonly("from_cluster", &Connection::from_cluster)
      .def_readonly("to_cluster", &Connection::to_cluster)
      .def_readonly("from_mass", &Connection::from_mass)
      .def_readonly("to_mass", &Connection::to_mass)
      .def_readonly("distance", &Connection::distance)
      .def_readonly("mass_product", &Connection::mass_product)
      .def_readonly("squared_distance", &Connection::squared_distance)
      .def_readonly("gamma", &Connection::gamma)
      .def_readonly("redundant", &Connection::redundant)
      .def_property_readonly("samples",
                             [](const Connection& c) {
                               return std::make_pair(c.samples.first, c.samples.second);
                             })
      .def("__repr__", [](const Connection& c) {
        return "<Connection id=" + std::to_string(c.id) + " round=" + std::to_string(c.round) +
               " M=" + std::to_string(c.mass_product) +
               " D=" + std::to_string(c.squared_distance) + ">";
      });

  py::class_<TorqueResult>(m, "TorqueResult")
      .def_readonly("n", &TorqueResult::n)
      .def_readonly("connections", &TorqueResult::connections)
      .def_readonly("rounds", &TorqueResult::rounds)
      .def_readonly("final_cluster_count", &TorqueResult::final_cluster_count)
      .def("auto_cut", [](const TorqueResult& r) { return auto_cut(r.connections); })
      .def("topk_cut", &topk_cut, py::arg("k"))
      .def("gamma_ranking",
           [](const TorqueResult& r) {
             std::vector<std::tuple<std::size_t, ConnectionId, double>> out;
             for (const auto& g : gamma_ranking(r.connections)) out.emplace_back(g.rank, g.id, g.gamma);
             return out;
           })
      .def(
          "apply_cut",
          [](const TorqueResult& r, const std::vector<ConnectionId>& removed) {
            return labels_array(apply_cut(r, removed));
          },
          py::arg("removed"));

  m.def(
      "run",
      [](const Array& points, const std::string& metric, const std::string& linkage, bool approx) {
        const auto data = to_dataset(points);
        py::gil_scoped_release release;
        return run(data, options_from(metric, linkage, approx));
      },
      py::arg("points"), py::arg("metric") = "euclidean", py::arg("linkage") = "single",
      py::arg("approx") = false, "Run the merge loop on raw feature vectors.");

  m.def(
      "run_matrix",
      [](const Array& matrix, const std::string& linkage) {
        const auto s = to_matrix(matrix);
        py::gil_scoped_release release;
        return run(s, RunOptions{Metric::precomputed, parse_linkage(linkage)});
      },
      py::arg("matrix"), py::arg("linkage") = "single",
      "Run the merge loop on a precomputed distance matrix.");

  m.def(
      "fit_predict",
      [](const Array& points, const std::string& cut, const std::string& metric, bool approx) {
        const auto data = to_dataset(points);
        const auto result = run(data, options_from(metric, "single", approx));
        return labels_array(apply_cut(result, select_cut(result, parse_cut_spec(cut)).removed));
      },
      py::arg("points"), py::arg("cut") = "auto", py::arg("metric") = "euclidean",
      py::arg("approx") = false, "Cluster and return 0-based labels.");

  m.def(
      "pairwise_distances",
      [](const Array& points, const std::string& metric) {
        const auto s = pairwise_distances(to_dataset(points), parse_metric(metric));
        const auto n = static_cast<py::ssize_t>(s.size());
        Array out({n, n});
        std::copy(s.values().begin(), s.values().end(), out.mutable_data());
        return out;
      },
      py::arg("points"), py::arg("metric") = "euclidean");

  m.def(
      "project_2d",
      [](const Array& points) {
        const auto data = to_dataset(points);
        const auto coords = project_2d(data);
        Array out({static_cast<py::ssize_t>(data.rows()), py::ssize_t{2}});
        std::copy(coords.begin(), coords.end(), out.mutable_data());
        return out;
      },
      py::arg("points"));

  m.def("nmi", [](const LabelArray& a, const LabelArray& b) { return nmi(to_labels(a), to_labels(b)); });
  m.def("acc", [](const LabelArray& a, const LabelArray& b) { return acc(to_labels(a), to_labels(b)); });
  m.def("ami", [](const LabelArray& a, const LabelArray& b) { return ami(to_labels(a), to_labels(b)); });
}
