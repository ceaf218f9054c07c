#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lain/auction.hpp"
#include "lain/config.hpp"
#include "lain/errors.hpp"
#include "lain/estimator.hpp"
#include "lain/harness.hpp"
#include "lain/offloading.hpp"
#include "lain/rng.hpp"
#include "lain/world.hpp"

namespace py = pybind11;
using namespace lain;

namespace {

py::dict row_dict(const ResultRow& r) {
  py::dict d;
  d["seed"] = r.seed;
  d["policy"] = r.policy;
  d["axis"] = r.axis;
  d["value"] = r.value;
  d["eta_bits_per_J"] = r.eta_bits_per_j;
  d["completion_ratio"] = r.completion_ratio;
  d["avg_latency_s"] = r.avg_latency_s;
  d["system_energy_J"] = r.system_energy_j;
  d["objective"] = r.objective;
  d["error"] = r.error;
  return d;
}

UavParams uav_params(std::optional<double> hover) {
  UavParams p;
  p.hover_power_w = hover;
  return p;
}

TaskSpec make_task(double bits, double density, int deadline) {
  TaskSpec t;
  t.size_bits = bits;
  t.density = density;
  t.deadline_slot = deadline;
  return t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "UAV edge-computing simulator core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConstraintError>(m, "ConstraintError", PyExc_RuntimeError);

  m.def("derive_stream_seed", &derive_stream_seed, py::arg("master"), py::arg("label"));

  m.def("hover_power", [](std::optional<double> pinned) { return hover_power(uav_params(pinned)); },
        py::arg("hover_power_w") = py::none());
  m.def("move_power", [](double v) { return move_power(v, UavParams{}); }, py::arg("speed"));
  m.def("flight_energy",
        [](double delta, double v, double tau, std::optional<double> pinned) {
          return flight_energy(delta, v, uav_params(pinned), tau);
        },
        py::arg("delta"), py::arg("speed"), py::arg("tau") = 1.0, py::arg("hover_power_w") = py::none());

  m.def("local_energy",
        [](double bits, double density, double cpu_hz, double kappa) {
          UavParams p;
          p.cpu_hz = cpu_hz;
          p.kappa = kappa;
          return local_energy(make_task(bits, density, 0), p);
        },
        py::arg("bits"), py::arg("density") = 300.0, py::arg("cpu_hz") = 2e9, py::arg("kappa") = 1e-28);
  m.def("offload_energy",
        [](double bits, double rate, double tx_power, double dest_kappa, double dest_cpu, double density) {
          UavParams p;
          p.tx_power = tx_power;
          return offload_energy(make_task(bits, density, 0), rate, p, dest_kappa, dest_cpu);
        },
        py::arg("bits"), py::arg("rate"), py::arg("tx_power") = 0.1, py::arg("dest_kappa") = 1e-28,
        py::arg("dest_cpu") = 3e9, py::arg("density") = 300.0);
  m.def("offload_completion",
        [](double bits, double rate, double dest_cpu, double t_start, double density) {
          return offload_completion(make_task(bits, density, 0), rate, NodeQueue{}, dest_cpu, t_start);
        },
        py::arg("bits"), py::arg("rate"), py::arg("dest_cpu") = 3e9, py::arg("t_start") = 0.0,
        py::arg("density") = 300.0);

  m.def("run_auction",
        [](const std::vector<std::vector<double>>& utilities, double bid_scale) {
          if (utilities.empty() || utilities[0].empty()) throw ShapeError("empty utility grid");
          std::vector<double> flat;
          for (const auto& r : utilities) {
            if (r.size() != utilities[0].size()) throw ShapeError("ragged utility grid");
            flat.insert(flat.end(), r.begin(), r.end());
          }
          AuctionWeights w;
          w.bid_scale = bid_scale;
          const AuctionResult r = run_auction(bids_from_utilities(
              static_cast<int>(utilities.size()), static_cast<int>(utilities[0].size()), flat, w));
          py::dict d;
          d["assignment"] = r.assignment;
          d["prices"] = r.prices;
          d["total_utility"] = r.total_utility;
          return d;
        },
        py::arg("utilities"), py::arg("bid_scale") = 1.0);

  m.def("validate_config", [](const std::string& text) { parse_config(text); }, py::arg("config_json"));

  m.def("run_episode",
        [](const std::string& text, const std::string& policy, std::uint64_t seed) {
          const RunConfig c = parse_config(text);
          py::gil_scoped_release release;
          ResultRow r = run_episode(c, policy, seed);
          py::gil_scoped_acquire acquire;
          return row_dict(r);
        },
        py::arg("config_json") = "{}", py::arg("policy") = "gmsp", py::arg("seed") = 1);

  m.def("run_sweep",
        [](const std::string& text) {
          const RunConfig c = parse_config(text);
          std::vector<ResultRow> rows;
          {
            py::gil_scoped_release release;
            rows = run_sweep(c);
          }
          py::list out;
          for (const ResultRow& r : rows) out.append(row_dict(r));
          return out;
        },
        py::arg("config_json"));

  m.def("sweep_csv",
        [](const std::string& text) {
          const RunConfig c = parse_config(text);
          std::ostringstream os;
          {
            py::gil_scoped_release release;
            write_csv(os, run_sweep(c));
          }
          return os.str();
        },
        py::arg("config_json"));

  m.attr("CSV_HEADER") = std::string(kCsvHeader);
}
