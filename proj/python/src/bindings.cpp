// Thin JSON-in/JSON-out bridge; the Python package wraps it with dicts.
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "exptract/runner.hpp"

namespace py = pybind11;
using namespace exptract;

namespace {

EigenSeq eigen(const std::string& desc) { return EigenSeq::from_json(nlohmann::json::parse(desc)); }
WeightSeq weight(const std::string& desc) { return WeightSeq::from_json(nlohmann::json::parse(desc)); }

py::int_ big(const BigCount& c) { return py::int_(py::str(c.str())); }

}  // namespace

PYBIND11_MODULE(_exptract, m) {
  m.doc() = "Exponential tractability toolkit (native core)";

  py::register_exception<Error>(m, "ExptractError", PyExc_ValueError);

  m.def("j_of_eps", [](const std::string& lam, double E) { return j_of_eps(eigen(lam), E); });
  m.def("d_of_eps", [](const std::string& gam, double E) { return d_of_eps(weight(gam), E); });
  m.def(
      "count",
      [](const std::string& lam, const std::string& gam, double E, std::uint64_t d, std::uint64_t node_budget) {
        const CountResult r = info_complexity(eigen(lam), weight(gam), Query(E, d), node_budget);
        return py::make_tuple(big(r.count), r.nodes_visited, r.truncated_dimension);
      },
      py::arg("lam"), py::arg("gam"), py::arg("E"), py::arg("d"), py::arg("node_budget") = kDefaultNodeBudget);
  m.def("brute_force_count", [](const std::string& lam, const std::string& gam, double E, std::uint64_t d,
                                std::uint64_t box) { return big(brute_force_count(eigen(lam), weight(gam), Query(E, d), box)); });
  m.def("top_costs", [](const std::string& lam, const std::string& gam, std::uint64_t d, std::uint64_t K) {
    std::vector<double> out;
    for (const auto& v : top_eigenvalues(eigen(lam), weight(gam), d, K)) out.push_back(v.value());
    return out;
  });
  m.def("classify", [](const std::string& lam, const std::string& gam, const std::string& kind, double s, double t) {
    return classify(eigen(lam), weight(gam), Notion::parse(kind, s, t)).to_json().dump();
  });
  m.def("run", [](const std::string& command, const std::string& config, const std::string& base_dir) {
    const RunConfig cfg = parse_config(nlohmann::json::parse(config), base_dir);
    RunOutcome r;
    if (command == "count") r = run_count(cfg);
    else if (command == "sweep") r = run_sweep(cfg);
    else if (command == "classify") r = run_classify(cfg);
    else if (command == "topk") r = run_topk(cfg);
    else if (command == "audit") r = run_audit(cfg);
    else throw Error(ErrorCode::ConfigError, "unknown command '" + command + "'");
    std::ostringstream out;
    write_outcome(out, r, cfg.format);
    return py::make_tuple(r.exit_code, out.str());
  });
}
