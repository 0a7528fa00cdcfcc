#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "realstab/cli.hpp"
#include "realstab/errors.hpp"
#include "realstab/serialization.hpp"

namespace py = pybind11;
using namespace realstab;

namespace {

// Matrices cross the boundary as JSON text in the system-file encoding.
TransferMatrix matrix_arg(const std::string& text) { return transfer_matrix_from_json(parse_json(text)); }

std::string analyze_json(const std::string& system_text) {
  SystemFile f = system_from_json(parse_json(system_text));
  verify_blocks(f);
  RealizationSystem r = f.realization();
  TransferMatrix s = stability_matrix(r);
  Json out{{"verdict", to_json(stability_verdict(s))},
           {"stability_matrix", to_json(s)},
           {"rs_identity", verify_rs_identity(r, s)}};
  return out.dump();
}

py::tuple run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = run_cli(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_realstab, m) {
  m.doc() = "Exact realization-based stability analysis";
  m.attr("__version__") = REALSTAB_VERSION;

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.def("run", &run, py::arg("args"), "Run one realstab command; returns (exit_code, stdout, stderr).");
  m.def("analyze_json", &analyze_json, py::arg("system"));
  m.def("hinf_norm_json", [](const std::string& x) { return hinf_norm(matrix_arg(x)); }, py::arg("matrix"));
  m.def("stability_status_json", [](const std::string& x) { return to_string(stability_verdict(matrix_arg(x)).status); },
        py::arg("matrix"));
  m.def("inverse_json", [](const std::string& x) { return to_json(mat_inverse(matrix_arg(x))).dump(); },
        py::arg("matrix"));
}
