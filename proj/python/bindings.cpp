#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "mburqr/distribution.hpp"
#include "mburqr/errors.hpp"
#include "mburqr/report.hpp"

namespace py = pybind11;
using namespace mburqr;

namespace {

const DataTable& table_for(const std::optional<std::string>& path, std::optional<DataTable>& holder) {
    if (!path) return oecd_fixture();
    holder = load_csv_file(*path);
    return *holder;
}

TransformSpec transforms_for(bool transform) { return transform ? TransformSpec{} : TransformSpec::none(); }

Provenance provenance_for(const std::optional<std::string>& path) {
    return Provenance{path ? *path : "embedded:oecd_bli.csv", Json::object(), false};
}

}  // namespace

PYBIND11_MODULE(_mburqr, m) {
    m.doc() = "MBUR quantile regression core";
    m.attr("__version__") = MBURQR_VERSION;

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.def("c_factor", &c_factor, py::arg("u"));
    m.def("pdf", [](double y, double alpha) { return pdf(y, MburParams(alpha)); }, py::arg("y"), py::arg("alpha"));
    m.def("cdf", [](double y, double alpha) { return cdf(y, MburParams(alpha)); }, py::arg("y"), py::arg("alpha"));
    m.def("quantile", [](double u, double alpha) { return quantile(u, MburParams(alpha)); }, py::arg("u"),
          py::arg("alpha"));
    m.def("sample", [](std::size_t n, double alpha, std::uint64_t seed) { return sample(n, MburParams(alpha), seed); },
          py::arg("n"), py::arg("alpha"), py::arg("seed"));
    m.def("fit_alpha",
          [](const std::vector<double>& y) {
              const AlphaFit f = fit_alpha(y);
              return py::make_tuple(f.params.alpha, f.log_likelihood);
          },
          py::arg("y"));
    m.def("inv_link", [](const std::string& kind, double phi) { return inv_link(parse_link(kind), phi); },
          py::arg("kind"), py::arg("phi"));
    m.def("link", [](const std::string& kind, double mu) { return link(parse_link(kind), mu); }, py::arg("kind"),
          py::arg("mu"));
    m.def("kendall_tau",
          [](const std::vector<double>& x, const std::vector<double>& y) {
              const KendallResult r = kendall_tau(x, y);
              return py::make_tuple(r.tau, r.p_value);
          },
          py::arg("x"), py::arg("y"));
    m.def("fixture_csv", [] { return std::string(oecd_fixture_csv()); });

    m.def("fit_json",
          [](const std::string& response, const std::vector<std::string>& predictors, const std::string& link_name,
             double tau, const std::optional<std::string>& data, bool transform) {
              std::optional<DataTable> holder;
              const DataTable& t = table_for(data, holder);
              ModelSpec spec{response, predictors, parse_link(link_name), QuantileLevel::make(tau)};
              FitAnalysis a;
              {
                  py::gil_scoped_release release;
                  a = analyze_fit(t, spec, transforms_for(transform));
              }
              return fit_json(a, provenance_for(data)).dump();
          },
          py::arg("response"), py::arg("predictors"), py::arg("link") = "logit", py::arg("tau") = 0.5,
          py::arg("data") = py::none(), py::arg("transform") = true);

    m.def("ladder_json",
          [](const std::string& response, const std::vector<std::string>& predictors, const std::string& link_name,
             const std::optional<std::string>& data, bool transform) {
              std::optional<DataTable> holder;
              const DataTable& t = table_for(data, holder);
              ModelSpec spec{response, predictors, parse_link(link_name), {}};
              const DesignData d = build_design(t, spec, transforms_for(transform));
              std::optional<LadderReport> lr;
              {
                  py::gil_scoped_release release;
                  lr = drop_one_ladder(spec, d, default_removal_subsets(spec));
              }
              return ladder_json(*lr, d, provenance_for(data)).dump();
          },
          py::arg("response"), py::arg("predictors"), py::arg("link") = "logit", py::arg("data") = py::none(),
          py::arg("transform") = true);

    m.def("corr_json",
          [](const std::vector<std::string>& columns, const std::string& response, bool listwise,
             const std::optional<std::string>& data, bool transform) {
              std::optional<DataTable> holder;
              const DataTable& t = table_for(data, holder);
              return corr_json(analyze_corr(t, columns, response, listwise, transforms_for(transform)),
                               provenance_for(data))
                  .dump();
          },
          py::arg("columns"), py::arg("response") = "", py::arg("listwise") = true, py::arg("data") = py::none(),
          py::arg("transform") = true);

    m.def("describe_json",
          [](const std::vector<std::string>& columns, const std::optional<std::string>& data) {
              std::optional<DataTable> holder;
              const DataTable& t = table_for(data, holder);
              return describe_json(describe_columns(t, columns), provenance_for(data)).dump();
          },
          py::arg("columns") = std::vector<std::string>{}, py::arg("data") = py::none());
}
