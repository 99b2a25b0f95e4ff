#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "prbox/chsh.hpp"
#include "prbox/core_state.hpp"
#include "prbox/error.hpp"
#include "prbox/frft_optics.hpp"
#include "prbox/montecarlo.hpp"
#include "prbox/optimizer.hpp"

namespace py = pybind11;

namespace {

using NestedMatrix = std::vector<std::vector<double>>;

NestedMatrix to_nested(const prbox::Matrix4& m) {
  NestedMatrix out(4, std::vector<double>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = m(i, j);
  return out;
}

prbox::Matrix4 from_nested(const NestedMatrix& rows) {
  if (rows.size() != 4) throw prbox::InvalidArgument("expected a 4x4 matrix");
  prbox::Matrix4 m;
  for (int i = 0; i < 4; ++i) {
    if (rows[i].size() != 4) throw prbox::InvalidArgument("expected a 4x4 matrix");
    for (int j = 0; j < 4; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

prbox::Outcome outcome(int sign) {
  if (sign == 1) return prbox::Outcome::plus;
  if (sign == -1) return prbox::Outcome::minus;
  throw prbox::InvalidArgument("outcome sign must be +1 or -1");
}

}  // namespace

PYBIND11_MODULE(_prbox, m) {
  m.doc() = "Post-selected Gaussian photon-pair simulator (C++ core)";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const prbox::InvalidArgument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const prbox::NumericalError& e) {
      PyErr_SetString(PyExc_ArithmeticError, e.what());
    }
  });

  py::class_<prbox::GaussianTwoModeState>(m, "GaussianTwoModeState")
      .def(py::init<double, double, double>(), py::arg("delta"), py::arg("gamma"),
           py::arg("scale_s_mm") = 1.0)
      .def_static("separable", &prbox::GaussianTwoModeState::separable, py::arg("delta"),
                  py::arg("scale_s_mm") = 1.0)
      .def_property_readonly("delta", &prbox::GaussianTwoModeState::delta)
      .def_property_readonly("gamma", &prbox::GaussianTwoModeState::gamma)
      .def_property_readonly("scale_s_mm", &prbox::GaussianTwoModeState::scale_s_mm)
      .def("__repr__", [](const prbox::GaussianTwoModeState& s) {
        return "GaussianTwoModeState(delta=" + std::to_string(s.delta()) +
               ", gamma=" + std::to_string(s.gamma()) + ")";
      });

  py::class_<prbox::BivariateGaussian>(m, "BivariateGaussian")
      .def(py::init<double, double, double>(), py::arg("var1"), py::arg("var2"), py::arg("corr"))
      .def_property_readonly("var1", &prbox::BivariateGaussian::var1)
      .def_property_readonly("var2", &prbox::BivariateGaussian::var2)
      .def_property_readonly("corr", &prbox::BivariateGaussian::corr)
      .def("density", &prbox::BivariateGaussian::density, py::arg("x1"), py::arg("x2"));

  py::class_<prbox::MeasurementSettings>(m, "MeasurementSettings")
      .def(py::init([](double a, double ap, double b, double bp, double r) {
             prbox::MeasurementSettings s{a, ap, b, bp, r};
             s.validate();
             return s;
           }),
           py::arg("alpha"), py::arg("alpha_prime"), py::arg("beta"), py::arg("beta_prime"),
           py::arg("r") = 0.0)
      .def_readwrite("alpha", &prbox::MeasurementSettings::alpha)
      .def_readwrite("alpha_prime", &prbox::MeasurementSettings::alpha_prime)
      .def_readwrite("beta", &prbox::MeasurementSettings::beta)
      .def_readwrite("beta_prime", &prbox::MeasurementSettings::beta_prime)
      .def_readwrite("r", &prbox::MeasurementSettings::r);

  py::class_<prbox::JointProbTable>(m, "JointProbTable")
      .def_readonly("p_pp", &prbox::JointProbTable::p_pp)
      .def_readonly("p_pm", &prbox::JointProbTable::p_pm)
      .def_readonly("p_mp", &prbox::JointProbTable::p_mp)
      .def_readonly("p_mm", &prbox::JointProbTable::p_mm)
      .def_readonly("kept_fraction", &prbox::JointProbTable::kept_fraction);

  py::class_<prbox::CountTable>(m, "CountTable")
      .def_readonly("n_pp", &prbox::CountTable::n_pp)
      .def_readonly("n_pm", &prbox::CountTable::n_pm)
      .def_readonly("n_mp", &prbox::CountTable::n_mp)
      .def_readonly("n_mm", &prbox::CountTable::n_mm)
      .def_readonly("n_discarded", &prbox::CountTable::n_discarded)
      .def_readonly("n_total", &prbox::CountTable::n_total)
      .def_readonly("seed", &prbox::CountTable::seed)
      .def("__eq__", [](const prbox::CountTable& a, const prbox::CountTable& b) { return a == b; });

  py::class_<prbox::FrftStage>(m, "FrftStage")
      .def_readonly("order", &prbox::FrftStage::order)
      .def_readonly("focal_cm", &prbox::FrftStage::focal_cm)
      .def_readonly("z_cm", &prbox::FrftStage::z_cm);

  py::class_<prbox::FrftPlan>(m, "FrftPlan")
      .def_readonly("stages", &prbox::FrftPlan::stages)
      .def_readonly("target_order", &prbox::FrftPlan::target_order)
      .def("deviation", &prbox::FrftPlan::deviation);

  py::class_<prbox::SearchResult>(m, "SearchResult")
      .def_readonly("settings", &prbox::SearchResult::settings)
      .def_readonly("objective", &prbox::SearchResult::objective)
      .def_readonly("iterations", &prbox::SearchResult::iterations)
      .def_readonly("converged", &prbox::SearchResult::converged);

  py::class_<prbox::TuneResult>(m, "TuneResult")
      .def_readonly("r", &prbox::TuneResult::r)
      .def_readonly("fidelity", &prbox::TuneResult::fidelity);

  m.def("covariance_from_state",
        [](const prbox::GaussianTwoModeState& s) {
          return to_nested(prbox::covariance_from_state(s).matrix());
        },
        "4x4 phase-space covariance over (x1, p1, x2, p2)");
  m.def("rotate_covariance",
        [](const NestedMatrix& sigma, double alpha, double beta) {
          return to_nested(
              prbox::rotate_covariance(prbox::CovarianceMatrix4(from_nested(sigma)), alpha, beta)
                  .matrix());
        },
        py::arg("sigma"), py::arg("alpha"), py::arg("beta"));
  m.def("position_joint_density", &prbox::position_joint_density, py::arg("state"),
        py::arg("alpha"), py::arg("beta"));

  m.def("quadrant_probability",
        [](const prbox::BivariateGaussian& bg, int s1, int s2, double r) {
          return prbox::quadrant_probability(bg, outcome(s1), outcome(s2), r);
        },
        py::arg("bg"), py::arg("sign1"), py::arg("sign2"), py::arg("r"));
  m.def("postselected_probs",
        py::overload_cast<const prbox::GaussianTwoModeState&, double, double, double>(
            &prbox::postselected_probs),
        py::arg("state"), py::arg("alpha"), py::arg("beta"), py::arg("r"));
  m.def("correlation_E", &prbox::correlation_E);
  m.def("sign_expectation", &prbox::sign_expectation, py::arg("state"), py::arg("alpha"),
        py::arg("beta"));
  m.def("bell_S",
        py::overload_cast<const prbox::GaussianTwoModeState&, const prbox::MeasurementSettings&>(
            &prbox::bell_S),
        py::arg("state"), py::arg("settings"));
  m.def("pr_fidelity", &prbox::pr_fidelity, py::arg("S"));
  m.def("and_gate_success",
        py::overload_cast<const prbox::GaussianTwoModeState&, const prbox::MeasurementSettings&>(
            &prbox::and_gate_success),
        py::arg("state"), py::arg("settings"));
  m.def("no_signaling_report",
        [](const prbox::GaussianTwoModeState& s, const prbox::MeasurementSettings& st) {
          const auto rep = prbox::no_signaling_report(s, st);
          py::dict d;
          d["alice_plus"] = rep.alice_plus;
          d["bob_plus"] = rep.bob_plus;
          d["max_deviation"] = rep.max_deviation;
          return d;
        },
        py::arg("state"), py::arg("settings"));
  m.def("sweep_beta",
        [](const prbox::GaussianTwoModeState& s, double alpha, double r,
           const std::vector<double>& grid) {
          std::vector<std::pair<double, double>> out;
          for (const auto& p : prbox::sweep_beta(s, alpha, r, grid)) out.emplace_back(p.beta, p.value);
          return out;
        },
        py::arg("state"), py::arg("alpha"), py::arg("r"), py::arg("grid"));

  m.def("frft_distance", &prbox::frft_distance, py::arg("order"), py::arg("focal_cm"));
  m.def("compose_orders",
        [](const std::vector<double>& orders) { return prbox::compose_orders(orders); });
  m.def("plan_lens_system",
        [](double target, const std::vector<double>& inventory, int max_stages, double tol) {
          return prbox::plan_lens_system(target, inventory, max_stages, tol);
        },
        py::arg("target"), py::arg("inventory"), py::arg("max_stages") = 2,
        py::arg("angle_tol") = 1e-6);

  m.def("simulate_counts",
        [](const prbox::GaussianTwoModeState& s, double alpha, double beta, double r,
           std::uint64_t n, std::uint64_t seed) {
          py::gil_scoped_release release;
          return prbox::simulate_counts(s, alpha, beta, r, n, seed);
        },
        py::arg("state"), py::arg("alpha"), py::arg("beta"), py::arg("r"), py::arg("n"),
        py::arg("seed"));
  m.def("estimate_probabilities",
        [](const prbox::CountTable& c) {
          const auto e = prbox::estimate_probabilities(c);
          py::dict d;
          d["table"] = e.table;
          d["se"] = std::array<double, 4>{e.se_pp, e.se_pm, e.se_mp, e.se_mm};
          d["kept_fraction_se"] = e.se_kept_fraction;
          d["E"] = e.correlation();
          d["E_se"] = e.correlation_se();
          return d;
        });
  m.def("mc_bell_S",
        [](const prbox::GaussianTwoModeState& s, const prbox::MeasurementSettings& st,
           std::uint64_t n, std::uint64_t seed) {
          prbox::McBellEstimate est;
          {
            py::gil_scoped_release release;
            est = prbox::mc_bell_S(s, st, n, seed);
          }
          return std::pair{est.S, est.se};
        },
        py::arg("state"), py::arg("settings"), py::arg("n"), py::arg("seed"));

  m.def("maximize_S", &prbox::maximize_S, py::arg("state"), py::arg("r"),
        py::arg("grid_step"), py::arg("refine_tol"), py::call_guard<py::gil_scoped_release>());
  m.def("tune_r", &prbox::tune_r, py::arg("state"), py::arg("settings"),
        py::arg("target_fidelity"), py::arg("r_max"), py::call_guard<py::gil_scoped_release>());
}
