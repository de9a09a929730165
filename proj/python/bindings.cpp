// Python bindings for the core operations: transforms, simulation, the
// block-thresholding estimators, and the Monte Carlo risk harness.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <variant>

#include "blockshrink/risk.hpp"
#include "blockshrink/version.hpp"

namespace py = pybind11;
using namespace blockshrink;

namespace {

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
  return std::vector<double>(a.data(), a.data() + a.shape(0));
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

FunctionSpec make_spec(const py::object& fn) {
  return fn.cast<FunctionSpec>();
}

double lj_key(int v) { return v == l_infinity ? std::numeric_limits<double>::infinity() : v; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Truncated block thresholding wavelet estimation";
  m.attr("__version__") = version;

  py::class_<CoefficientTree>(m, "CoefficientTree")
      .def_static("zeros", &CoefficientTree::zeros, py::arg("max_level"))
      .def_property_readonly("max_level", &CoefficientTree::max_level)
      .def("level", [](const CoefficientTree& t, int j) {
        if (!t.has_level(j)) throw std::out_of_range("no such level");
        return to_array(t.level(j));
      }, py::arg("j"))
      .def("set_level", [](CoefficientTree& t, int j, const py::array_t<double>& values) {
        if (!t.has_level(j)) throw std::out_of_range("no such level");
        auto v = to_vector(values);
        if (v.size() != t.level(j).size()) throw std::invalid_argument("level size mismatch");
        t.level(j) = std::move(v);
      }, py::arg("j"), py::arg("values"))
      .def("energy", &CoefficientTree::energy)
      .def("__repr__", [](const CoefficientTree& t) {
        return "<CoefficientTree max_level=" + std::to_string(t.max_level()) + ">";
      });

  py::class_<SineSpec>(m, "Sine").def(py::init<>());
  py::class_<BlockSpike>(m, "BlockSpike")
      .def(py::init([](double beta, double Q, int level, int block_len) {
             return BlockSpike{beta, Q, level, block_len};
           }),
           py::arg("beta"), py::arg("Q"), py::arg("level"), py::arg("block_len"))
      .def_readonly("beta", &BlockSpike::beta)
      .def_readonly("Q", &BlockSpike::Q)
      .def_readonly("level", &BlockSpike::level)
      .def_readonly("block_len", &BlockSpike::block_len);
  py::class_<SampleFunction>(m, "SampleFunction")
      .def(py::init([](const py::array_t<double>& samples) {
             return SampleFunction{to_vector(samples)};
           }),
           py::arg("samples"));

  m.def("analyze", [](const py::array_t<double>& samples) { return analyze(to_vector(samples)); },
        py::arg("samples"), "Orthonormal discrete Haar transform of 2^m samples.");
  m.def("synthesize", [](const CoefficientTree& t) { return to_array(synthesize(t)); },
        py::arg("tree"), "Inverse transform.");
  m.def("evaluate_expansion", [](const CoefficientTree& t, std::size_t grid) {
          return to_array(evaluate_expansion(t, grid));
        },
        py::arg("tree"), py::arg("grid_size"),
        "Expansion values at the grid midpoints (i+1/2)/grid_size.");
  m.def("true_coefficients", [](const py::object& fn, int max_level) {
          return true_coefficients(make_spec(fn), max_level);
        },
        py::arg("function"), py::arg("max_level"));
  m.def("function_values", [](const py::object& fn, std::size_t grid) {
          return to_array(function_values(make_spec(fn), grid));
        },
        py::arg("function"), py::arg("grid_size"));
  m.def("block_spike_constant", &block_spike_constant, py::arg("spec"));
  m.def("block_length", &block_length, py::arg("n"));

  py::class_<SeedSpec>(m, "SeedSpec")
      .def(py::init([](std::uint64_t master_seed, std::uint64_t repetition) {
             return SeedSpec{master_seed, repetition};
           }),
           py::arg("master_seed") = 0, py::arg("repetition") = 0)
      .def_readonly("master_seed", &SeedSpec::master_seed)
      .def_readonly("repetition", &SeedSpec::repetition);

  py::class_<NoisyCoefficients>(m, "NoisyCoefficients")
      .def(py::init([](const CoefficientTree& y, std::uint64_t n, double sigma) {
             return NoisyCoefficients{y, n, sigma};
           }),
           py::arg("y"), py::arg("n"), py::arg("sigma"))
      .def_readonly("y", &NoisyCoefficients::y)
      .def_readonly("n", &NoisyCoefficients::n)
      .def_readonly("sigma", &NoisyCoefficients::sigma);

  m.def("simulate", &simulate, py::arg("truth"), py::arg("n"), py::arg("sigma"), py::arg("seed"));
  m.def("rescale_for_estimation", &rescale_for_estimation, py::arg("obs"));
  m.def("standardized_residuals", &standardized_residuals, py::arg("obs"), py::arg("truth"));
  m.def("check_event_T", &check_event_T, py::arg("residuals"), py::arg("n"));

  m.def("compute_L", [](const py::array_t<double>& level, std::uint64_t n, double threshold) {
          const auto values = to_vector(level);
          const int L = compute_L(values, partition(std::max<std::size_t>(values.size(), 1), n),
                                  threshold);
          return lj_key(L);
        },
        py::arg("y_level"), py::arg("n"), py::arg("threshold"),
        "Level statistic; blocks of length ceil(ln n); returns inf if no block fires.");
  m.def("compute_L_bruteforce",
        [](const py::array_t<double>& level, std::uint64_t n, double threshold) {
          const auto values = to_vector(level);
          const int L = compute_L_bruteforce(
              values, partition(std::max<std::size_t>(values.size(), 1), n), threshold);
          return lj_key(L);
        },
        py::arg("y_level"), py::arg("n"), py::arg("threshold"));
  m.def("truncation_threshold", [](double L, double gamma, std::uint64_t n) {
          const int l_int = std::isinf(L) ? l_infinity : static_cast<int>(L);
          return truncation_threshold(l_int, gamma, n);
        },
        py::arg("L"), py::arg("gamma"), py::arg("n"));
  m.def("chi_square_tail_bound", &chi_square_tail_bound, py::arg("m"), py::arg("Q"));

  py::enum_<Variant>(m, "Variant")
      .value("truncated_block", Variant::truncated_block)
      .value("plain_block", Variant::plain_block)
      .value("projection", Variant::projection)
      .value("hard", Variant::hard);

  py::class_<EstimatorConfig>(m, "EstimatorConfig")
      .def(py::init([](double gamma, Variant variant, bool block_zeroing, bool keep_coarse,
                       double beta, double Q, double lambda_mult) {
             EstimatorConfig cfg;
             cfg.gamma = gamma;
             cfg.variant = variant;
             cfg.block_zeroing = block_zeroing;
             cfg.keep_coarse = keep_coarse;
             cfg.beta = beta;
             cfg.Q = Q;
             cfg.lambda_mult = lambda_mult;
             return cfg;
           }),
           py::arg("gamma") = 7.0, py::arg("variant") = Variant::truncated_block,
           py::arg("block_zeroing") = true, py::arg("keep_coarse") = false, py::arg("beta") = 1.0,
           py::arg("Q") = 1.0, py::arg("lambda_mult") = 1.0)
      .def_readwrite("gamma", &EstimatorConfig::gamma)
      .def_readwrite("variant", &EstimatorConfig::variant)
      .def_readwrite("block_zeroing", &EstimatorConfig::block_zeroing)
      .def_readwrite("keep_coarse", &EstimatorConfig::keep_coarse);

  py::class_<LevelDiagnostics>(m, "LevelDiagnostics")
      .def_property_readonly("L", [](const LevelDiagnostics& d) { return lj_key(d.L); })
      .def_readonly("t", &LevelDiagnostics::t)
      .def_readonly("clamped", &LevelDiagnostics::clamped)
      .def_readonly("zeroed", &LevelDiagnostics::zeroed);

  py::class_<EstimateResult>(m, "EstimateResult")
      .def_readonly("coefficients", &EstimateResult::coefficients)
      .def("diagnostics", &EstimateResult::diagnostics, py::arg("level"),
           py::return_value_policy::copy);

  m.def("estimate", &estimate, py::arg("obs"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("truncated_block_threshold", &truncated_block_threshold, py::arg("obs"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("plain_block_threshold", &plain_block_threshold, py::arg("obs"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("projection_estimator", &projection_estimator, py::arg("obs"), py::arg("beta"),
        py::arg("Q"), py::call_guard<py::gil_scoped_release>());
  m.def("hard_threshold", &hard_threshold, py::arg("obs"), py::arg("lambda_mult"),
        py::call_guard<py::gil_scoped_release>());

  m.def("l2_risk", &l2_risk, py::arg("estimate"), py::arg("truth"), py::arg("tail_energy"));
  m.def("linf_risk", [](const CoefficientTree& est, const py::object& fn, std::size_t grid) {
          return linf_risk(est, make_spec(fn), grid);
        },
        py::arg("estimate"), py::arg("truth"), py::arg("grid_size"));

  py::class_<RiskSummary>(m, "RiskSummary")
      .def_readonly("n", &RiskSummary::n)
      .def_readonly("sigma", &RiskSummary::sigma)
      .def_readonly("gamma", &RiskSummary::gamma)
      .def_readonly("reps", &RiskSummary::reps)
      .def_readonly("l2_mean", &RiskSummary::l2_mean)
      .def_readonly("l2_se", &RiskSummary::l2_se)
      .def_readonly("linf_mean", &RiskSummary::linf_mean)
      .def_readonly("linf_se", &RiskSummary::linf_se)
      .def_readonly("tail_energy", &RiskSummary::tail_energy)
      .def_readonly("tail_bound", &RiskSummary::tail_bound)
      .def_readonly("event_t_failure_rate", &RiskSummary::event_t_failure_rate)
      .def_readonly("se_degenerate", &RiskSummary::se_degenerate)
      .def("__repr__", [](const RiskSummary& s) {
        return "<RiskSummary n=" + std::to_string(s.n) + " gamma=" + std::to_string(s.gamma) +
               " l2_mean=" + std::to_string(s.l2_mean) + ">";
      });

  m.def("monte_carlo",
        [](const py::object& fn, std::uint64_t n, double sigma, const std::vector<double>& gammas,
           const EstimatorConfig& config, int reps, std::uint64_t master_seed, int threads) {
          Scenario sc;
          sc.function = make_spec(fn);
          sc.n = n;
          sc.sigma = sigma;
          sc.gammas = gammas;
          sc.config = config;
          sc.reps = reps;
          sc.master_seed = master_seed;
          sc.threads = threads;
          py::gil_scoped_release release;
          return monte_carlo(sc);
        },
        py::arg("function"), py::arg("n"), py::arg("sigma"), py::arg("gammas"),
        py::arg("config") = EstimatorConfig{}, py::arg("reps") = 1000,
        py::arg("master_seed") = 1, py::arg("threads") = 0);

  m.def("lj_distribution",
        [](const py::object& fn, std::uint64_t n, double sigma, double gamma, int reps,
           std::uint64_t master_seed, int threads) {
          Scenario sc;
          sc.function = make_spec(fn);
          sc.n = n;
          sc.sigma = sigma;
          sc.gammas = {gamma};
          sc.reps = reps;
          sc.master_seed = master_seed;
          sc.threads = threads;
          LjDistribution dist;
          {
            py::gil_scoped_release release;
            dist = lj_distribution(sc);
          }
          py::dict out;
          for (int j = -1; j + 1 < static_cast<int>(dist.per_level.size()); ++j) {
            py::dict level;
            for (const auto& [v, p] : dist.per_level[static_cast<std::size_t>(j + 1)])
              level[py::float_(lj_key(v))] = p;
            out[py::int_(j)] = level;
          }
          return out;
        },
        py::arg("function"), py::arg("n"), py::arg("sigma"), py::arg("gamma") = 7.0,
        py::arg("reps") = 10000, py::arg("master_seed") = 1, py::arg("threads") = 0);

  m.def("rate_regression",
        [](const std::vector<std::uint64_t>& ns, const std::vector<double>& risks,
           const std::string& scale) {
          const RateScale s = scale == "log_n" ? RateScale::log_n : RateScale::log_n_over_log_n;
          const RateFit fit = rate_regression(ns, risks, s);
          return py::make_tuple(fit.slope, fit.se);
        },
        py::arg("n_values"), py::arg("risks"), py::arg("scale") = "log_n");

  m.def("matched_spike_level", &matched_spike_level, py::arg("beta"), py::arg("Q"), py::arg("n"),
        py::arg("sigma"), py::arg("gamma"), py::arg("energy_factor") = 4.0);
}
