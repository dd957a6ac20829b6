#include "inbl/errors.hpp"
#include "inbl/experiments.hpp"
#include "inbl/hats.hpp"
#include "inbl/rtw_core.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace inbl;

namespace {

py::int_ to_py(const BigInt& v) {
  const std::string s = v.str();
  return py::reinterpret_steal<py::int_>(PyLong_FromString(s.c_str(), nullptr, 10));
}

BigInt from_py(const py::int_& v) {
  const std::string digits = py::repr(v);
  return BigInt(digits);
}

SampleStream as_stream(const py::object& source) {
  if (py::isinstance<HatState>(source)) return stream_of(source.cast<HatState>());
  auto fn = source.cast<std::function<DyadicSample(Clock)>>();
  return [fn = std::move(fn)](Clock t) {
    py::gil_scoped_acquire gil;
    return fn(t);
  };
}

TrialConfig config(unsigned n_bits, std::uint64_t trials, Seed seed, Clock max_clocks,
                   unsigned threads) {
  TrialConfig cfg;
  cfg.n_bits = n_bits;
  cfg.trials = trials;
  cfg.base_seed = seed;
  cfg.max_clocks = max_clocks;
  cfg.threads = threads;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Asymmetric random-telegraph-wave noise-based logic: drawing from hats";

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  auto protocol = py::register_exception<ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);
  py::register_exception<ReferenceMismatch>(m, "ReferenceMismatch", protocol.ptr());

  py::enum_<Role>(m, "Role").value("High", Role::High).value("Low", Role::Low);
  py::enum_<HatId>(m, "HatId").value("Hat1", HatId::Hat1).value("Hat2", HatId::Hat2);

  py::class_<DyadicSample>(m, "DyadicSample")
      .def(py::init([](const py::int_& numerator, unsigned scale) {
             return DyadicSample(from_py(numerator), scale);
           }),
           py::arg("numerator"), py::arg("scale"))
      .def_property_readonly("numerator", [](const DyadicSample& s) { return to_py(s.numerator()); })
      .def_property_readonly("scale", &DyadicSample::scale)
      .def("is_zero", &DyadicSample::is_zero)
      .def("sign", &DyadicSample::sign)
      .def("magnitude_exponent", &DyadicSample::magnitude_exponent)
      .def("__abs__", &DyadicSample::abs)
      .def("__float__", &DyadicSample::to_double)
      .def("__neg__", [](const DyadicSample& s) { return -s; })
      .def("__add__", [](const DyadicSample& a, const DyadicSample& b) { return a + b; })
      .def("__sub__", [](const DyadicSample& a, const DyadicSample& b) { return a - b; })
      .def("__eq__", [](const DyadicSample& a, const DyadicSample& b) { return a == b; })
      .def("__hash__", [](const DyadicSample& s) { return py::hash(py::make_tuple(to_py(s.numerator()), s.scale())); })
      .def("__repr__", [](const DyadicSample& s) { return "DyadicSample(" + s.to_string() + ")"; });

  py::class_<OpCounter>(m, "OpCounter")
      .def(py::init<>())
      .def_readonly("additions", &OpCounter::additions)
      .def_readonly("multiplications", &OpCounter::multiplications)
      .def_readonly("stream_samples", &OpCounter::stream_samples)
      .def("arithmetic", &OpCounter::arithmetic);

  py::class_<ReferenceSystem>(m, "ReferenceSystem")
      .def(py::init<unsigned, Seed>(), py::arg("n_bits"), py::arg("seed"))
      .def_property_readonly("n_bits", &ReferenceSystem::n_bits)
      .def_property_readonly("seed", &ReferenceSystem::seed)
      .def_property_readonly("max_number", &ReferenceSystem::max_number)
      .def("__eq__", [](const ReferenceSystem& a, const ReferenceSystem& b) { return a == b; })
      .def("__repr__", [](const ReferenceSystem& r) {
        return "ReferenceSystem(n_bits=" + std::to_string(r.n_bits()) +
               ", seed=" + std::to_string(r.seed()) + ")";
      });

  m.def("sign_sample",
        [](const ReferenceSystem& ref, unsigned bit, Role role, Clock t) {
          return to_int(sign_sample(ref, bit, role, t));
        },
        py::arg("ref"), py::arg("bit"), py::arg("role"), py::arg("t"));
  m.def("rtw_sample", &rtw_sample, py::arg("ref"), py::arg("bit"), py::arg("role"), py::arg("t"));
  m.def("product_string_sample", &product_string_sample, py::arg("ref"), py::arg("k"),
        py::arg("t"), py::arg("ops") = nullptr);
  m.def("universe_sample", &universe_sample, py::arg("ref"), py::arg("t"),
        py::arg("ops") = nullptr);
  m.def("universe_sum_oracle", &universe_sum_oracle, py::arg("ref"), py::arg("t"));
  m.def("zero_bit_count", &zero_bit_count, py::arg("k"), py::arg("n_bits"));
  m.def("log_distort", &log_distort, py::arg("u"), py::arg("n_bits"));

  py::class_<HatState>(m, "HatState")
      .def(py::init<ReferenceSystem>(), py::arg("ref"))
      .def_property_readonly("reference", &HatState::reference)
      .def_property_readonly("removed", &HatState::removed)
      .def("draw", &HatState::draw, py::arg("k"))
      .def("sample", &HatState::sample, py::arg("t"), py::arg("ops") = nullptr);

  m.def("setup_hats", &setup_hats, py::arg("ref"));
  m.def("draw_number", &draw_number, py::arg("hat"), py::arg("k"));
  m.def("hat_sample", &hat_sample, py::arg("hat"), py::arg("t"), py::arg("ops") = nullptr);

  py::class_<SingleDecision>(m, "SingleDecision")
      .def_readonly("deficient_hat", &SingleDecision::deficient_hat)
      .def_readonly("clocks_used", &SingleDecision::clocks_used)
      .def_readonly("witness", &SingleDecision::witness);
  py::class_<DoubleDecision>(m, "DoubleDecision")
      .def_readonly("hat1_missing", &DoubleDecision::hat1_missing)
      .def_readonly("hat2_missing", &DoubleDecision::hat2_missing)
      .def_readonly("clocks_used", &DoubleDecision::clocks_used);
  py::class_<Undecided>(m, "Undecided")
      .def_readonly("clocks_exhausted", &Undecided::clocks_exhausted);

  m.def("decide_single_draw",
        [](const ReferenceSystem& bob, const py::object& hat1, const py::object& hat2) {
          return decide_single_draw(bob, as_stream(hat1), as_stream(hat2));
        },
        py::arg("bob_ref"), py::arg("hat1"), py::arg("hat2"),
        "hat1/hat2 are HatState objects or callables mapping a clock to a DyadicSample.");
  m.def("decide_double_draw",
        [](const ReferenceSystem& bob, Number p, Number q, const py::object& hat1,
           const py::object& hat2, Clock max_clocks) {
          return decide_double_draw(bob, p, q, as_stream(hat1), as_stream(hat2), max_clocks);
        },
        py::arg("bob_ref"), py::arg("p"), py::arg("q"), py::arg("hat1"), py::arg("hat2"),
        py::arg("max_clocks") = kDefaultMaxClocks);

  py::class_<TrialStats>(m, "TrialStats")
      .def_readonly("trials", &TrialStats::trials)
      .def_readonly("correct", &TrialStats::correct)
      .def_readonly("clocks_used", &TrialStats::clocks_used)
      .def_readonly("witness_exponents", &TrialStats::witness_exponents)
      .def_readonly("witness_magnitude_mismatches", &TrialStats::witness_magnitude_mismatches)
      .def("correctness_rate", &TrialStats::correctness_rate);

  py::class_<Histogram>(m, "Histogram")
      .def_readonly("buckets", &Histogram::buckets)
      .def_readonly("undecided_count", &Histogram::undecided_count)
      .def_readonly("incorrect_count", &Histogram::incorrect_count)
      .def_readonly("trials", &Histogram::trials)
      .def("mean", &Histogram::mean)
      .def("fraction", &Histogram::fraction, py::arg("n"));

  py::class_<MatchProbability>(m, "MatchProbability")
      .def_readonly("trials", &MatchProbability::trials)
      .def_readonly("matches", &MatchProbability::matches)
      .def_readonly("guarded", &MatchProbability::guarded)
      .def("probability", &MatchProbability::probability);

  py::class_<OracleReport>(m, "OracleReport")
      .def_readonly("passed", &OracleReport::passed)
      .def_readonly("n_bits", &OracleReport::n_bits)
      .def_readonly("clocks_checked", &OracleReport::clocks_checked)
      .def_readonly("drawn", &OracleReport::drawn)
      .def_readonly("first_failure", &OracleReport::first_failure)
      .def_readonly("message", &OracleReport::message);

  py::class_<OpCountReport>(m, "OpCountReport")
      .def_readonly("n_bits", &OpCountReport::n_bits)
      .def_readonly("per_clock_adds", &OpCountReport::per_clock_adds)
      .def_readonly("per_clock_muls", &OpCountReport::per_clock_muls)
      .def_readonly("per_clock_stream_samples", &OpCountReport::per_clock_stream_samples)
      .def_readonly("draw_ops", &OpCountReport::draw_ops)
      .def_readonly("single_decision_ops", &OpCountReport::single_decision_ops)
      .def_readonly("double_decision_ops", &OpCountReport::double_decision_ops)
      .def_readonly("word_bits", &OpCountReport::word_bits)
      .def("universe_ops", &OpCountReport::universe_ops)
      .def("hardware_proxy", &OpCountReport::hardware_proxy);

  m.def("derive_trial_seed", &derive_trial_seed, py::arg("base_seed"), py::arg("index"));
  m.def("run_single_trials",
        [](unsigned n_bits, std::uint64_t trials, Seed seed, unsigned threads) {
          return run_single_trials(config(n_bits, trials, seed, kDefaultMaxClocks, threads));
        },
        py::arg("n_bits"), py::arg("trials"), py::arg("base_seed") = 0, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("decision_time_histogram",
        [](unsigned n_bits, Number p, Number q, std::uint64_t trials, Seed seed, Clock max_clocks,
           unsigned threads) {
          TrialConfig cfg = config(n_bits, trials, seed, max_clocks, threads);
          cfg.problem = DoubleProblem{p, q};
          return decision_time_histogram(cfg);
        },
        py::arg("n_bits"), py::arg("p"), py::arg("q"), py::arg("trials"),
        py::arg("base_seed") = 0, py::arg("max_clocks") = kDefaultMaxClocks,
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("match_probability", &match_probability, py::arg("n_bits"), py::arg("p"), py::arg("q"),
        py::arg("clocks"), py::arg("trials"), py::arg("seed") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("oracle_equivalence", &oracle_equivalence, py::arg("n_bits"), py::arg("clocks"),
        py::arg("seed") = 0, py::arg("drawn") = std::vector<Number>{},
        py::call_guard<py::gil_scoped_release>());
  m.def("op_count_report", &op_count_report, py::arg("n_bits"));
}
