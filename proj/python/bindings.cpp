#include "hokalman/estimators.hpp"
#include "hokalman/experiments.hpp"
#include "hokalman/hankel.hpp"
#include "hokalman/rank.hpp"
#include "hokalman/signal.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace hokalman;

// Signals stay in binary128 on the C++ side; only reported values cross into
// Python as float.

namespace {

std::vector<double> to_doubles(const std::vector<Real>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(static_cast<double>(v));
  return out;
}

RankPolicy policy_from(const std::string& name, std::optional<double> tol) { return parse_policy(name, tol); }

py::list sweep_rows(const RankSweep& sweep) {
  py::list rows;
  for (const auto& p : sweep.points) {
    py::dict row;
    row["n"] = p.n;
    row["rank"] = p.rank;
    row["gap"] = static_cast<double>(p.decision_gap);
    row["condition"] = static_cast<double>(p.condition);
    rows.append(row);
  }
  return rows;
}

Mode mode_from_tuple(const py::tuple& t) {
  if (t.size() < 2 || t.size() > 4) throw std::invalid_argument("mode tuple is (c, d[, w[, 'sin'|'cos']])");
  Mode mode;
  mode.coefficient = t[0].cast<double>();
  mode.decay_rate = t[1].cast<double>();
  if (t.size() > 2) mode.angular_frequency = t[2].cast<double>();
  if (t.size() > 3) {
    const auto w = t[3].cast<std::string>();
    if (w == "sin")
      mode.waveform = Waveform::sine;
    else if (w != "cos")
      throw std::invalid_argument("waveform must be 'sin' or 'cos'");
  }
  return mode;
}

}  // namespace

PYBIND11_MODULE(_hokalman, m) {
  m.doc() = "Model-order estimation from Hankel matrix rank (binary128 core).";
  m.attr("__version__") = HOKALMAN_VERSION;

  py::class_<Signal>(m, "Signal")
      .def_static(
          "from_samples",
          [](const std::vector<double>& samples, double sample_period) {
            Signal s;
            s.samples.assign(samples.begin(), samples.end());
            s.sample_period = sample_period;
            s.provenance = "python samples";
            validate(s);
            return s;
          },
          py::arg("samples"), py::arg("sample_period") = 1.0)
      .def_property_readonly("samples", [](const Signal& s) { return to_doubles(s.samples); })
      .def_property_readonly("sample_period", [](const Signal& s) { return static_cast<double>(s.sample_period); })
      .def_readonly("provenance", &Signal::provenance)
      .def_property_readonly("true_order", &Signal::true_order)
      .def("__len__", &Signal::size)
      .def("__repr__", [](const Signal& s) {
        std::ostringstream os;
        os << "<Signal " << s.size() << " samples: " << s.provenance << ">";
        return os.str();
      });

  m.def("gen_y5", &gen_y5, py::arg("count"));
  m.def(
      "gen_mode_sum",
      [](const std::vector<py::tuple>& modes, std::size_t count, double sample_period) {
        std::vector<Mode> parsed;
        for (const auto& t : modes) parsed.push_back(mode_from_tuple(t));
        return gen_mode_sum(ModeSum(parsed), count, sample_period);
      },
      py::arg("modes"), py::arg("count"), py::arg("sample_period") = 1.0);
  m.def(
      "gen_pole_proximity",
      [](double p, int q, std::size_t count) { return gen_mode_sum(pole_proximity_modes(p, q), count); },
      py::arg("p"), py::arg("q"), py::arg("count"));
  m.def(
      "gen_high_order",
      [](const std::string& family, std::size_t n0, std::size_t mult, double s_scale, std::size_t count) {
        return gen_high_order(parse_high_order_family(family), n0, mult, linear_schedule(n0 * mult, s_scale), count);
      },
      py::arg("family"), py::arg("n0") = 50, py::arg("m") = 1, py::arg("s_scale") = 1.0, py::arg("count") = 119);
  m.def(
      "gen_nonhomogeneous",
      [](std::size_t count, double sample_period) {
        auto pair = gen_nonhomogeneous(count, sample_period);
        return py::make_tuple(pair.y, pair.u);
      },
      py::arg("count"), py::arg("sample_period") = 1.0);
  m.def(
      "add_noise", [](const Signal& s, double amplitude, std::uint64_t seed) { return add_noise(s, {amplitude, seed}); },
      py::arg("signal"), py::arg("amplitude"), py::arg("seed"));
  m.def(
      "add_offset", [](const Signal& s, double offset) { return add_offset(s, offset); }, py::arg("signal"),
      py::arg("offset"));
  m.def("snr_db", &snr_db, py::arg("signal"), py::arg("noisy"));

  m.def(
      "hankel_singular_values",
      [](const Signal& s, std::size_t n) { return to_doubles(singular_values(build_hankel(s, n)).values); },
      py::arg("signal"), py::arg("n"));
  m.def(
      "hankel_rank",
      [](const Signal& s, std::size_t n, const std::string& policy, std::optional<double> tol) {
        return numerical_rank(singular_values(build_hankel(s, n)), policy_from(policy, tol)).rank;
      },
      py::arg("signal"), py::arg("n"), py::arg("policy") = "relative", py::arg("tol") = py::none());
  m.def(
      "augmented_rank",
      [](const Signal& y, const Signal& u, std::size_t n, const std::string& side) {
        AugmentationSide where;
        if (side == "bottom")
          where = AugmentationSide::bottom_row_of_inputs;
        else if (side == "right")
          where = AugmentationSide::right_column_of_inputs;
        else
          throw std::invalid_argument("side must be 'bottom' or 'right'");
        return numerical_rank(singular_values(build_augmented(y, u, n, where)), RankPolicy::default_policy()).rank;
      },
      py::arg("y"), py::arg("u"), py::arg("n"), py::arg("side") = "bottom");
  m.def(
      "exact_rank",
      [](const std::vector<std::vector<std::string>>& rows) {
        if (rows.empty()) return std::size_t{0};
        RationalMatrix a(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i].size() != a.cols()) throw std::invalid_argument("ragged matrix");
          for (std::size_t j = 0; j < a.cols(); ++j) {
            mpq_class q(rows[i][j]);
            q.canonicalize();
            a(i, j) = q;
          }
        }
        return exact_rank_rational(a);
      },
      py::arg("rows"), "Exact rank of a matrix of rational strings such as '1/3'.");

  m.def(
      "rank_sweep",
      [](const Signal& s, std::size_t n_min, std::size_t n_max, const std::string& policy, std::optional<double> tol) {
        return sweep_rows(rank_sweep(s, n_min, n_max, policy_from(policy, tol)));
      },
      py::arg("signal"), py::arg("n_min"), py::arg("n_max"), py::arg("policy") = "relative",
      py::arg("tol") = py::none());
  m.def(
      "hokalman_order",
      [](const Signal& s, std::size_t n_max, const std::string& policy, std::optional<double> tol) {
        return hokalman_order(s, n_max, policy_from(policy, tol)).estimate.order;
      },
      py::arg("signal"), py::arg("n_max"), py::arg("policy") = "relative", py::arg("tol") = py::none());
  m.def(
      "aic_order",
      [](const Signal& s, std::size_t p_max) {
        const auto r = aic_order(s, p_max);
        std::vector<double> values;
        for (const auto& e : r.report.per_order) values.push_back(static_cast<double>(e.aic));
        return py::make_tuple(r.report.selected, values);
      },
      py::arg("signal"), py::arg("p_max"));
  m.def(
      "covariance_determinants",
      [](const Signal& s, std::size_t m_min, std::size_t m_max) {
        std::vector<double> dets;
        for (const auto& e : covariance_determinants(s, m_min, m_max).per_order)
          dets.push_back(static_cast<double>(e.determinant));
        return dets;
      },
      py::arg("signal"), py::arg("m_min"), py::arg("m_max"));

  m.def("list_experiments", [] {
    py::list out;
    for (const auto& info : list_experiments()) {
      py::dict d;
      d["name"] = info.name;
      d["description"] = info.description;
      d["defaults"] = info.defaults;
      d["seed"] = info.default_seed;
      out.append(d);
    }
    return out;
  });
  m.def(
      "run_experiment",
      [](const std::string& name, const std::map<std::string, std::string>& params, std::optional<std::uint64_t> seed,
         const std::string& out_path) {
        ExperimentSpec spec;
        spec.name = name;
        spec.parameters = params;
        spec.seed = seed;
        ExperimentSummary summary;
        {
          py::gil_scoped_release release;
          summary = run_experiment(spec, std::filesystem::path(out_path));
        }
        py::dict d;
        d["name"] = summary.name;
        d["headline"] = summary.headline;
        d["status"] = summary.status;
        d["metrics"] = summary.metrics;
        return d;
      },
      py::arg("name"), py::arg("params") = std::map<std::string, std::string>{}, py::arg("seed") = py::none(),
      py::arg("out_path"));
}
