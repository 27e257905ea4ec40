#include "hokalman/experiments.hpp"

#include "hokalman/estimators.hpp"
#include "hokalman/hankel.hpp"
#include "hokalman/signal.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hokalman {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Params {
 public:
  Params(const ExperimentInfo& info, const std::map<std::string, std::string>& overrides)
      : values_(info.defaults) {
    for (const auto& [key, value] : overrides) {
      auto it = values_.find(key);
      if (it == values_.end()) {
        std::string known;
        for (const auto& [k, v] : info.defaults) known += (known.empty() ? "" : ", ") + k;
        throw std::invalid_argument("experiment '" + info.name + "' has no parameter '" + key +
                                    "' (parameters: " + known + ")");
      }
      it->second = value;
    }
  }

  const std::map<std::string, std::string>& values() const { return values_; }

  Real real(const std::string& key) const {
    try {
      const Real v = parse_real(values_.at(key));
      if (!boost::multiprecision::isfinite(v)) throw std::invalid_argument("non-finite");
      return v;
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("parameter '" + key + "' is not a finite number: '" + values_.at(key) + "'");
    }
  }

  long long integer(const std::string& key) const {
    const std::string& text = values_.at(key);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || text.empty())
      throw std::invalid_argument("parameter '" + key + "' is not an integer: '" + text + "'");
    return v;
  }

  std::size_t positive(const std::string& key) const {
    const long long v = integer(key);
    if (v <= 0) throw std::invalid_argument("parameter '" + key + "' must be positive");
    return static_cast<std::size_t>(v);
  }

 private:
  std::map<std::string, std::string> values_;
};

class Table {
 public:
  explicit Table(std::ostream& out) : out_(out) { out_ << "series,x,metric,value\n"; }

  void row(const std::string& series, long long x, const std::string& metric, const std::string& value) {
    out_ << series << ',' << x << ',' << metric << ',' << value << '\n';
  }
  void row(const std::string& series, long long x, const std::string& metric, const Real& value) {
    row(series, x, metric, format_real(value));
  }
  void row(const std::string& series, long long x, const std::string& metric, std::size_t value) {
    row(series, x, metric, std::to_string(value));
  }

  void sweep(const std::string& series, const RankSweep& s) {
    for (const auto& p : s.points) {
      const auto n = static_cast<long long>(p.n);
      row(series, n, "rank", p.rank);
      row(series, n, "gap", p.decision_gap);
      row(series, n, "condition", p.condition);
    }
  }

 private:
  std::ostream& out_;
};

struct Context {
  const Params& params;
  std::uint64_t seed;
  const RankPolicy& policy;
  Table& table;
};

using Runner = std::function<ExperimentSummary(Context&)>;

struct Entry {
  ExperimentInfo info;
  Runner run;
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

double opt_to_double(const std::optional<std::size_t>& v) {
  return v ? static_cast<double>(*v) : kNaN;
}

std::string opt_to_string(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : std::string("none");
}

Real peak_magnitude(const Signal& s) {
  Real peak = 0;
  for (const auto& v : s.samples) peak = std::max<Real>(peak, abs(v));
  return peak;
}

ExperimentSummary fig2_first_order(Context& ctx) {
  const Real b = ctx.params.real("B");
  const Real q = ctx.params.real("Q");
  const std::size_t n_max = ctx.params.positive("n_max");
  const Real period = ctx.params.real("sample_period");
  const Signal y1 = gen_mode_sum(ModeSum({{b, q}}), 2 * n_max - 1, period);
  const RankSweep sweep = rank_sweep(y1, 2, n_max, ctx.policy);
  ctx.table.sweep("sweep", sweep);

  std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
  for (const auto& p : sweep.points) {
    lo = std::min(lo, p.rank);
    hi = std::max(hi, p.rank);
  }
  ExperimentSummary s;
  s.headline = lo == hi ? "rank=" + std::to_string(hi) : "rank=mixed";
  s.metrics = {{"min_rank", double(lo)}, {"max_rank", double(hi)}};
  return s;
}

ExperimentSummary fig3_pole_proximity(Context& ctx) {
  const Real p = ctx.params.real("p");
  const long long q_min = ctx.params.integer("q_min");
  const long long q_max = ctx.params.integer("q_max");
  const std::size_t n_min = ctx.params.positive("n_min");
  const std::size_t n_max = ctx.params.positive("n_max");
  if (q_max < q_min) throw std::invalid_argument("q_max must be >= q_min");
  if (n_max < n_min) throw std::invalid_argument("n_max must be >= n_min");

  struct Level {
    std::string label;
    Real relative_amplitude;
  };
  const std::vector<Level> levels = {{"none", Real(0)},
                                     {"low", ctx.params.real("noise_low")},
                                     {"high", ctx.params.real("noise_high")}};
  ExperimentSummary s;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const Level& level = levels[li];
    // ranks[n - n_min][q - q_min]
    std::vector<std::vector<std::size_t>> ranks(n_max - n_min + 1);
    for (long long q = q_min; q <= q_max; ++q) {
      Signal y2 = gen_mode_sum(pole_proximity_modes(p, static_cast<int>(q)), 2 * n_max - 1);
      Real amplitude = 0;
      if (level.relative_amplitude > 0) {
        amplitude = level.relative_amplitude * peak_magnitude(y2);
        y2 = add_noise(y2, {amplitude, ctx.seed + li});
      }
      for (std::size_t n = n_min; n <= n_max; ++n) {
        // ||E||_2 <= n * a bounds every spurious singular value of the noise
        const RankPolicy policy = amplitude > 0 ? RankPolicy::absolute(Real(n) * amplitude) : ctx.policy;
        const std::size_t r = numerical_rank(singular_values(build_hankel(y2, n)), policy).rank;
        ranks[n - n_min].push_back(r);
        ctx.table.row(level.label + "/n=" + std::to_string(n), q, "rank", r);
      }
    }
    for (std::size_t n = n_min; n <= n_max; ++n) {
      const auto& row = ranks[n - n_min];
      std::optional<std::size_t> q0;
      bool monotone = true;
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (!q0 && row[i] < 2) q0 = static_cast<std::size_t>(q_min) + i;
        if (i > 0 && row[i] > row[i - 1]) monotone = false;
      }
      const auto x = static_cast<long long>(n);
      ctx.table.row("q0/" + level.label, x, "q0", opt_to_string(q0));
      ctx.table.row("q0/" + level.label, x, "monotone", yes_no(monotone));
      if (n == n_max) {
        s.metrics["q0_" + level.label] = opt_to_double(q0);
        s.metrics["monotone_" + level.label] = monotone ? 1 : 0;
      }
    }
  }
  s.headline = "q0=" + (std::isnan(s.metrics["q0_none"]) ? std::string("none")
                                                        : std::to_string(static_cast<long long>(s.metrics["q0_none"])));
  return s;
}

ExperimentSummary fig1_table1_y5(Context& ctx) {
  const std::size_t count = ctx.params.positive("count");
  const std::size_t n_max = ctx.params.positive("n_max");
  const std::size_t p_max = ctx.params.positive("p_max");
  const auto m_min = static_cast<std::size_t>(ctx.params.integer("m_min"));
  const std::size_t m_max = ctx.params.positive("m_max");
  const Signal y5 = gen_y5(count);

  const auto hk = hokalman_order(y5, n_max, ctx.policy);
  ctx.table.sweep("hokalman", hk.sweep);

  const auto aic = aic_order(y5, p_max);
  for (const auto& e : aic.report.per_order) {
    ctx.table.row("aic", static_cast<long long>(e.p), "rss", e.rss);
    ctx.table.row("aic", static_cast<long long>(e.p), "aic", e.aic);
  }

  const auto cov = covariance_determinants(y5, m_min, m_max);
  for (const auto& e : cov.per_order) ctx.table.row("covdet", static_cast<long long>(e.m), "det", e.determinant);
  const auto cov_est = covdet_order(cov);

  ExperimentSummary s;
  s.headline = hk.estimate.headline() + ";aic=" + opt_to_string(aic.estimate.order) +
               ";covdet=" + (cov_est.order ? std::to_string(*cov_est.order) : std::string("inconclusive"));
  s.metrics = {{"hokalman_order", opt_to_double(hk.estimate.order)},
               {"aic_order", opt_to_double(aic.estimate.order)},
               {"covdet_order", opt_to_double(cov_est.order)}};
  return s;
}

ExperimentSummary high_order(Context& ctx, HighOrderFamily family) {
  const std::size_t n0 = ctx.params.positive("N0");
  const std::size_t m = ctx.params.positive("M");
  const Real scale = ctx.params.real("s_scale");
  const std::size_t n_min = ctx.params.positive("n_min");
  const std::size_t n_max = ctx.params.positive("n_max");
  const Signal y = gen_high_order(family, n0, m, linear_schedule(m * n0, scale), 2 * n_max - 1);
  const RankSweep sweep = rank_sweep(y, n_min, n_max, ctx.policy);
  ctx.table.sweep("sweep", sweep);

  bool cond_monotone = true;
  for (std::size_t i = 1; i < sweep.points.size() && sweep.points[i].n <= 10; ++i)
    if (!(sweep.points[i].condition > sweep.points[i - 1].condition)) cond_monotone = false;

  ExperimentSummary s;
  const std::size_t final_rank = sweep.points.back().rank;
  s.headline = "rank@" + std::to_string(n_max) + "=" + std::to_string(final_rank);
  if (family == HighOrderFamily::exponential) s.headline += ";cond_monotone_to_10=" + yes_no(cond_monotone);
  s.metrics = {{"final_rank", double(final_rank)},
               {"true_order", opt_to_double(y.true_order())},
               {"cond_monotone_to_10", cond_monotone ? 1.0 : 0.0}};
  return s;
}

ExperimentSummary sec33_nonhomogeneous(Context& ctx) {
  const std::size_t n = ctx.params.positive("n");
  const Real period = ctx.params.real("sample_period");
  const auto pair = gen_nonhomogeneous(2 * n, period);

  struct Case {
    std::string label;
    Matrix entries;
  };
  const std::vector<Case> cases = {
      {"hankel", build_hankel(pair.y, n).entries},
      {"aug_bottom", build_augmented(pair.y, pair.u, n, AugmentationSide::bottom_row_of_inputs).entries},
      {"aug_right", build_augmented(pair.y, pair.u, n, AugmentationSide::right_column_of_inputs).entries}};

  ExperimentSummary s;
  for (const auto& c : cases) {
    const auto spectrum = singular_values(c.entries);
    const auto result = numerical_rank(spectrum, ctx.policy);
    ctx.table.row(c.label, 0, "rank", result.rank);
    ctx.table.row(c.label, 0, "rows", static_cast<std::size_t>(c.entries.rows()));
    ctx.table.row(c.label, 0, "cols", static_cast<std::size_t>(c.entries.cols()));
    for (std::size_t i = 0; i < spectrum.values.size(); ++i)
      ctx.table.row(c.label, static_cast<long long>(i + 1), "sigma", spectrum.values[i]);
    s.metrics["rank_" + c.label] = double(result.rank);
  }
  s.headline = "rank=" + std::to_string(static_cast<int>(s.metrics["rank_hankel"])) +
               ";aug_bottom=" + std::to_string(static_cast<int>(s.metrics["rank_aug_bottom"])) +
               ";aug_right=" + std::to_string(static_cast<int>(s.metrics["rank_aug_right"]));
  return s;
}

struct NoisyFirstOrder {
  Signal clean;
  Signal noisy;
};

NoisyFirstOrder noisy_first_order(const Real& q, std::size_t count, double snr, std::uint64_t seed) {
  NoisyFirstOrder out;
  out.clean = gen_mode_sum(ModeSum({{Real(1), q}}), count);
  out.noisy = add_noise(out.clean, {noise_amplitude_for_snr(out.clean, snr), seed});
  return out;
}

ExperimentSummary offset_effect(Context& ctx) {
  const Real q = ctx.params.real("Q");
  const Real offset = ctx.params.real("offset");
  const double snr = static_cast<double>(ctx.params.real("snr_db"));
  const std::size_t trials = ctx.params.positive("trials");
  const std::size_t n_max = ctx.params.positive("n_max");
  if (n_max < 2) throw std::invalid_argument("n_max must be >= 2");
  const RankPolicy noisy_policy = RankPolicy::relative(pow(Real(10), Real(-snr) / 20));

  const Signal clean = gen_mode_sum(ModeSum({{Real(1), q}}), 2 * n_max - 1);
  const auto base_order = hokalman_order(clean, n_max, ctx.policy).estimate.order;
  const auto offset_order = hokalman_order(add_offset(clean, offset), n_max, ctx.policy).estimate.order;
  ctx.table.row("noise_free", 0, "order_base", opt_to_string(base_order));
  ctx.table.row("noise_free", 0, "order_offset", opt_to_string(offset_order));

  std::size_t not_later = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto signal = noisy_first_order(q, 2 * n_max - 1, snr, ctx.seed + t);
    const Signal shifted = add_offset(signal.noisy, offset);
    const auto base_sweep = rank_sweep(signal.noisy, 2, n_max, noisy_policy);
    const auto offset_sweep = rank_sweep(shifted, 2, n_max, noisy_policy);
    const std::size_t onset_base = *plateau_onset(base_sweep);
    const std::size_t onset_offset = *plateau_onset(offset_sweep);
    if (onset_offset <= onset_base) ++not_later;
    const auto x = static_cast<long long>(t);
    ctx.table.row("trial", x, "onset_base", onset_base);
    ctx.table.row("trial", x, "onset_offset", onset_offset);
    ctx.table.row("trial", x, "final_rank_base", base_sweep.points.back().rank);
    ctx.table.row("trial", x, "final_rank_offset", offset_sweep.points.back().rank);
  }
  ExperimentSummary s;
  s.headline = "offset_not_later=" + std::to_string(not_later) + "/" + std::to_string(trials);
  s.metrics = {{"offset_not_later", double(not_later)},
               {"trials", double(trials)},
               {"noise_free_order_base", opt_to_double(base_order)},
               {"noise_free_order_offset", opt_to_double(offset_order)}};
  return s;
}

ExperimentSummary echelon_effect(Context& ctx) {
  const Real q = ctx.params.real("Q");
  const double snr = static_cast<double>(ctx.params.real("snr_db"));
  const std::size_t trials = ctx.params.positive("trials");
  const std::size_t n_max = ctx.params.positive("n_max");
  if (n_max < 2) throw std::invalid_argument("n_max must be >= 2");
  const Real tau = pow(Real(10), Real(-snr) / 20);
  const RankPolicy noisy_policy = RankPolicy::relative(tau);

  std::size_t not_later = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto signal = noisy_first_order(q, 2 * n_max - 1, snr, ctx.seed + t);
    const auto svd_sweep = rank_sweep(signal.noisy, 2, n_max, noisy_policy);
    const auto ech_sweep = echelon_sweep(signal.noisy, 2, n_max, tau);
    const std::size_t onset_svd = *plateau_onset(svd_sweep);
    const std::size_t onset_ech = *plateau_onset(ech_sweep);
    if (onset_ech <= onset_svd) ++not_later;
    const auto x = static_cast<long long>(t);
    ctx.table.row("trial", x, "onset_svd", onset_svd);
    ctx.table.row("trial", x, "onset_echelon", onset_ech);
    ctx.table.row("trial", x, "final_rank_svd", svd_sweep.points.back().rank);
    ctx.table.row("trial", x, "final_rank_echelon", ech_sweep.points.back().rank);
  }
  ExperimentSummary s;
  s.headline = "echelon_not_later=" + std::to_string(not_later) + "/" + std::to_string(trials);
  s.metrics = {{"echelon_not_later", double(not_later)}, {"trials", double(trials)}};
  return s;
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {{"fig2_first_order",
        "Fig. 2: rank sweep of the first-order response B*exp(-Q n)",
        {{"B", "1"}, {"Q", "0.5"}, {"n_max", "10"}, {"sample_period", "1"}},
        2},
       fig2_first_order},
      {{"fig3_pole_proximity",
        "Fig. 3: rank vs n and q for two poles 2^-q apart, noise-free and at two noise levels",
        {{"p", "10"},
         {"q_min", "1"},
         {"q_max", "64"},
         {"n_min", "2"},
         {"n_max", "8"},
         {"noise_low", "1e-6"},
         {"noise_high", "1e-5"}},
        3},
       fig3_pole_proximity},
      {{"fig1_table1_y5",
        "Fig. 1 and Table I: y5 rank sweep, AIC values and covariance determinants",
        {{"count", "100"}, {"n_max", "8"}, {"p_max", "10"}, {"m_min", "2"}, {"m_max", "8"}},
        1},
       fig1_table1_y5},
      {{"fig4_high_order_sin",
        "Fig. 4: rank sweep of the sinusoidal high-order mode sum",
        {{"N0", "50"}, {"M", "1"}, {"s_scale", "1"}, {"n_min", "2"}, {"n_max", "60"}},
        4},
       [](Context& c) { return high_order(c, HighOrderFamily::sinusoid); }},
      {{"fig5_high_order_exp",
        "Fig. 5: rank sweep and condition numbers of the exponential high-order mode sum",
        {{"N0", "50"}, {"M", "1"}, {"s_scale", "1"}, {"n_min", "2"}, {"n_max", "60"}},
        5},
       [](Context& c) { return high_order(c, HighOrderFamily::exponential); }},
      {{"sec33_nonhomogeneous",
        "Non-homogeneous system: plain and input-augmented Hankel ranks",
        {{"n", "10"}, {"sample_period", "1"}},
        6},
       sec33_nonhomogeneous},
      {{"offset_effect",
        "Noisy first-order sweeps with and without a unit offset: plateau onset",
        {{"Q", "0.5"}, {"offset", "1"}, {"snr_db", "40"}, {"trials", "50"}, {"n_max", "10"}},
        7},
       offset_effect},
      {{"echelon_effect",
        "Noisy first-order sweeps: SVD rank vs row-echelon pivot count plateau onset",
        {{"Q", "0.5"}, {"snr_db", "40"}, {"trials", "50"}, {"n_max", "10"}},
        8},
       echelon_effect},
  };
  return entries;
}

const Entry& find_entry(const std::string& name) {
  for (const auto& e : registry())
    if (e.info.name == name) return e;
  std::string known;
  for (const auto& e : registry()) known += (known.empty() ? "" : ", ") + e.info.name;
  throw std::invalid_argument("unknown experiment '" + name + "' (available: " + known + ")");
}

}  // namespace

std::string ExperimentSummary::line() const { return name + "," + headline + "," + status; }

const std::vector<ExperimentInfo>& list_experiments() {
  static const std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> v;
    for (const auto& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

const ExperimentInfo& find_experiment(const std::string& name) { return find_entry(name).info; }

ExperimentSummary run_experiment(const ExperimentSpec& spec, std::ostream& out) {
  const Entry& entry = find_entry(spec.name);
  const Params params(entry.info, spec.parameters);
  const std::uint64_t seed = spec.seed.value_or(entry.info.default_seed);

  std::ostringstream body;
  body << "# experiment: " << entry.info.name << '\n'
       << "# description: " << entry.info.description << '\n'
       << "# artifact_version: " << HOKALMAN_VERSION << '\n'
       << "# seed: " << seed << '\n'
       << "# policy: " << spec.policy.describe() << '\n';
  for (const auto& [key, value] : params.values()) body << "# param " << key << '=' << value << '\n';

  Table table(body);
  Context ctx{params, seed, spec.policy, table};
  ExperimentSummary summary = entry.run(ctx);
  summary.name = entry.info.name;
  summary.status = "ok";
  body << "# headline: " << summary.headline << '\n';
  out << body.str();
  return summary;
}

ExperimentSummary run_experiment(const ExperimentSpec& spec, const std::filesystem::path& output_path) {
  std::ostringstream buffer;
  ExperimentSummary summary = run_experiment(spec, buffer);
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + output_path.string());
  out << buffer.str();
  out.close();
  if (!out) throw std::runtime_error("failed writing " + output_path.string());
  return summary;
}

}  // namespace hokalman
