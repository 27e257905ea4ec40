#include "hokalman/cli.hpp"

#include "hokalman/estimators.hpp"
#include "hokalman/experiments.hpp"
#include "hokalman/io.hpp"
#include "hokalman/signal.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace hokalman {

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::string policy_name = "relative";
  std::optional<double> tol;
  std::string out_path;
  bool verbose = false;
};

struct GenerateArgs {
  std::string family;
  std::size_t count = 40;
  std::string sample_period = "1";
  std::vector<std::string> modes;
  std::string f0 = "sin";
  std::size_t n0 = 50;
  std::size_t m = 1;
  std::string s_scale = "1";
  std::string noise_amplitude = "0";
  std::optional<double> snr_db;
  std::string offset = "0";
};

struct RankArgs {
  std::string input;
  std::size_t n = 8;
};

struct EstimateArgs {
  std::string input;
  std::string method;
  std::size_t n = 8;
  std::size_t p_max = 10;
  std::string m_range = "2:8";
};

struct ExperimentArgs {
  std::string name;
};

const std::vector<std::string> kFamilies = {"mode_sum", "y5", "high_order", "nonhomogeneous"};

Real real_arg(const std::string& flag, const std::string& text) {
  try {
    const Real v = parse_real(text);
    if (boost::multiprecision::isfinite(v)) return v;
  } catch (const std::invalid_argument&) {
  }
  throw UsageError(flag + ": not a finite number: '" + text + "'");
}

// "c,d[,w[,sin|cos]]"
Mode parse_mode(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() < 2 || parts.size() > 4)
    throw UsageError("--mode expects c,d[,w[,sin|cos]], got '" + text + "'");
  Mode mode;
  mode.coefficient = real_arg("--mode", parts[0]);
  mode.decay_rate = real_arg("--mode", parts[1]);
  if (parts.size() > 2) mode.angular_frequency = real_arg("--mode", parts[2]);
  if (parts.size() > 3) {
    if (parts[3] == "sin")
      mode.waveform = Waveform::sine;
    else if (parts[3] != "cos")
      throw UsageError("--mode waveform must be sin or cos, got '" + parts[3] + "'");
  }
  return mode;
}

RankPolicy resolve_policy(const GlobalFlags& flags) {
  try {
    return parse_policy(flags.policy_name, flags.tol);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// Writes through a buffer so a failed computation never leaves a partial file.
void emit(const GlobalFlags& flags, std::ostream& out, const std::string& body) {
  if (flags.out_path.empty()) {
    out << body;
    return;
  }
  std::ofstream file(flags.out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + flags.out_path);
  file << body;
  file.close();
  if (!file) throw std::runtime_error("failed writing " + flags.out_path);
}

void report_headline(const GlobalFlags& flags, std::ostream& out, std::ostream& err,
                     const std::string& headline) {
  (flags.out_path.empty() ? err : out) << headline << '\n';
}

std::string analysis_header(const std::string& command, const std::string& input, const RankPolicy& policy) {
  std::ostringstream h;
  h << "# command: " << command << '\n'
    << "# artifact_version: " << HOKALMAN_VERSION << '\n'
    << "# input: " << input << '\n'
    << "# policy: " << policy.describe() << '\n';
  return h.str();
}

int cmd_generate(const GenerateArgs& a, const GlobalFlags& flags, std::ostream& out, std::ostream& err) {
  if (std::find(kFamilies.begin(), kFamilies.end(), a.family) == kFamilies.end())
    throw UsageError("unknown family '" + a.family + "' (expected mode_sum, y5, high_order or nonhomogeneous)");
  if (a.count == 0) throw UsageError("--count must be positive");
  const Real period = real_arg("--sample-period", a.sample_period);
  const std::uint64_t seed = flags.seed.value_or(0);

  Signal y;
  std::optional<Signal> u;
  if (a.family == "mode_sum") {
    if (a.modes.empty()) throw UsageError("mode_sum needs at least one --mode c,d[,w[,sin|cos]]");
    std::vector<Mode> modes;
    for (const auto& m : a.modes) modes.push_back(parse_mode(m));
    y = gen_mode_sum(ModeSum(modes), a.count, period);
  } else if (a.family == "y5") {
    y = gen_y5(a.count);
  } else if (a.family == "high_order") {
    HighOrderFamily f0;
    try {
      f0 = parse_high_order_family(a.f0);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    y = gen_high_order(f0, a.n0, a.m, linear_schedule(a.n0 * a.m, real_arg("--s-scale", a.s_scale)), a.count);
  } else {
    auto pair = gen_nonhomogeneous(a.count, period);
    y = std::move(pair.y);
    u = std::move(pair.u);
  }

  const Real offset = real_arg("--offset", a.offset);
  if (offset != 0) y = add_offset(y, offset);
  Real amplitude = real_arg("--noise-amplitude", a.noise_amplitude);
  if (a.snr_db) amplitude = noise_amplitude_for_snr(y, *a.snr_db);
  if (amplitude < 0) throw UsageError("--noise-amplitude must be non-negative");
  if (amplitude > 0) y = add_noise(y, {amplitude, seed});

  std::ostringstream body;
  if (u)
    io::write_signal_pair_csv(body, y, *u);
  else
    io::write_signal_csv(body, y);
  emit(flags, out, body.str());
  if (!flags.out_path.empty()) io::write_provenance(flags.out_path, y);
  if (flags.verbose) err << "generated " << y.size() << " samples: " << y.provenance << '\n';
  return 0;
}

int cmd_rank(const RankArgs& a, const GlobalFlags& flags, std::ostream& out, std::ostream& err) {
  const RankPolicy policy = resolve_policy(flags);
  const Signal signal = io::read_signal_file(a.input).y;
  const auto result = hokalman_order(signal, a.n, policy);
  std::ostringstream body;
  body << analysis_header("rank", a.input, policy);
  io::write_sweep_csv(body, result.sweep);
  body << "# headline: " << result.estimate.headline() << '\n';
  emit(flags, out, body.str());
  if (flags.verbose) err << result.estimate.diagnostics << '\n';
  report_headline(flags, out, err, result.estimate.headline());
  return 0;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon != std::string::npos) {
      std::size_t used_lo = 0, used_hi = 0;
      const std::string lo_text = text.substr(0, colon), hi_text = text.substr(colon + 1);
      const unsigned long lo = std::stoul(lo_text, &used_lo);
      const unsigned long hi = std::stoul(hi_text, &used_hi);
      if (used_lo == lo_text.size() && used_hi == hi_text.size() && lo <= hi) return {lo, hi};
    }
  } catch (const std::exception&) {
  }
  throw UsageError("--m-range expects lo:hi with lo <= hi, got '" + text + "'");
}

int cmd_estimate(const EstimateArgs& a, const GlobalFlags& flags, std::ostream& out, std::ostream& err) {
  EstimatorMethod method;
  try {
    method = parse_method(a.method);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const RankPolicy policy = resolve_policy(flags);
  const Signal signal = io::read_signal_file(a.input).y;

  std::ostringstream body;
  body << analysis_header("estimate " + to_string(method), a.input, policy);
  OrderEstimate estimate;
  switch (method) {
    case EstimatorMethod::hokalman_rank: {
      const auto r = hokalman_order(signal, a.n, policy);
      io::write_sweep_csv(body, r.sweep);
      estimate = r.estimate;
      break;
    }
    case EstimatorMethod::aic: {
      const auto r = aic_order(signal, a.p_max);
      io::write_aic_csv(body, r.report);
      estimate = r.estimate;
      break;
    }
    case EstimatorMethod::covariance_determinant: {
      const auto [lo, hi] = parse_range(a.m_range);
      const auto report = covariance_determinants(signal, lo, hi);
      io::write_covdet_csv(body, report);
      estimate = covdet_order(report);
      break;
    }
  }
  body << "# headline: " << estimate.headline() << '\n';
  emit(flags, out, body.str());
  if (flags.verbose && !estimate.diagnostics.empty()) err << estimate.diagnostics << '\n';
  report_headline(flags, out, err, estimate.headline());
  return 0;
}

std::string registry_listing() {
  std::ostringstream os;
  for (const auto& info : list_experiments()) os << "  " << info.name << "  " << info.description << '\n';
  return os.str();
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Maps "--p-max 12" / "--p_max=12" onto the registered parameter names.
std::map<std::string, std::string> parse_overrides(const ExperimentInfo& info,
                                                   const std::vector<std::string>& extras) {
  std::map<std::string, std::string> overrides;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.size() < 3) throw UsageError("unexpected argument '" + arg + "'");
    std::string key = arg.substr(2), value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) throw UsageError("override " + arg + " needs a value");
      value = extras[++i];
    }
    std::replace(key.begin(), key.end(), '-', '_');
    if (!info.defaults.count(key))
      for (const auto& [name, v] : info.defaults)
        if (lower(name) == lower(key)) key = name;
    if (!info.defaults.count(key)) {
      std::string known;
      for (const auto& [name, v] : info.defaults) known += (known.empty() ? "" : ", ") + name;
      throw UsageError("experiment '" + info.name + "' has no parameter '" + key + "' (parameters: " + known + ")");
    }
    overrides[key] = value;
  }
  return overrides;
}

int cmd_experiment(const ExperimentArgs& a, const std::vector<std::string>& extras, const GlobalFlags& flags,
                   std::ostream& out, std::ostream& err) {
  const ExperimentInfo* info = nullptr;
  try {
    info = &find_experiment(a.name);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\nregistered experiments:\n" << registry_listing();
    return 2;
  }
  ExperimentSpec spec;
  spec.name = info->name;
  spec.parameters = parse_overrides(*info, extras);
  spec.seed = flags.seed;
  spec.policy = resolve_policy(flags);
  const std::string path = flags.out_path.empty() ? info->name + ".csv" : flags.out_path;
  const ExperimentSummary summary = run_experiment(spec, std::filesystem::path(path));
  if (flags.verbose) err << "wrote " << path << '\n';
  out << summary.line() << '\n';
  return 0;
}

int cmd_list(std::ostream& out) {
  for (const auto& info : list_experiments()) {
    out << info.name << "  " << info.description << "\n   ";
    for (const auto& [k, v] : info.defaults) out << ' ' << k << '=' << v;
    out << "  seed=" << info.default_seed << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model-order estimation from Hankel matrix rank"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer("Experiments:\n" + registry_listing());

  GlobalFlags flags;
  const auto add_globals = [&flags](CLI::App* target) {
    target->add_option("--seed", flags.seed, "Seed for noise generation and experiments");
    target->add_option("--policy", flags.policy_name, "Rank policy: relative, absolute or gap")
        ->check(CLI::IsMember({"relative", "absolute", "gap"}))
        ->capture_default_str();
    target->add_option("--tol", flags.tol, "Policy parameter (relative tau, absolute tau, or gap ratio)");
    target->add_option("--out", flags.out_path, "Output path (default: stdout; experiments: <name>.csv)");
    target->add_flag("-v,--verbose", flags.verbose, "Print diagnostics to stderr");
  };
  add_globals(&app);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic signal CSV");
  generate->add_option("family", gen.family, "mode_sum, y5, high_order or nonhomogeneous")->required();
  generate->add_option("--count", gen.count, "Number of samples")->capture_default_str();
  generate->add_option("--sample-period", gen.sample_period, "Sample period T")->capture_default_str();
  generate->add_option("--mode", gen.modes, "mode_sum term c,d[,w[,sin|cos]]; repeatable");
  generate->add_option("--f0", gen.f0, "high_order base function: sin or exp")->capture_default_str();
  generate->add_option("--N0", gen.n0, "high_order normalisation N0")->capture_default_str();
  generate->add_option("--M", gen.m, "high_order multiplier M")->capture_default_str();
  generate->add_option("--s-scale", gen.s_scale, "high_order schedule s_k = scale * k")->capture_default_str();
  generate->add_option("--noise-amplitude", gen.noise_amplitude, "Uniform(-a, a) noise amplitude")
      ->capture_default_str();
  generate->add_option("--snr-db", gen.snr_db, "Noise level as SNR in dB (overrides amplitude)");
  generate->add_option("--offset", gen.offset, "Constant offset added before noise")->capture_default_str();

  RankArgs rank_args;
  auto* rank = app.add_subcommand("rank", "Hankel rank sweep n=2..N with an order headline");
  rank->add_option("input", rank_args.input, "Signal CSV")->required();
  rank->add_option("--n", rank_args.n, "Largest Hankel dimension")->capture_default_str();

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Order estimate by hokalman, aic or covdet");
  estimate->add_option("input", est.input, "Signal CSV")->required();
  estimate->add_option("--method", est.method, "hokalman, aic or covdet")->required();
  estimate->add_option("--n", est.n, "hokalman: largest Hankel dimension")->capture_default_str();
  estimate->add_option("--p-max", est.p_max, "aic: largest AR order")->capture_default_str();
  estimate->add_option("--m-range", est.m_range, "covdet: lo:hi")->capture_default_str();

  ExperimentArgs exp_args;
  auto* experiment = app.add_subcommand("experiment", "Run a registered experiment; --key value overrides parameters");
  experiment->add_option("name", exp_args.name, "Experiment name")->required();
  // Unknown flags here are parameter overrides, so nothing falls through to
  // the top level; the global flags are repeated instead.
  experiment->fallthrough(false);
  experiment->allow_extras();
  add_globals(experiment);
  experiment->footer("Experiments:\n" + registry_listing());

  auto* list = app.add_subcommand("list", "List registered experiments and their defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*generate) return cmd_generate(gen, flags, out, err);
    if (*rank) return cmd_rank(rank_args, flags, out, err);
    if (*estimate) return cmd_estimate(est, flags, out, err);
    if (*experiment) return cmd_experiment(exp_args, experiment->remaining(), flags, out, err);
    if (*list) return cmd_list(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace hokalman
