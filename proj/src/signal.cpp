#include "hokalman/signal.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace hokalman {

namespace {

bool is_finite(const Real& x) { return boost::multiprecision::isfinite(x); }

std::string short_real(const Real& x) {
  std::ostringstream os;
  os.precision(10);
  os << static_cast<double>(x);
  return os.str();
}

void require_count(std::size_t count) {
  if (count == 0) throw std::invalid_argument("sample count must be at least 1");
}

void require_period(const Real& sample_period) {
  if (!is_finite(sample_period) || sample_period <= 0)
    throw std::invalid_argument("sample_period must be positive and finite");
}

}  // namespace

std::string format_real(const Real& value) {
  if (boost::multiprecision::isnan(value)) return "nan";
  if (boost::multiprecision::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value.str(std::numeric_limits<Real>::max_digits10, std::ios_base::scientific);
}

Real parse_real(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  const auto last = text.find_last_not_of(" \t\r\n");
  if (first == std::string::npos) throw std::invalid_argument("empty numeric field");
  std::string t = text.substr(first, last - first + 1);
  std::string lower = t;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "inf" || lower == "+inf" || lower == "infinity") return infinity();
  if (lower == "-inf" || lower == "-infinity") return -infinity();
  if (lower == "nan") return std::numeric_limits<Real>::quiet_NaN();
  try {
    return Real(t);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + t + "'");
  }
}

ModeSum::ModeSum(std::vector<Mode> modes) {
  for (auto& m : modes) {
    if (!is_finite(m.coefficient) || !is_finite(m.decay_rate) || !is_finite(m.angular_frequency))
      throw std::invalid_argument("mode parameters must be finite");
    if (m.angular_frequency < 0) {
      m.angular_frequency = -m.angular_frequency;
      if (m.waveform == Waveform::sine) m.coefficient = -m.coefficient;
    }
  }
  auto key = [](const Mode& m) {
    return std::make_tuple(m.decay_rate, m.angular_frequency, static_cast<int>(m.waveform));
  };
  std::sort(modes.begin(), modes.end(),
            [&](const Mode& a, const Mode& b) { return key(a) < key(b); });
  for (const auto& m : modes) {
    if (!modes_.empty() && key(modes_.back()) == key(m))
      modes_.back().coefficient += m.coefficient;
    else
      modes_.push_back(m);
  }
  std::erase_if(modes_, [](const Mode& m) {
    return m.coefficient == 0 || (m.waveform == Waveform::sine && m.angular_frequency == 0);
  });
}

std::size_t ModeSum::order() const {
  std::size_t order = 0;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const auto& m = modes_[i];
    // cos and sin terms of one damped oscillation share a pole pair
    if (i > 0 && modes_[i - 1].decay_rate == m.decay_rate &&
        modes_[i - 1].angular_frequency == m.angular_frequency)
      continue;
    order += m.angular_frequency == 0 ? 1 : 2;
  }
  return order;
}

Real ModeSum::evaluate(const Real& t) const {
  Real sum = 0;
  for (const auto& m : modes_) {
    Real envelope = exp(-m.decay_rate * t);
    if (m.angular_frequency == 0) {
      sum += m.coefficient * envelope;
    } else {
      const Real phase = m.angular_frequency * t;
      sum += m.coefficient * envelope * (m.waveform == Waveform::cosine ? cos(phase) : sin(phase));
    }
  }
  return sum;
}

std::string ModeSum::describe() const {
  std::ostringstream os;
  os << "modes[";
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const auto& m = modes_[i];
    if (i) os << ";";
    os << short_real(m.coefficient) << "*exp(-" << short_real(m.decay_rate) << "t)";
    if (m.angular_frequency != 0)
      os << "*" << (m.waveform == Waveform::cosine ? "cos(" : "sin(")
         << short_real(m.angular_frequency) << "t)";
  }
  os << "]";
  return os.str();
}

std::optional<std::size_t> Signal::true_order() const {
  if (!model) return std::nullopt;
  return model->order();
}

void validate(const Signal& signal) {
  if (signal.samples.empty()) throw std::invalid_argument("signal has no samples");
  for (const auto& v : signal.samples)
    if (!is_finite(v)) throw std::invalid_argument("signal contains a non-finite sample");
  require_period(signal.sample_period);
}

std::string to_string(HighOrderFamily family) {
  return family == HighOrderFamily::sinusoid ? "sinusoid" : "exponential";
}

HighOrderFamily parse_high_order_family(const std::string& name) {
  if (name == "sinusoid" || name == "sin") return HighOrderFamily::sinusoid;
  if (name == "exponential" || name == "exp") return HighOrderFamily::exponential;
  throw std::invalid_argument("unknown f0 family '" + name + "' (expected sinusoid or exponential)");
}

Signal gen_mode_sum(const ModeSum& spec, std::size_t count, const Real& sample_period) {
  require_count(count);
  require_period(sample_period);
  Signal out;
  out.sample_period = sample_period;
  out.samples.reserve(count);
  for (std::size_t n = 0; n < count; ++n) out.samples.push_back(spec.evaluate(Real(n) * sample_period));
  out.provenance = "mode_sum " + spec.describe() + " T=" + short_real(sample_period);
  out.model = spec;
  return out;
}

ModeSum y5_modes() {
  // (-1)^(k+1) sin(2 pi k / 3) is +-sqrt(3)/2 for k not divisible by 3
  const Real half_root3 = sqrt(Real(3)) / 2;
  std::vector<Mode> modes;
  for (int k = 1; k <= 7; ++k) {
    if (k % 3 == 0) continue;
    const int sin_sign = (k % 3 == 1) ? 1 : -1;
    const int alt_sign = (k % 2 == 1) ? 1 : -1;
    modes.push_back({Real(sin_sign * alt_sign) * half_root3 / 7, Real(1) / (10 * k)});
  }
  return ModeSum(std::move(modes));
}

Signal gen_y5(std::size_t count) {
  Signal out = gen_mode_sum(y5_modes(), count);
  out.provenance = "y5 (1/7) sum_k (-1)^(k+1) sin(2 pi k/3) exp(-n/(10k)), k=1..7";
  return out;
}

ModeSum pole_proximity_modes(const Real& p, int q) {
  if (!is_finite(p) || p <= 0) throw std::invalid_argument("pole parameter p must be positive");
  const Real dp = ldexp(Real(1), -q);
  return ModeSum({{Real(0.5), 1 / p}, {Real(0.5) + dp, 1 / (p + dp)}});
}

std::vector<Real> linear_schedule(std::size_t length, const Real& scale) {
  std::vector<Real> s;
  s.reserve(length);
  for (std::size_t k = 1; k <= length; ++k) s.push_back(scale * Real(k));
  return s;
}

Signal gen_high_order(HighOrderFamily f0, std::size_t n0, std::size_t m,
                      const std::vector<Real>& schedule, std::size_t count) {
  require_count(count);
  if (n0 == 0 || m == 0) throw std::invalid_argument("N0 and M must be positive");
  const std::size_t terms = m * n0;
  if (schedule.size() < terms)
    throw std::invalid_argument("schedule needs at least M*N0 = " + std::to_string(terms) +
                                " entries, got " + std::to_string(schedule.size()));
  const Real weight = Real(1) / Real(n0);
  std::vector<Mode> modes;
  modes.reserve(terms);
  for (std::size_t k = 0; k < terms; ++k) {
    const Real& s = schedule[k];
    if (!is_finite(s) || s <= 0) throw std::invalid_argument("schedule entries must be positive");
    if (f0 == HighOrderFamily::exponential)
      modes.push_back({weight, 1 / s});
    else
      modes.push_back({weight, Real(0), 1 / s, Waveform::sine});
  }
  Signal out = gen_mode_sum(ModeSum(std::move(modes)), count);
  std::ostringstream os;
  os << "high_order f0=" << to_string(f0) << " N0=" << n0 << " M=" << m << " s=[";
  for (std::size_t k = 0; k < terms; ++k) os << (k ? "," : "") << short_real(schedule[k]);
  os << "]";
  out.provenance = os.str();
  return out;
}

Real nonhomogeneous_particular_amplitude() { return Real(1) / (Real(9) / 10 - Real(1) / 8); }

NonHomogeneousPair gen_nonhomogeneous(std::size_t count, const Real& sample_period) {
  require_count(count);
  require_period(sample_period);
  const Real a = nonhomogeneous_particular_amplitude();
  // y(0) = 0 fixes the homogeneous amplitude to -A
  ModeSum y_modes({{a, Real(1) / 8}, {-a, Real(9) / 10}});
  ModeSum u_modes({{Real(1), Real(1) / 8}});
  NonHomogeneousPair pair{gen_mode_sum(y_modes, count, sample_period),
                          gen_mode_sum(u_modes, count, sample_period)};
  pair.y.provenance = "nonhomogeneous y' + 0.9 y = exp(-t/8), y(0)=0, T=" + short_real(sample_period);
  pair.u.provenance = "nonhomogeneous input u = exp(-t/8), T=" + short_real(sample_period);
  return pair;
}

Signal add_noise(const Signal& signal, const NoiseSpec& noise) {
  if (!is_finite(noise.amplitude) || noise.amplitude < 0)
    throw std::invalid_argument("noise amplitude must be finite and non-negative");
  if (noise.amplitude == 0) return signal;
  Signal out = signal;
  std::mt19937_64 engine(noise.seed);
  for (auto& v : out.samples) {
    // 53 random bits mapped onto [0, 1), then onto [-a, a)
    const double unit = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    v += noise.amplitude * (2 * Real(unit) - 1);
  }
  out.model.reset();
  out.provenance += " + uniform_noise(a=" + short_real(noise.amplitude) +
                    ",seed=" + std::to_string(noise.seed) + ")";
  return out;
}

Signal add_offset(const Signal& signal, const Real& offset) {
  if (!is_finite(offset)) throw std::invalid_argument("offset must be finite");
  Signal out = signal;
  for (auto& v : out.samples) v += offset;
  if (out.model) {
    auto modes = out.model->modes();
    modes.push_back({offset, Real(0)});
    out.model = ModeSum(std::move(modes));
  }
  out.provenance += " + offset(" + short_real(offset) + ")";
  return out;
}

Real rms(const std::vector<Real>& samples) {
  if (samples.empty()) return 0;
  Real sum = 0;
  for (const auto& v : samples) sum += v * v;
  return sqrt(sum / Real(samples.size()));
}

double snr_db(const Signal& signal, const Signal& noisy) {
  if (signal.size() != noisy.size())
    throw std::invalid_argument("snr_db needs equal lengths (" + std::to_string(signal.size()) +
                                " vs " + std::to_string(noisy.size()) + ")");
  std::vector<Real> diff(signal.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = noisy.samples[i] - signal.samples[i];
  const Real noise_rms = rms(diff);
  if (noise_rms == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(20 * log10(rms(signal.samples) / noise_rms));
}

Real noise_amplitude_for_snr(const Signal& signal, double snr) {
  // Uniform(-a, a) has RMS a / sqrt(3)
  return sqrt(Real(3)) * rms(signal.samples) * pow(Real(10), Real(-snr) / 20);
}

Real to_real(const mpq_class& value) {
  return Real(value.get_num().get_str()) / Real(value.get_den().get_str());
}

RationalSignal gen_rational_mode_sum(const std::vector<RationalMode>& modes, std::size_t count) {
  require_count(count);
  RationalSignal out;
  for (const auto& m : modes) {
    if (m.ratio == 0) throw std::invalid_argument("rational mode ratio must be nonzero");
    auto it = std::find_if(out.modes.begin(), out.modes.end(),
                           [&](const RationalMode& x) { return x.ratio == m.ratio; });
    if (it == out.modes.end())
      out.modes.push_back(m);
    else
      it->coefficient += m.coefficient;
  }
  std::erase_if(out.modes, [](const RationalMode& m) { return m.coefficient == 0; });
  out.true_order = out.modes.size();
  out.samples.assign(count, mpq_class(0));
  for (const auto& m : out.modes) {
    mpq_class term = m.coefficient;
    for (std::size_t n = 0; n < count; ++n) {
      out.samples[n] += term;
      term *= m.ratio;
    }
  }
  return out;
}

Signal RationalSignal::to_signal() const {
  Signal out;
  out.samples.assign(samples.size(), Real(0));
  for (const auto& m : modes) {
    const Real c = to_real(m.coefficient);
    const Real r = to_real(m.ratio);
    for (std::size_t n = 0; n < samples.size(); ++n) out.samples[n] += c * pow(r, static_cast<int>(n));
  }
  std::ostringstream os;
  os << "rational_mode_sum[";
  for (std::size_t i = 0; i < modes.size(); ++i)
    os << (i ? ";" : "") << modes[i].coefficient.get_str() << "*(" << modes[i].ratio.get_str() << ")^n";
  os << "]";
  out.provenance = os.str();
  return out;
}

}  // namespace hokalman
