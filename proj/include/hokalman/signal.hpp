// Response synthesis: closed-form mode sums, the benchmark families used by
// the experiments, uniform measurement noise and offsets.
#pragma once

#include "hokalman/real.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hokalman {

enum class Waveform { cosine, sine };

/// One term c * exp(-d t) * {cos, sin}(w t), evaluated at t = n * T.
struct Mode {
  Real coefficient;
  Real decay_rate;
  Real angular_frequency = 0;
  Waveform waveform = Waveform::cosine;
};

/// A normalized list of modes.
///
/// Construction drops zero terms (including sine terms at w = 0), folds
/// negative frequencies onto w >= 0, merges terms that share
/// (decay_rate, angular_frequency, waveform), and sorts the result, so two
/// permutations of the same input compare equal.
class ModeSum {
 public:
  ModeSum() = default;
  explicit ModeSum(std::vector<Mode> modes);

  const std::vector<Mode>& modes() const { return modes_; }

  /// Minimal order of a linear recurrence generating the sum: one per real
  /// pole, two per oscillatory pole pair.
  std::size_t order() const;

  /// Value at continuous time t.
  Real evaluate(const Real& t) const;

  std::string describe() const;

 private:
  std::vector<Mode> modes_;
};

/// A finite sampled response.
struct Signal {
  std::vector<Real> samples;
  Real sample_period = 1;
  std::string provenance;
  /// Closed form behind the samples, when known and still exact.
  std::optional<ModeSum> model;

  std::size_t size() const { return samples.size(); }
  std::optional<std::size_t> true_order() const;
};

/// Checks the Signal invariants; throws std::invalid_argument.
void validate(const Signal& signal);

struct NoiseSpec {
  Real amplitude = 0;
  std::uint64_t seed = 0;
};

enum class HighOrderFamily { sinusoid, exponential };

std::string to_string(HighOrderFamily family);
HighOrderFamily parse_high_order_family(const std::string& name);

Signal gen_mode_sum(const ModeSum& spec, std::size_t count, const Real& sample_period = 1);

/// y5[n] = (1/7) sum_{k=1..7} (-1)^(k+1) sin(2 pi k / 3) exp(-n / (10 k)).
Signal gen_y5(std::size_t count);

/// The five modes of y5 that survive (k = 3 and k = 6 vanish).
ModeSum y5_modes();

/// Two nearby poles: 0.5 exp(-n/p) + (0.5 + dp) exp(-n/(p + dp)), dp = 2^-q.
ModeSum pole_proximity_modes(const Real& p, int q);

/// y[n] = (1/N0) sum_{k=1..M*N0} f0(n / s_k), with f0 = sin or exp(-x).
Signal gen_high_order(HighOrderFamily f0, std::size_t n0, std::size_t m,
                      const std::vector<Real>& schedule, std::size_t count);

/// The default schedule s_k = scale * k, k = 1..length.
std::vector<Real> linear_schedule(std::size_t length, const Real& scale = 1);

struct NonHomogeneousPair {
  Signal y;
  Signal u;
};

/// Sampled closed-form solution of y'(t) + 0.9 y(t) = exp(-t/8), y(0) = 0.
NonHomogeneousPair gen_nonhomogeneous(std::size_t count, const Real& sample_period = 1);

/// Particular-solution amplitude A = 1 / (0.9 - 1/8).
Real nonhomogeneous_particular_amplitude();

/// Adds i.i.d. Uniform(-a, a) noise from a seeded mt19937_64 stream.
/// The draw sequence is fixed by the standard engine, so results are
/// bit-identical across platforms.
Signal add_noise(const Signal& signal, const NoiseSpec& noise);

Signal add_offset(const Signal& signal, const Real& offset);

/// 20 log10(rms(signal) / rms(noisy - signal)); +inf for identical inputs.
double snr_db(const Signal& signal, const Signal& noisy);

/// Root mean square of the samples.
Real rms(const std::vector<Real>& samples);

/// Uniform half-width that yields the given SNR against `signal`.
Real noise_amplitude_for_snr(const Signal& signal, double snr_db);

/// Exactly representable modes c * r^n with rational c and r, used to feed
/// the exact rank oracle without any float-to-rational conversion.
struct RationalMode {
  mpq_class coefficient;
  mpq_class ratio;
};

struct RationalSignal {
  std::vector<mpq_class> samples;
  std::vector<RationalMode> modes;
  std::size_t true_order = 0;

  /// Evaluates the same modes in working precision (independent of the
  /// exact samples).
  Signal to_signal() const;
};

/// Throws std::invalid_argument for zero ratios; merges equal ratios and
/// drops zero coefficients.
RationalSignal gen_rational_mode_sum(const std::vector<RationalMode>& modes, std::size_t count);

/// Converts an exact rational into the nearest working-precision value.
Real to_real(const mpq_class& value);

}  // namespace hokalman
