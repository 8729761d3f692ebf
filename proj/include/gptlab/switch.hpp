#pragma once

// Quantum-switch correlations p(a1,a2,b,c|x1,x2,y,z) = Tr[K (Phi (x) |t><t|) K^dag]
// for an arbitrary (possibly non-positive) shared control/B state.
//
// Tensor-factor order throughout is C (x) B (x) T.

#include "gptlab/hermitian.hpp"
#include "gptlab/tolerances.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gptlab {

/// One measure-and-prepare lab inside the switch: bra <m[a]| on the incoming
/// target, then |p[x]> is sent on.
struct LabAOp {
  std::array<KetVector, 2> measure;
  std::array<KetVector, 2> prepare;

  void validate(double tol = kDefaultTolerance) const {
    for (const auto& k : measure)
      if (k.dim() != 2 || !k.is_normalized(tol)) throw std::invalid_argument("lab A: measurement kets must be unit qubit kets");
    if (std::abs(measure[0].braket(measure[1])) > tol)
      throw std::invalid_argument("lab A: measurement kets are not orthogonal");
    for (const auto& k : prepare)
      if (k.dim() != 2 || !k.is_normalized(tol)) throw std::invalid_argument("lab A: prepared kets must be unit qubit kets");
  }
};

/// Binary-outcome measurement for each binary setting. Outcome effects are
/// stored as operators together with their spectral decomposition, so rank-1
/// projective measurements and mixtures of them go through the same K formula.
class LabMeasurement {
 public:
  struct Outcome {
    HermitianOperator effect;
    std::vector<std::pair<double, KetVector>> spectral;  ///< nonzero-weight eigenpairs
  };
  using Setting = std::array<Outcome, 2>;

  LabMeasurement() = default;

  /// Rank-1 projective measurements from orthonormal ket pairs (outcome 0 first).
  static LabMeasurement from_kets(const std::vector<std::array<KetVector, 2>>& per_setting,
                                  double tol = kDefaultTolerance) {
    std::vector<std::array<HermitianOperator, 2>> effects;
    for (const auto& pair : per_setting) {
      for (const auto& k : pair)
        if (k.dim() != 2 || !k.is_normalized(tol)) throw std::invalid_argument("measurement kets must be unit qubit kets");
      if (std::abs(pair[0].braket(pair[1])) > tol) throw std::invalid_argument("measurement kets are not orthogonal");
      effects.push_back({HermitianOperator::projector(pair[0]), HermitianOperator::projector(pair[1])});
    }
    return from_effects(effects, tol);
  }

  /// General binary POVMs; each pair must be positive and sum to the identity.
  static LabMeasurement from_effects(const std::vector<std::array<HermitianOperator, 2>>& per_setting,
                                    double tol = kDefaultTolerance) {
    if (per_setting.size() != 2) throw std::invalid_argument("measurement must define exactly two settings");
    LabMeasurement m;
    for (const auto& pair : per_setting) {
      if (pair[0].dim() != 2 || pair[1].dim() != 2) throw std::invalid_argument("measurement effects must be 2x2");
      if ((pair[0] + pair[1]).max_abs_diff(HermitianOperator::identity(2)) > tol)
        throw std::invalid_argument("measurement effects do not sum to the identity");
      Setting s;
      for (int o = 0; o < 2; ++o) {
        s[o].effect = pair[o];
        for (auto& [w, ket] : eigensystem(pair[o])) {
          if (w < -tol) throw std::invalid_argument("measurement effect is not positive");
          if (w > 1e-14) s[o].spectral.emplace_back(w, std::move(ket));
        }
      }
      m.settings_.push_back(std::move(s));
    }
    return m;
  }

  /// Projectors onto the +1 (outcome 0) and -1 (outcome 1) eigenvectors of n.sigma, per setting.
  static LabMeasurement from_directions(const std::vector<std::array<double, 3>>& dirs) {
    std::vector<std::array<KetVector, 2>> kets;
    for (const auto& n : dirs) {
      const auto es = eigensystem(observable(n[0], n[1], n[2]));
      kets.push_back({es[0].second, es[1].second});
    }
    return from_kets(kets);
  }

  std::size_t settings() const { return settings_.size(); }
  const Outcome& outcome(int setting, int result) const { return settings_.at(setting).at(result); }
  const HermitianOperator& effect(int setting, int result) const { return outcome(setting, result).effect; }

  /// The ket |v> if the effect is the rank-1 projector |v><v|.
  std::optional<KetVector> ket(int setting, int result, double tol = kDefaultTolerance) const {
    const auto& o = outcome(setting, result);
    if (o.spectral.size() != 1 || std::abs(o.spectral[0].first - 1.0) > tol) return std::nullopt;
    return o.spectral[0].second;
  }

 private:
  std::vector<Setting> settings_;
};

/// (x1, x2, y, z, a1, a2, b, c) with every entry in {0, 1}.
struct SwitchEvent {
  int a1 = 0, a2 = 0, b = 0, c = 0;
  int x1 = 0, x2 = 0, y = 0, z = 0;
};

inline constexpr int table_index(int a1, int a2, int b, int c, int x1, int x2, int y, int z) {
  return ((((x1 * 2 + x2) * 2 + y) * 2 + z) * 16) + (((a1 * 2 + a2) * 2 + b) * 2 + c);
}
inline constexpr int table_index(const SwitchEvent& e) { return table_index(e.a1, e.a2, e.b, e.c, e.x1, e.x2, e.y, e.z); }

/// Calls f(event) for all 256 events in table-index order.
template <typename F>
void for_each_event(F&& f) {
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z)
          for (int a1 = 0; a1 < 2; ++a1)
            for (int a2 = 0; a2 < 2; ++a2)
              for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) f(SwitchEvent{a1, a2, b, c, x1, x2, y, z});
}

/// Classical relabelling of lab C's announced outcome: c = map(x1,x2,y,z,a1,a2,b,c').
struct PostProcess {
  std::string name;
  std::array<std::uint8_t, 256> map{};

  /// c := x2 a1 + (x2 xor 1) c'
  static PostProcess announce_a1_when_x2() {
    PostProcess p;
    p.name = "x2a1+(x2^1)c";
    for_each_event([&](const SwitchEvent& e) {
      p.map[table_index(e)] = static_cast<std::uint8_t>(e.x2 == 1 ? e.a1 : e.c);
    });
    return p;
  }

  static PostProcess from_table(std::string name, const std::vector<int>& values) {
    if (values.size() != 256) throw std::invalid_argument("post-process table must have 256 entries");
    PostProcess p;
    p.name = std::move(name);
    for (std::size_t i = 0; i < 256; ++i) {
      if (values[i] != 0 && values[i] != 1) throw std::invalid_argument("post-process values must be 0 or 1");
      p.map[i] = static_cast<std::uint8_t>(values[i]);
    }
    return p;
  }
};

struct SwitchScenario {
  std::string name;
  std::array<KetVector, 2> control_basis;  ///< |pi0> puts A1 before A2, |pi1> the reverse
  HermitianOperator shared_state;          ///< 4x4 on C (x) B, unit trace, possibly non-positive
  KetVector target_init;
  LabAOp labA1;
  LabAOp labA2;
  LabMeasurement labC;  ///< setting z
  LabMeasurement labB;  ///< setting y
  std::optional<PostProcess> post_process;
  /// Declared local state spaces for C and B (labels), checked by callers that know the spaces.
  std::optional<std::pair<std::string, std::string>> local_spaces;

  void validate(double tol = kDefaultTolerance) const {
    for (const auto& k : control_basis)
      if (k.dim() != 2 || !k.is_normalized(tol)) throw std::invalid_argument("control basis kets must be unit qubit kets");
    if (std::abs(control_basis[0].braket(control_basis[1])) > tol)
      throw std::invalid_argument("control basis is not orthogonal");
    if (shared_state.dim() != 4) throw std::invalid_argument("shared state must be 4x4");
    if (std::abs(shared_state.trace() - 1.0) > tol) throw std::invalid_argument("shared state is not unit trace");
    if (target_init.dim() != 2 || !target_init.is_normalized(tol))
      throw std::invalid_argument("target state must be a unit qubit ket");
    labA1.validate(tol);
    labA2.validate(tol);
    if (labC.settings() != 2 || labB.settings() != 2)
      throw std::invalid_argument("labs C and B need two measurement settings each");
  }
};

/// Table p(a1,a2,b,c | x1,x2,y,z) over binary variables.
class ConditionalDistribution {
 public:
  double at(int a1, int a2, int b, int c, int x1, int x2, int y, int z) const {
    return p_[table_index(a1, a2, b, c, x1, x2, y, z)];
  }
  double at(const SwitchEvent& e) const { return p_[table_index(e)]; }
  double& operator[](int index) { return p_[index]; }
  double operator[](int index) const { return p_[index]; }
  const std::array<double, 256>& values() const { return p_; }

  /// Entries in [-tol, 0) that were set to zero.
  int clamped = 0;

  /// Largest |sum over outcomes - 1| across settings.
  double normalization_error() const {
    double worst = 0.0;
    for (int s = 0; s < 16; ++s) {
      double sum = 0.0;
      for (int o = 0; o < 16; ++o) sum += p_[s * 16 + o];
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
  }

  struct SignallingReport {
    double b_deviation = 0.0;    ///< max change of p(b|y) over (x1,x2,z)
    double acc_deviation = 0.0;  ///< max change of p(a1,a2,c|x1,x2,z) over y
    std::string worst_b;
    std::string worst_acc;
  };

  SignallingReport signalling() const {
    SignallingReport r;
    auto settings = [](int x1, int x2, int y, int z) {
      std::ostringstream os;
      os << "(x1,x2,y,z)=(" << x1 << x2 << y << z << ")";
      return os.str();
    };
    for (int y = 0; y < 2; ++y)
      for (int b = 0; b < 2; ++b) {
        const double ref = marginal_b(b, 0, 0, y, 0);
        for (int x1 = 0; x1 < 2; ++x1)
          for (int x2 = 0; x2 < 2; ++x2)
            for (int z = 0; z < 2; ++z) {
              const double d = std::abs(marginal_b(b, x1, x2, y, z) - ref);
              if (d > r.b_deviation) {
                r.b_deviation = d;
                r.worst_b = "p(b=" + std::to_string(b) + "|" + settings(x1, x2, y, z) + ") vs " + settings(0, 0, y, 0);
              }
            }
      }
    for (int x1 = 0; x1 < 2; ++x1)
      for (int x2 = 0; x2 < 2; ++x2)
        for (int z = 0; z < 2; ++z)
          for (int a1 = 0; a1 < 2; ++a1)
            for (int a2 = 0; a2 < 2; ++a2)
              for (int c = 0; c < 2; ++c) {
                const double d = std::abs(marginal_acc(a1, a2, c, x1, x2, 0, z) - marginal_acc(a1, a2, c, x1, x2, 1, z));
                if (d > r.acc_deviation) {
                  r.acc_deviation = d;
                  r.worst_acc = "p(a1a2c=" + std::to_string(a1) + std::to_string(a2) + std::to_string(c) + "|" +
                                settings(x1, x2, 0, z) + ") vs y=1";
                }
              }
    return r;
  }

  /// Throws InvariantViolation naming the offending entry or marginal pair.
  void check_invariants(double tol = kDefaultTolerance) const {
    for (int i = 0; i < 256; ++i)
      if (p_[i] < -tol) throw InvariantViolation("negative probability at table index " + std::to_string(i));
    if (const double n = normalization_error(); n > tol)
      throw InvariantViolation("distribution is not normalized (max error " + std::to_string(n) + ")");
    const auto s = signalling();
    if (s.b_deviation > tol) throw InvariantViolation("signalling to b: " + s.worst_b);
    if (s.acc_deviation > tol) throw InvariantViolation("signalling to (a1,a2,c): " + s.worst_acc);
  }

 private:
  double marginal_b(int b, int x1, int x2, int y, int z) const {
    double s = 0.0;
    for (int a1 = 0; a1 < 2; ++a1)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int c = 0; c < 2; ++c) s += at(a1, a2, b, c, x1, x2, y, z);
    return s;
  }
  double marginal_acc(int a1, int a2, int c, int x1, int x2, int y, int z) const {
    return at(a1, a2, 0, c, x1, x2, y, z) + at(a1, a2, 1, c, x1, x2, y, z);
  }

  std::array<double, 256> p_{};
};

namespace detail {

/// Target-system operators for the two causal orders at fixed (a1,a2,x1,x2):
/// order 0: |p2[x2]><m2[a2]|p1[x1]><m1[a1]|, order 1: |p1[x1]><m1[a1]|p2[x2]><m2[a2]|.
inline std::array<Eigen::Matrix2cd, 2> target_maps(const SwitchScenario& scn, int a1, int a2, int x1, int x2) {
  const auto& m1 = scn.labA1.measure[a1].amplitudes();
  const auto& m2 = scn.labA2.measure[a2].amplitudes();
  const auto& p1 = scn.labA1.prepare[x1].amplitudes();
  const auto& p2 = scn.labA2.prepare[x2].amplitudes();
  const Complex inner0 = m2.dot(p1);  // <m2|p1>
  const Complex inner1 = m1.dot(p2);  // <m1|p2>
  return {Eigen::Matrix2cd(inner0 * p2 * m1.adjoint()), Eigen::Matrix2cd(inner1 * p1 * m2.adjoint())};
}

/// K = sum_k <psi|pi_k> <pi_k|^C (x) <phi|^B (x) T_k, a 2x8 map from C (x) B (x) T to T.
inline Eigen::MatrixXcd k_operator(const SwitchScenario& scn, const std::array<Eigen::Matrix2cd, 2>& t,
                                   const KetVector& psi, const KetVector& phi) {
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(2, 8);
  for (int order = 0; order < 2; ++order) {
    const auto& pi = scn.control_basis[order].amplitudes();
    const Complex w = psi.amplitudes().dot(pi);  // <psi|pi_k>
    if (w == Complex(0.0)) continue;
    const Eigen::MatrixXcd cb = kron(Eigen::MatrixXcd(pi.adjoint()), Eigen::MatrixXcd(phi.amplitudes().adjoint()));
    k += w * kron(cb, Eigen::MatrixXcd(t[order]));
  }
  return k;
}

inline Eigen::MatrixXcd input_state(const SwitchScenario& scn) {
  return kron(scn.shared_state.matrix(),
              Eigen::MatrixXcd(scn.target_init.amplitudes() * scn.target_init.amplitudes().adjoint()));
}

}  // namespace detail

/// The 2x8 operator K for one event. Requires the C and B effects of that
/// event to be rank-1 projectors.
inline Eigen::MatrixXcd build_K(const SwitchScenario& scn, const SwitchEvent& ev) {
  const auto psi = scn.labC.ket(ev.z, ev.c);
  const auto phi = scn.labB.ket(ev.y, ev.b);
  if (!psi || !phi) throw std::invalid_argument("build_K: C and B effects must be rank-1 projectors");
  return detail::k_operator(scn, detail::target_maps(scn, ev.a1, ev.a2, ev.x1, ev.x2), *psi, *phi);
}

/// Tr[K rho K^dag] summed over the spectral terms of the C and B effects, without
/// clamping or post-processing.
inline double switch_probability(const SwitchScenario& scn, const SwitchEvent& ev, const Eigen::MatrixXcd& rho) {
  const auto t = detail::target_maps(scn, ev.a1, ev.a2, ev.x1, ev.x2);
  double p = 0.0;
  for (const auto& [wc, psi] : scn.labC.outcome(ev.z, ev.c).spectral)
    for (const auto& [wb, phi] : scn.labB.outcome(ev.y, ev.b).spectral) {
      const Eigen::MatrixXcd k = detail::k_operator(scn, t, psi, phi);
      p += wc * wb * (k * rho * k.adjoint()).trace().real();
    }
  return p;
}

namespace detail {

/// Fills a table from `prob(event)`, clamping tiny negatives, then applies the
/// classical relabelling of c if one is given.
template <typename Prob>
ConditionalDistribution assemble(Prob&& prob, const PostProcess* post, double tol, const std::string& name) {
  ConditionalDistribution raw;
  for_each_event([&](const SwitchEvent& ev) {
    double p = prob(ev);
    if (p < 0.0) {
      if (p < -tol)
        throw InvariantViolation("scenario '" + name + "' gives negative probability " + std::to_string(p) +
                                 " at table index " + std::to_string(table_index(ev)));
      p = 0.0;
      ++raw.clamped;
    }
    raw[table_index(ev)] = p;
  });
  if (post == nullptr) return raw;
  ConditionalDistribution out;
  out.clamped = raw.clamped;
  for_each_event([&](const SwitchEvent& ev) {
    SwitchEvent relabelled = ev;
    relabelled.c = post->map[table_index(ev)];
    out[table_index(relabelled)] += raw[table_index(ev)];
  });
  return out;
}

}  // namespace detail

/// Full table. Entries in [-tol, 0) are clamped to 0 (counted in `clamped`);
/// anything below -tol throws InvariantViolation. The post-processing map, if
/// any, is applied after the table is assembled.
inline ConditionalDistribution switch_distribution(const SwitchScenario& scn, double tol = kDefaultTolerance,
                                                   bool apply_post_process = true) {
  scn.validate(tol);
  const Eigen::MatrixXcd rho = detail::input_state(scn);
  const PostProcess* post = apply_post_process && scn.post_process ? &*scn.post_process : nullptr;
  return detail::assemble([&](const SwitchEvent& ev) { return switch_probability(scn, ev, rho); }, post, tol,
                          scn.name);
}

/// Effects of one binary-outcome lab, indexed [setting][outcome].
using EffectTable = std::array<std::array<HermitianOperator, 2>, 2>;

inline EffectTable effect_table(const LabMeasurement& m) {
  return {{{m.effect(0, 0), m.effect(0, 1)}, {m.effect(1, 0), m.effect(1, 1)}}};
}

/// Everything in the switch except labs C and B, reduced to one 4x4 response
/// operator per (a1,a2,x1,x2):
///   R = sum_{k,l} Tr[T_k tau T_l^dag] (P_k (x) 1) Phi (P_l (x) 1),  P_k = |pi_k><pi_k|,
/// so that p(a1,a2,b,c|x1,x2,y,z) = Tr[(E_{c|z} (x) E_{b|y}) R]. Used to sweep
/// many C/B strategies against a fixed wiring.
class SwitchKernel {
 public:
  explicit SwitchKernel(const SwitchScenario& scn) : name_(scn.name) {
    const Eigen::Matrix2cd tau = scn.target_init.amplitudes() * scn.target_init.amplitudes().adjoint();
    std::array<Eigen::Matrix4cd, 2> lift;
    for (int k = 0; k < 2; ++k) {
      const auto& pi = scn.control_basis[k].amplitudes();
      lift[k] = kron(Eigen::MatrixXcd(pi * pi.adjoint()), Eigen::MatrixXcd::Identity(2, 2));
    }
    const Eigen::Matrix4cd& phi = scn.shared_state.matrix();
    for (int a1 = 0; a1 < 2; ++a1)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int x1 = 0; x1 < 2; ++x1)
          for (int x2 = 0; x2 < 2; ++x2) {
            const auto t = detail::target_maps(scn, a1, a2, x1, x2);
            Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
            for (int k = 0; k < 2; ++k)
              for (int l = 0; l < 2; ++l) r += (t[k] * tau * t[l].adjoint()).trace() * (lift[k] * phi * lift[l]);
            response_[slot(a1, a2, x1, x2)] = r;
          }
  }

  const Eigen::Matrix4cd& response(int a1, int a2, int x1, int x2) const { return response_[slot(a1, a2, x1, x2)]; }

  double probability(const SwitchEvent& ev, const EffectTable& c, const EffectTable& b) const {
    const Eigen::MatrixXcd joint = kron(c[ev.z][ev.c].matrix(), b[ev.y][ev.b].matrix());
    const auto& r = response(ev.a1, ev.a2, ev.x1, ev.x2);
    return (joint.transpose().array() * r.array()).sum().real();
  }

  ConditionalDistribution distribution(const EffectTable& c, const EffectTable& b, const PostProcess* post = nullptr,
                                       double tol = kDefaultTolerance) const {
    return detail::assemble([&](const SwitchEvent& ev) { return probability(ev, c, b); }, post, tol, name_);
  }

 private:
  static int slot(int a1, int a2, int x1, int x2) { return ((a1 * 2 + a2) * 2 + x1) * 2 + x2; }

  std::string name_;
  std::array<Eigen::Matrix4cd, 16> response_;
};

/// Two-party table p(c,b|z,y), stored as the 4x4 array [2z+c][2y+b].
struct BellTable {
  std::array<std::array<double, 4>, 4> p{};
  double at(int c, int b, int z, int y) const { return p[2 * z + c][2 * y + b]; }
};

inline BellTable bell_distribution(const HermitianOperator& shared, const LabMeasurement& meas_c,
                                   const LabMeasurement& meas_b, double tol = kDefaultTolerance) {
  if (shared.dim() != 4) throw std::invalid_argument("bell_distribution: shared state must be 4x4");
  if (std::abs(shared.trace() - 1.0) > tol) throw std::invalid_argument("bell_distribution: shared state is not unit trace");
  BellTable t;
  for (int z = 0; z < 2; ++z)
    for (int y = 0; y < 2; ++y)
      for (int c = 0; c < 2; ++c)
        for (int b = 0; b < 2; ++b) {
          double v = hs_inner(tensor(meas_c.effect(z, c), meas_b.effect(y, b)), shared);
          if (v < -tol) throw InvariantViolation("bell_distribution: negative probability " + std::to_string(v));
          t.p[2 * z + c][2 * y + b] = std::max(v, 0.0);
        }
  return t;
}

/// Uniform average over (y, z) of p(b xor c = f(y, z)).
inline double chsh_score(const BellTable& t, const std::function<int(int y, int z)>& game) {
  double s = 0.0;
  for (int z = 0; z < 2; ++z)
    for (int y = 0; y < 2; ++y)
      for (int c = 0; c < 2; ++c)
        for (int b = 0; b < 2; ++b)
          if ((b ^ c) == game(y, z)) s += t.at(c, b, z, y);
  return s / 4.0;
}

namespace games {
inline int yz(int y, int z) { return y & z; }
}  // namespace games

/// At x1 = x2 = 0 the switch should act as the identity on control and target:
/// the table must factor as delta(a1 = a1*, a2 = a2*) times the direct Bell
/// table of labs C and B on the shared state. Throws std::invalid_argument if
/// the x = 0 preparations are not the target state or the target is not an
/// eigenstate of the A-lab measurements.
inline bool identity_reduction_check(const SwitchScenario& scn, double tol = kDefaultTolerance) {
  scn.validate(tol);
  auto deterministic_outcome = [&](const LabAOp& lab, const char* which) {
    if (std::abs(std::abs(lab.prepare[0].braket(scn.target_init)) - 1.0) > tol)
      throw std::invalid_argument(std::string("identity check: ") + which + " does not prepare the target state at x=0");
    for (int a = 0; a < 2; ++a)
      if (std::abs(std::abs(lab.measure[a].braket(scn.target_init)) - 1.0) <= tol) return a;
    throw std::invalid_argument(std::string("identity check: target is not an eigenstate of ") + which + "'s measurement");
  };
  const int a1 = deterministic_outcome(scn.labA1, "lab A1");
  const int a2 = deterministic_outcome(scn.labA2, "lab A2");
  const auto raw = switch_distribution(scn, tol, false);
  const auto bell = bell_distribution(scn.shared_state, scn.labC, scn.labB, tol);
  bool ok = true;
  for_each_event([&](const SwitchEvent& ev) {
    if (ev.x1 != 0 || ev.x2 != 0) return;
    const double expected = (ev.a1 == a1 && ev.a2 == a2) ? bell.at(ev.c, ev.b, ev.z, ev.y) : 0.0;
    if (std::abs(raw.at(ev) - expected) > tol) ok = false;
  });
  return ok;
}

}  // namespace gptlab
