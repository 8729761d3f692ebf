#pragma once

// Built-in switch scenarios. Outcome 0 is the +1 eigenvector of the measured
// observable unless a lab notes otherwise.

#include "gptlab/hermitian.hpp"
#include "gptlab/switch.hpp"

#include <string>
#include <vector>

namespace gptlab::presets {

namespace detail {

inline LabAOp computational_lab() {
  return {{kets::zero(), kets::one()}, {kets::zero(), kets::one()}};
}

inline LabAOp hadamard_lab() {
  return {{kets::plus(), kets::minus()}, {kets::plus(), kets::minus()}};
}

/// Ket pair (outcome 0, outcome 1) for n.sigma; `flip` puts the -1 eigenvector first.
inline std::array<KetVector, 2> eigenbasis(double nx, double ny, double nz, bool flip = false) {
  const auto es = eigensystem(observable(nx, ny, nz));
  if (flip) return {es[1].second, es[0].second};
  return {es[0].second, es[1].second};
}

inline SwitchScenario computational_switch(std::string name, HermitianOperator shared) {
  SwitchScenario s;
  s.name = std::move(name);
  s.control_basis = {kets::zero(), kets::one()};
  s.shared_state = std::move(shared);
  s.target_init = kets::zero();
  s.labA1 = computational_lab();
  s.labA2 = computational_lab();
  // C: (Z+X)/√2 at z=0, (Z-X)/√2 at z=1. B: Z at y=0, X at y=1.
  s.labC = LabMeasurement::from_kets({eigenbasis(1, 0, 1), eigenbasis(-1, 0, 1)});
  s.labB = LabMeasurement::from_kets({eigenbasis(0, 0, 1), eigenbasis(1, 0, 0)});
  return s;
}

}  // namespace detail

inline SwitchScenario quantum_iib() {
  auto s = detail::computational_switch("quantum-II.B", states::phi_plus());
  s.local_spaces = {{"qubit", "qubit"}};
  return s;
}

inline SwitchScenario hexsquare_va() {
  auto s = detail::computational_switch("hexsquare-V.A", states::phi_pr());
  s.local_spaces = {{"hex", "square"}};
  return s;
}

/// Lab C measures (Z-X)/√2 at both settings and announces x2 a1 + (x2 xor 1) c'.
/// Lab B keeps Z at y=0 and measures X at y=1 with b=0 on |->.
inline SwitchScenario hexsquare_vb() {
  auto s = detail::computational_switch("hexsquare-V.B", states::phi_pr());
  s.labC = LabMeasurement::from_kets({detail::eigenbasis(-1, 0, 1), detail::eigenbasis(-1, 0, 1)});
  s.labB = LabMeasurement::from_kets({detail::eigenbasis(0, 0, 1), detail::eigenbasis(1, 0, 0, true)});
  s.post_process = PostProcess::announce_a1_when_x2();
  s.local_spaces = {{"hex", "square"}};
  return s;
}

/// Control in the X basis, target |+>, A labs measure and prepare in the X
/// basis. C measures Y with c=0 on the -1 eigenvector; B measures (X+Y)/√2 at
/// y=0 and (X-Y)/√2 at y=1, the latter with b=0 on the -1 eigenvector.
inline SwitchScenario hexsquare_vc() {
  SwitchScenario s;
  s.name = "hexsquare-V.C";
  s.control_basis = {kets::plus(), kets::minus()};
  s.shared_state = states::phi_pr();
  s.target_init = kets::plus();
  s.labA1 = detail::hadamard_lab();
  s.labA2 = detail::hadamard_lab();
  s.labC = LabMeasurement::from_kets({detail::eigenbasis(0, 1, 0, true), detail::eigenbasis(0, 1, 0, true)});
  s.labB = LabMeasurement::from_kets({detail::eigenbasis(1, 1, 0), detail::eigenbasis(1, -1, 0, true)});
  s.local_spaces = {{"square", "hex"}};
  return s;
}

inline std::vector<std::string> names() { return {"quantum-II.B", "hexsquare-V.A", "hexsquare-V.B", "hexsquare-V.C"}; }

/// Throws std::invalid_argument for an unknown name.
inline SwitchScenario by_name(const std::string& name) {
  if (name == "quantum-II.B") return quantum_iib();
  if (name == "hexsquare-V.A") return hexsquare_va();
  if (name == "hexsquare-V.B") return hexsquare_vb();
  if (name == "hexsquare-V.C") return hexsquare_vc();
  throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace gptlab::presets
