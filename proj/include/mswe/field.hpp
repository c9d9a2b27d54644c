#pragma once

#include <vector>

#include "mswe/topology.hpp"

namespace mswe {

/// Coefficient vector tagged with its space. W coefficients are point values,
/// U coefficients edge fluxes, Q coefficients cell integrals.
struct Field {
  Space space = Space::W;
  std::vector<double> coeffs;

  static Field zeros(Space s, const DofMap& dofs) {
    return {s, std::vector<double>(dofs.global_size(s), 0.0)};
  }
  static Field constant(Space s, const DofMap& dofs, double v) {
    return {s, std::vector<double>(dofs.global_size(s), v)};
  }
  int size() const { return static_cast<int>(coeffs.size()); }
};

/// Throws SpaceMismatch unless f lives in `expected`.
void require_space(const Field& f, Space expected, const char* what);

}  // namespace mswe
