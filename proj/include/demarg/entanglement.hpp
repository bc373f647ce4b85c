#pragma once

#include <vector>

#include "demarg/criteria.hpp"
#include "demarg/fock.hpp"

namespace demarg {

// Two-mode operator on a dim x dim truncation; row/column index n1 * dim + n2.
struct TwoModeState {
  int dim = 0;
  CMatrix elements;
  double trace() const { return elements.trace().real(); }
};

// exp(-(pi/4)(a1^dag a2 - a1 a2^dag)) (-1)^{n2}, exact on every photon-number
// block that fits in the truncation. The output Wigner function is
// W_in((q1 + q2)/sqrt2, (p1 + p2)/sqrt2, (q1 - q2)/sqrt2, (p1 - p2)/sqrt2).
Operator beam_splitter_5050(int dim);

TwoModeState tensor(const CMatrix& a, const CMatrix& b);
TwoModeState apply(const Operator& u, const TwoModeState& s);
// |n1 n2><m1 m2| -> |n1 m2><m1 n2|.
TwoModeState partial_transpose(const TwoModeState& s);
CMatrix partial_trace_mode2(const TwoModeState& s);

// Per-mode dim needed to hold rho plus two guard levels, ignoring diagonal
// weight below `tail` at the top of the truncation.
int entanglement_dim(const DensityMatrix& rho, double tail = 1e-16);

// Negativity of the partially transposed output of rho and vacuum on a 50:50
// beam splitter. dim = 0 picks entanglement_dim(rho).
double entanglement_potential(const DensityMatrix& rho, int dim = 0);

// Checks max_theta N_DM2 <= P_ent + 1e-6. witness = max N_DM2, threshold = P_ent.
CriterionReport verify_bound(const DensityMatrix& rho, const std::vector<double>& theta_grid, int dim = 0);

// Fictitious states from the optical chain BS -> PT(mode 2) -> BS followed by
// tracing out mode 2. The second input is rho rotated by pi/2 (DM1) or vacuum (DM2).
CMatrix dm1_by_beam_splitters(const DensityMatrix& rho, int out_dim);
CMatrix dm2_by_beam_splitters(const DensityMatrix& rho, int out_dim);

}  // namespace demarg
