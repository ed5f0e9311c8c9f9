#pragma once

#include <vector>

#include "qkflag/multipoly.hpp"

namespace qkflag {

/// e_k of the listed variables; e_0 = 1 and e_k = 0 for k < 0 or k > |vars|.
MultiPoly elementary_symmetric(const std::vector<VarTag>& vars, int k);

/// e_k of arbitrary polynomial "roots".
MultiPoly elementary_symmetric(const std::vector<MultiPoly>& roots, int k);

/// h_k of the listed variables; h_0 = 1 and h_k = 0 for k < 0.
MultiPoly complete_homogeneous(const std::vector<VarTag>& vars, int k);

/// h_m written in elementary generators: `elementary[ℓ-1]` stands for e_ℓ.
/// Uses h_m = Σ_{j≥1} (-1)^{j-1} e_j h_{m-j}.
MultiPoly complete_from_elementary(const std::vector<MultiPoly>& elementary, int m);

/// Rewrites a polynomial symmetric in `vars` as a polynomial in
/// `generators` (generators[ℓ-1] ↦ e_ℓ(vars)). Other variables ride along
/// as coefficients. Throws DomainError when the input is not symmetric.
MultiPoly symmetric_decompose(const MultiPoly& p, const std::vector<VarTag>& vars,
                              const std::vector<VarTag>& generators);

}  // namespace qkflag
