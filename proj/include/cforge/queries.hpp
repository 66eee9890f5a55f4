#pragma once

#include <string>
#include <vector>

#include "cforge/system.hpp"
#include "cforge/term.hpp"

namespace cforge {

// A forall-exists validity query:  forall U. premise(U) => exists E. conclusion(U, E)
struct ForallExistsFormula {
  std::string description;
  std::vector<SymbolDecl> universals;
  std::vector<SymbolDecl> existentials;
  TermPtr premise;
  TermPtr conclusion;

  // Checks symbol-table closure and disjointness; throws InternalError.
  void validate() const;
};

// Extendability after an n-step chain:
//   forall s0 i0 s1 i1 ... sn in.
//     /\_{j<n} A(sj, ij) /\ G_T(sj, ij, sj+1)  /\  A(sn, in)
//       => exists s{n+1}. G_T(sn, in, s{n+1})
ForallExistsFormula build_extend_check(const ContractSystem& sys, int n);

// Same with G_I(s0) conjoined to the premise.
ForallExistsFormula build_base_check_prime(const ContractSystem& sys, int k);

// exists s0. G_I(s0)   (no universals, premise true)
ForallExistsFormula build_gi_witness_query(const ContractSystem& sys);

}  // namespace cforge
