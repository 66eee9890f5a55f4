#include "cforge/queries.hpp"

#include <algorithm>

#include "cforge/diag.hpp"

namespace cforge {

void ForallExistsFormula::validate() const {
  std::set<IndexedSymbol> uset, eset;
  for (const auto& d : universals) uset.insert(d.sym);
  for (const auto& d : existentials) {
    if (uset.count(d.sym))
      throw InternalError("query '" + description +
                          "': universal/existential overlap on " + d.sym.str());
    eset.insert(d.sym);
  }
  std::set<IndexedSymbol> free;
  collect_symbols(premise, free);
  for (const auto& s : free)
    if (!uset.count(s))
      throw InternalError("query '" + description + "': premise symbol " +
                          s.str() + " not universal");
  free.clear();
  collect_symbols(conclusion, free);
  for (const auto& s : free)
    if (!uset.count(s) && !eset.count(s))
      throw InternalError("query '" + description + "': conclusion symbol " +
                          s.str() + " undeclared");
}

ForallExistsFormula build_extend_check(const ContractSystem& sys, int n) {
  if (n < 0) throw InternalError("build_extend_check: negative depth");
  ForallExistsFormula q;
  q.description = "extend-check k=" + std::to_string(n);
  const TermPtr a = sys.assumption();
  const TermPtr t = sys.transition();
  std::vector<TermPtr> premise;
  for (int j = 0; j <= n; ++j) {
    for (const auto& d : sys.state_decls(j)) q.universals.push_back(d);
    for (const auto& d : sys.input_decls(j)) q.universals.push_back(d);
    premise.push_back(shift_indices(a, j, j));
    if (j < n) premise.push_back(shift_indices(t, j, j));
  }
  q.existentials = sys.state_decls(n + 1);
  q.premise = tb::and_(std::move(premise));
  q.conclusion = shift_indices(t, n, n);
  q.validate();
  return q;
}

ForallExistsFormula build_base_check_prime(const ContractSystem& sys, int k) {
  ForallExistsFormula q = build_extend_check(sys, k);
  q.description = "base-check' k=" + std::to_string(k);
  q.premise = tb::and_({sys.initial(), q.premise});
  q.validate();
  return q;
}

ForallExistsFormula build_gi_witness_query(const ContractSystem& sys) {
  ForallExistsFormula q;
  q.description = "initial-state witness";
  q.existentials = sys.state_decls(0);
  q.premise = tb::bool_const(true);
  q.conclusion = sys.initial();
  q.validate();
  return q;
}

}  // namespace cforge
