#include "cforge/skolem.hpp"

namespace cforge {

namespace {

constexpr int kMaxPartitions = 10000;

TermPtr model_pins(const Model& m, const std::vector<SymbolDecl>& decls) {
  std::vector<TermPtr> eqs;
  for (const auto& d : decls) {
    const Value v = m.get(d.sym);
    eqs.push_back(tb::eq(tb::sym(d.sym, d.sort),
                         d.sort == Sort::Bool ? tb::bool_const(v.b)
                                              : tb::int_const(v.z)));
  }
  return tb::and_(std::move(eqs));
}

}  // namespace

AeValOutcome ae_val(const ForallExistsFormula& q, Solver& solver) {
  q.validate();
  AeValOutcome out;

  std::vector<SymbolDecl> all_decls = q.universals;
  for (const auto& d : q.existentials) all_decls.push_back(d);
  const std::string logic = solver.config().logic_quantifier_free;

  std::vector<TermPtr> guards;
  std::vector<SkolemPartition> partitions;

  auto unknown = [&](const std::string& why) {
    out.tag = AeValTag::Unknown;
    out.reason = why;
    return out;
  };
  auto raise_process = [&](const SolverResult& r) {
    throw SolverError("solver failure during '" + q.description +
                      "': " + r.diagnostics);
  };

  while (true) {
    if (static_cast<int>(partitions.size()) >= kMaxPartitions)
      return unknown("partition limit reached");
    out.iterations++;

    // A universal assignment not yet covered by any projection.
    const TermPtr blocked =
        tb::and_({q.premise, tb::not_(tb::or_(guards))});
    SolverResult r1 = solver.check(
        emit_smtlib(q.universals, blocked, {logic, true}), &q.universals);
    if (r1.status == SolverStatus::ProcessError) raise_process(r1);
    if (r1.status == SolverStatus::Timeout ||
        r1.status == SolverStatus::Unknown)
      return unknown("solver " + std::string(to_string(r1.status)) +
                     " while enumerating models");
    if (r1.status == SolverStatus::Unsat) break;
    const Model m_u = *r1.model;

    // Does this assignment extend to the conclusion?
    SolverResult r2 = solver.check(
        emit_smtlib(all_decls,
                    tb::and_({model_pins(m_u, q.universals), q.conclusion}),
                    {logic, true}),
        &all_decls);
    if (r2.status == SolverStatus::ProcessError) raise_process(r2);
    if (r2.status == SolverStatus::Timeout ||
        r2.status == SolverStatus::Unknown)
      return unknown("solver " + std::string(to_string(r2.status)) +
                     " while extending a model");
    if (r2.status == SolverStatus::Unsat) {
      // Verified counter-model: satisfies the premise, avoids all collected
      // projections, and admits no existential witness.
      out.tag = AeValTag::Invalid;
      out.counter_model = m_u;
      return out;
    }

    MbpResult mbp;
    try {
      mbp = mbp_project(*r2.model, q.existentials, q.conclusion);
    } catch (const UnsupportedCoefficient& e) {
      return unknown(e.what());
    }
    std::set<IndexedSymbol> uset;
    for (const auto& d : q.universals) uset.insert(d.sym);
    std::set<IndexedSymbol> free;
    collect_symbols(mbp.projection, free);
    for (const auto& s : free)
      if (!uset.count(s))
        throw InternalError("projection escaped the universals: " + s.str());
    for (const auto& g : guards)
      if (term_eq(g, mbp.projection))
        throw InternalError("projection repeated; enumeration is stuck");

    guards.push_back(mbp.projection);
    partitions.push_back({mbp.projection, std::move(mbp.witness)});
  }

  // Re-verify the relation invariants before declaring validity.
  SkolemRelation rel{std::move(partitions)};
  {
    // Coverage: premise /\ not (\/ guards) unsat.
    std::vector<TermPtr> gs;
    for (const auto& p : rel.partitions) gs.push_back(p.guard);
    SolverResult rc = solver.check(
        emit_smtlib(q.universals,
                    tb::and_({q.premise, tb::not_(tb::or_(gs))}),
                    {logic, true}));
    if (rc.status == SolverStatus::ProcessError) raise_process(rc);
    if (rc.status != SolverStatus::Unsat)
      throw InternalError("skolem coverage verification failed for '" +
                          q.description + "'");
  }
  if (!rel.partitions.empty()) {
    // Soundness, batched: premise /\ \/_j (guard_j /\ not C[assigns_j]).
    std::vector<TermPtr> bad;
    for (const auto& p : rel.partitions) {
      std::map<IndexedSymbol, TermPtr> sub;
      for (const auto& [sym, term] : p.assigns) sub[sym] = term;
      bad.push_back(
          tb::and_({p.guard, tb::not_(substitute(q.conclusion, sub))}));
    }
    SolverResult rs = solver.check(
        emit_smtlib(q.universals, tb::and_({q.premise, tb::or_(bad)}),
                    {logic, true}));
    if (rs.status == SolverStatus::ProcessError) raise_process(rs);
    if (rs.status != SolverStatus::Unsat)
      throw InternalError("skolem soundness verification failed for '" +
                          q.description + "'");
  }
  out.tag = AeValTag::Valid;
  out.skolem = std::move(rel);
  return out;
}

AeValOutcome ae_val(const ForallExistsFormula& q, const SolverConfig& config) {
  Solver solver(config);
  return ae_val(q, solver);
}

}  // namespace cforge
