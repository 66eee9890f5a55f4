#include <sstream>

#include "cforge/skolem.hpp"

namespace cforge {

std::map<IndexedSymbol, TermPtr> SkolemRelation::as_substitution() const {
  std::map<IndexedSymbol, TermPtr> out;
  if (partitions.empty()) return out;
  for (const auto& [sym, term] : partitions.back().assigns) out[sym] = term;
  for (size_t i = partitions.size() - 1; i-- > 0;) {
    const auto& p = partitions[i];
    for (const auto& [sym, term] : p.assigns) {
      auto it = out.find(sym);
      if (it == out.end())
        throw InternalError("skolem: partition assigns differ in domain");
      it->second = tb::ite(p.guard, term, it->second);
    }
  }
  return out;
}

std::string SkolemRelation::dump() const {
  std::ostringstream os;
  std::function<void(size_t, int)> go = [&](size_t i, int indent) {
    const std::string pad(static_cast<size_t>(indent) * 2, ' ');
    auto assigns = [&](const SkolemPartition& p) {
      os << pad << "  (";
      for (size_t j = 0; j < p.assigns.size(); ++j) {
        if (j) os << "\n" << pad << "   ";
        os << "(" << p.assigns[j].first.str() << " "
           << term_to_smt2(p.assigns[j].second) << ")";
      }
      os << ")";
    };
    if (i + 1 == partitions.size()) {
      // Last partition doubles as the default branch.
      os << pad << "(else\n";
      assigns(partitions[i]);
      os << ")";
      return;
    }
    os << pad << "(ite " << term_to_smt2(partitions[i].guard) << "\n";
    assigns(partitions[i]);
    os << "\n";
    go(i + 1, indent + 1);
    os << ")";
  };
  os << "(skolem";
  if (partitions.empty()) {
    os << ")";
  } else {
    os << "\n";
    go(0, 1);
    os << ")";
  }
  os << "\n";
  return os.str();
}

}  // namespace cforge
