#include <numeric>

#include "cforge/simulate.hpp"

namespace cforge {

namespace {

struct Dimension {
  std::string name;
  std::vector<Value> values;
};

std::vector<Dimension> make_dims(
    const std::vector<std::pair<std::string, Sort>>& vars,
    const DomainBounds& bounds) {
  std::vector<Dimension> dims;
  for (const auto& [name, sort] : vars) {
    Dimension d;
    d.name = name;
    if (sort == Sort::Bool) {
      d.values = {Value::of_bool(false), Value::of_bool(true)};
    } else {
      auto [lo, hi] = bounds.get(name);
      if (lo > hi) throw Error("bounds for " + name + " are empty");
      for (mpz_class v = lo; v <= hi; ++v) d.values.push_back(Value::of_int(v));
    }
    dims.push_back(std::move(d));
  }
  return dims;
}

mpz_class space_size(const std::vector<Dimension>& dims) {
  mpz_class n = 1;
  for (const auto& d : dims) n *= static_cast<unsigned long>(d.values.size());
  return n;
}

// Mixed-radix decoding of a flat index into per-dimension value positions.
class Enumeration {
 public:
  explicit Enumeration(std::vector<Dimension> dims) : dims_(std::move(dims)) {
    size_ = 1;
    for (const auto& d : dims_) size_ *= d.values.size();
  }

  size_t size() const { return size_; }
  size_t arity() const { return dims_.size(); }

  void decode(size_t index, std::vector<const Value*>& out) const {
    out.resize(dims_.size());
    for (size_t i = 0; i < dims_.size(); ++i) {
      const size_t n = dims_[i].values.size();
      out[i] = &dims_[i].values[index % n];
      index /= n;
    }
  }

  const std::vector<Dimension>& dims() const { return dims_; }

 private:
  std::vector<Dimension> dims_;
  size_t size_ = 1;
};

}  // namespace

GameResult bounded_game_solve(const ContractSystem& sys,
                              const DomainBounds& bounds) {
  std::vector<std::pair<std::string, Sort>> state_sig;
  for (const auto& v : sys.state_vars) state_sig.emplace_back(v.name, v.sort);

  std::vector<Dimension> sdims = make_dims(state_sig, bounds);
  std::vector<Dimension> idims = make_dims(sys.inputs, bounds);
  const mpz_class pairs = space_size(sdims) * space_size(idims);
  if (pairs > 10000000)
    throw SpaceTooLarge("bounded game has " + pairs.get_str() +
                        " state-input pairs (limit 1e7)");

  Enumeration states(std::move(sdims));
  Enumeration inputs(std::move(idims));
  const size_t ns = states.size();
  const size_t ni = inputs.size();

  std::map<std::string, std::pair<bool, size_t>> where;  // name -> (is_state, dim)
  for (size_t i = 0; i < states.arity(); ++i)
    where[states.dims()[i].name] = {true, i};
  std::map<std::string, size_t> input_where;
  for (size_t i = 0; i < inputs.arity(); ++i)
    input_where[inputs.dims()[i].name] = i;

  std::vector<const Value*> sv, iv, nv;
  SymbolEnv env = [&](const IndexedSymbol& sym) -> Value {
    if (sym.plane == Plane::Input) {
      auto it = input_where.find(sym.name);
      if (it == input_where.end())
        throw InternalError("game: unknown input " + sym.name);
      return *iv[it->second];
    }
    auto it = where.find(sym.name);
    if (it == where.end())
      throw InternalError("game: unknown state var " + sym.name);
    const auto& frame = sym.index == 0 ? sv : nv;
    return *frame[it->second.second];
  };

  const TermPtr a = sys.assumption();
  const TermPtr gi = sys.initial();
  const TermPtr gt = sys.transition();

  std::vector<char> viable(ns, 1);
  // Witness cache: last next-state found for each (state, input) pair.
  std::vector<size_t> cache(ns * ni, 0);

  bool changed = true;
  size_t iterations = 0;
  while (changed) {
    changed = false;
    iterations++;
    if (iterations > ns + 1)
      throw InternalError("game: fixpoint did not converge");
    for (size_t s = 0; s < ns; ++s) {
      if (!viable[s]) continue;
      states.decode(s, sv);
      bool ok = true;
      for (size_t i = 0; i < ni && ok; ++i) {
        inputs.decode(i, iv);
        if (!eval_term(a, env).b) continue;  // input not admissible here
        // Some viable successor must satisfy G_T.
        bool found = false;
        const size_t cached = cache[s * ni + i];
        if (viable[cached]) {
          states.decode(cached, nv);
          if (eval_term(gt, env).b) found = true;
        }
        for (size_t t = 0; !found && t < ns; ++t) {
          if (!viable[t]) continue;
          states.decode(t, nv);
          if (eval_term(gt, env).b) {
            found = true;
            cache[s * ni + i] = t;
          }
        }
        if (!found) ok = false;
      }
      if (!ok) {
        viable[s] = 0;
        changed = true;
      }
    }
  }

  for (size_t s = 0; s < ns; ++s) {
    if (!viable[s]) continue;
    states.decode(s, sv);
    if (eval_term(gi, env).b) return GameResult::Realizable;
  }
  return GameResult::Unrealizable;
}

}  // namespace cforge
