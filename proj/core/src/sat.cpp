#include "efl/sat.hpp"

#include <algorithm>
#include <numeric>

namespace efl {

namespace detail {

class Dpll {
 public:
  Dpll(int num_vars, const std::vector<std::vector<int>>& clauses, std::vector<int> order)
      : value_(static_cast<std::size_t>(num_vars), -1),
        watches_(static_cast<std::size_t>(num_vars) * 2),
        order_(std::move(order)),
        position_(static_cast<std::size_t>(num_vars), 0) {
    for (std::size_t i = 0; i < order_.size(); ++i) position_[static_cast<std::size_t>(order_[i])] = i;
    for (const auto& c : clauses) add_clause(c);
    if (ok_ && !propagate()) ok_ = false;
    root_ = trail_.size();
  }

  bool assume(int lit) { return ok_ && enqueue(lit); }

  // Back to the root level, dropping assumptions and decisions.
  void reset() {
    decisions_.clear();
    trail_lim_.clear();
    undo_to(root_);
  }

  bool solve(bool prefer_true) {
    if (!ok_ || !propagate()) return false;
    while (true) {
      int v = pick();
      if (v < 0) return true;
      const int lit = prefer_true ? v + 1 : -(v + 1);
      trail_lim_.push_back(trail_.size());
      decisions_.push_back({lit, false});
      enqueue(lit);
      while (!propagate()) {
        while (!decisions_.empty() && decisions_.back().flipped) {
          undo_to(trail_lim_.back());
          trail_lim_.pop_back();
          decisions_.pop_back();
        }
        if (decisions_.empty()) return false;
        undo_to(trail_lim_.back());
        auto& d = decisions_.back();
        d.flipped = true;
        d.lit = -d.lit;
        enqueue(d.lit);
      }
    }
  }

  bool value(int v) const { return value_[static_cast<std::size_t>(v)] == 1; }

 private:
  struct Decision {
    int lit;
    bool flipped;
  };

  static std::size_t code(int lit) {
    return lit > 0 ? static_cast<std::size_t>(lit - 1) * 2 : static_cast<std::size_t>(-lit - 1) * 2 + 1;
  }

  int lit_value(int lit) const {
    int v = value_[static_cast<std::size_t>(std::abs(lit) - 1)];
    if (v < 0) return -1;
    return lit > 0 ? v : 1 - v;
  }

  void add_clause(const std::vector<int>& c) {
    if (!ok_) return;
    if (c.empty()) {
      ok_ = false;
      return;
    }
    if (c.size() == 1) {
      if (!enqueue(c[0])) ok_ = false;
      return;
    }
    clauses_.push_back(c);
    std::size_t idx = clauses_.size() - 1;
    watches_[code(c[0])].push_back(idx);
    watches_[code(c[1])].push_back(idx);
  }

  bool enqueue(int lit) {
    int v = lit_value(lit);
    if (v == 1) return true;
    if (v == 0) return false;
    value_[static_cast<std::size_t>(std::abs(lit) - 1)] = lit > 0 ? 1 : 0;
    trail_.push_back(lit);
    return true;
  }

  bool propagate() {
    while (qhead_ < trail_.size()) {
      int false_lit = -trail_[qhead_++];
      auto& ws = watches_[code(false_lit)];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        std::size_t ci = ws[i++];
        auto& c = clauses_[ci];
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == 1) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (lit_value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[code(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (!enqueue(c[0])) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead_ = trail_.size();
          return false;
        }
      }
      ws.resize(j);
    }
    return true;
  }

  void undo_to(std::size_t size) {
    while (trail_.size() > size) {
      auto v = static_cast<std::size_t>(std::abs(trail_.back()) - 1);
      value_[v] = -1;
      pick_from_ = std::min(pick_from_, position_[v]);
      trail_.pop_back();
    }
    qhead_ = trail_.size();
  }

  int pick() {
    while (pick_from_ < order_.size() && value_[static_cast<std::size_t>(order_[pick_from_])] >= 0)
      ++pick_from_;
    return pick_from_ < order_.size() ? order_[pick_from_] : -1;
  }

  bool ok_ = true;
  std::vector<int> value_;
  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<int> trail_;
  std::vector<std::size_t> trail_lim_;
  std::vector<Decision> decisions_;
  std::size_t qhead_ = 0;
  std::vector<int> order_;
  std::vector<std::size_t> position_;
  std::size_t pick_from_ = 0;
  std::size_t root_ = 0;
};

}  // namespace detail

SatInstance::SatInstance(const Formula& phi) {
  // Top-level conjuncts become root clauses directly.
  std::vector<Formula> roots;
  if (phi.op() == Formula::Op::kAnd)
    roots = phi.operands();
  else
    roots.push_back(phi);
  for (const auto& r : roots) {
    if (r.is_top()) continue;
    if (r.is_bottom()) {
      trivially_false_ = true;
      continue;
    }
    if (r.op() == Formula::Op::kOr) {
      std::vector<int> clause;
      for (const auto& g : r.operands()) clause.push_back(encode(g));
      clauses_.push_back(std::move(clause));
    } else {
      clauses_.push_back({encode(r)});
    }
  }
  // Branch on formula variables first, most frequent first; auxiliaries last.
  std::vector<std::size_t> occurrences(static_cast<std::size_t>(num_vars_), 0);
  for (const auto& c : clauses_)
    for (int lit : c) ++occurrences[static_cast<std::size_t>(std::abs(lit) - 1)];
  std::vector<int> originals, aux;
  for (const auto& [v, idx] : index_) originals.push_back(idx - 1);
  std::sort(originals.begin(), originals.end(), [&](int a, int b) {
    auto oa = occurrences[static_cast<std::size_t>(a)], ob = occurrences[static_cast<std::size_t>(b)];
    return oa != ob ? oa > ob : a < b;
  });
  std::vector<bool> is_original(static_cast<std::size_t>(num_vars_), false);
  for (int v : originals) is_original[static_cast<std::size_t>(v)] = true;
  order_ = originals;
  for (int v = 0; v < num_vars_; ++v)
    if (!is_original[static_cast<std::size_t>(v)]) order_.push_back(v);
  memo_.clear();
}

int SatInstance::fresh_aux() { return ++num_vars_; }

int SatInstance::literal_of(const Var& v) {
  auto it = index_.find(v);
  if (it != index_.end()) return it->second;
  int idx = fresh_aux();
  index_.emplace(v, idx);
  vars_.push_back(v);
  return idx;
}

int SatInstance::encode(const Formula& f) {
  switch (f.op()) {
    case Formula::Op::kVar: return literal_of(f.prop());
    case Formula::Op::kTrue:
    case Formula::Op::kFalse: {
      int x = fresh_aux();
      clauses_.push_back({x});
      return f.is_top() ? x : -x;
    }
    default: break;
  }
  auto memo = memo_.find(f.identity());
  if (memo != memo_.end()) return memo->second;
  int x = fresh_aux();
  if (f.op() == Formula::Op::kImplies) {
    int a = encode(f.operands()[0]);
    int b = encode(f.operands()[1]);
    clauses_.push_back({-x, -a, b});
    clauses_.push_back({x, a});
    clauses_.push_back({x, -b});
  } else {
    std::vector<int> kids;
    for (const auto& g : f.operands()) kids.push_back(encode(g));
    bool is_and = f.op() == Formula::Op::kAnd;
    std::vector<int> big{is_and ? x : -x};
    for (int k : kids) {
      clauses_.push_back(is_and ? std::vector<int>{-x, k} : std::vector<int>{x, -k});
      big.push_back(is_and ? -k : k);
    }
    clauses_.push_back(std::move(big));
  }
  memo_.emplace(f.identity(), x);
  return x;
}

std::optional<Valuation> SatInstance::solve(const Valuation& assumptions, bool prefer_true) const {
  if (trivially_false_) return std::nullopt;
  if (!engine_) engine_ = std::make_shared<detail::Dpll>(num_vars_, clauses_, order_);
  detail::Dpll& dpll = *engine_;
  dpll.reset();
  std::optional<Valuation> out;
  bool consistent = true;
  for (const auto& [v, value] : assumptions.entries()) {
    auto it = index_.find(v);
    if (it == index_.end()) continue;
    if (!dpll.assume(value ? it->second : -it->second)) {
      consistent = false;
      break;
    }
  }
  if (consistent && dpll.solve(prefer_true)) {
    Valuation model;
    for (const auto& [v, value] : assumptions.entries()) model.set(v, value);
    for (const auto& [v, idx] : index_) model.set(v, dpll.value(idx - 1));
    out = std::move(model);
  }
  dpll.reset();
  return out;
}

std::optional<Valuation> sat(const Formula& phi) { return SatInstance(phi).solve(); }

Valuation minimize_model(const SatInstance& instance, Valuation model) {
  std::vector<Var> order = instance.vars();
  std::sort(order.begin(), order.end());
  Valuation fixed;
  for (const auto& v : order) {
    if (model(v)) {
      Valuation attempt = fixed;
      attempt.set(v, false);
      if (auto better = instance.solve(attempt)) {
        model = *better;
        fixed.set(v, false);
      } else {
        fixed.set(v, true);
      }
    } else {
      fixed.set(v, false);
    }
  }
  return model;
}

}  // namespace efl
