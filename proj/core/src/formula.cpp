#include "efl/formula.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace efl {

bool Valuation::operator()(const Var& prop) const {
  auto it = values_.find(prop);
  return it != values_.end() && it->second;
}

namespace {

const std::shared_ptr<const Formula::Node>& true_node() {
  static const auto node =
      std::make_shared<const Formula::Node>(Formula::Node{Formula::Op::kTrue, {}, {}});
  return node;
}

const std::shared_ptr<const Formula::Node>& false_node() {
  static const auto node =
      std::make_shared<const Formula::Node>(Formula::Node{Formula::Op::kFalse, {}, {}});
  return node;
}

}  // namespace

Formula::Formula() : node_(true_node()) {}

Formula Formula::top() { return Formula(true_node()); }
Formula Formula::bottom() { return Formula(false_node()); }

Formula Formula::var(const Var& prop) {
  return Formula(std::make_shared<const Node>(Node{Op::kVar, prop, {}}));
}

Formula Formula::make_and(std::vector<Formula> operands) {
  return Formula(std::make_shared<const Node>(Node{Op::kAnd, {}, std::move(operands)}));
}

Formula Formula::make_or(std::vector<Formula> operands) {
  return Formula(std::make_shared<const Node>(Node{Op::kOr, {}, std::move(operands)}));
}

Formula Formula::make_implies(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{Op::kImplies, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula::Op Formula::op() const { return node_->op; }

const Var& Formula::prop() const {
  if (node_->op != Op::kVar) throw std::logic_error("Formula::prop on non-variable");
  return node_->prop;
}

const std::vector<Formula>& Formula::operands() const { return node_->operands; }

bool Formula::evaluate(const Valuation& rho) const {
  switch (node_->op) {
    case Op::kVar: return rho(node_->prop);
    case Op::kTrue: return true;
    case Op::kFalse: return false;
    case Op::kAnd:
      for (const auto& f : node_->operands)
        if (!f.evaluate(rho)) return false;
      return true;
    case Op::kOr:
      for (const auto& f : node_->operands)
        if (f.evaluate(rho)) return true;
      return false;
    case Op::kImplies:
      return !node_->operands[0].evaluate(rho) || node_->operands[1].evaluate(rho);
  }
  return false;
}

int compare(const Formula& a, const Formula& b) {
  if (a.identity() == b.identity()) return 0;
  if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
  if (a.op() == Formula::Op::kVar) {
    if (a.prop() == b.prop()) return 0;
    return a.prop() < b.prop() ? -1 : 1;
  }
  const auto& xs = a.operands();
  const auto& ys = b.operands();
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
    int c = compare(xs[i], ys[i]);
    if (c != 0) return c;
  }
  if (xs.size() == ys.size()) return 0;
  return xs.size() < ys.size() ? -1 : 1;
}

namespace {

// Shared body of conj/disj: `unit` is absorbed, `zero` dominates.
Formula fold_nary(std::vector<Formula> operands, Formula::Op op) {
  const Formula::Op unit = op == Formula::Op::kAnd ? Formula::Op::kTrue : Formula::Op::kFalse;
  const Formula::Op zero = op == Formula::Op::kAnd ? Formula::Op::kFalse : Formula::Op::kTrue;
  std::vector<Formula> flat;
  flat.reserve(operands.size());
  for (auto& f : operands) {
    if (f.op() == unit) continue;
    if (f.op() == zero) return f;
    if (f.op() == op) {
      for (const auto& g : f.operands()) flat.push_back(g);
    } else if (flat.empty() || flat.back().identity() != f.identity()) {
      flat.push_back(std::move(f));
    }
  }
  if (flat.empty()) return op == Formula::Op::kAnd ? Formula::top() : Formula::bottom();
  if (flat.size() == 1) return flat.front();
  return op == Formula::Op::kAnd ? Formula::make_and(std::move(flat))
                                 : Formula::make_or(std::move(flat));
}

}  // namespace

Formula conj(const Formula& a, const Formula& b) { return fold_nary({a, b}, Formula::Op::kAnd); }
Formula conj(std::vector<Formula> operands) {
  return fold_nary(std::move(operands), Formula::Op::kAnd);
}
Formula disj(const Formula& a, const Formula& b) { return fold_nary({a, b}, Formula::Op::kOr); }
Formula disj(std::vector<Formula> operands) {
  return fold_nary(std::move(operands), Formula::Op::kOr);
}

Formula implies(const Formula& a, const Formula& b) {
  if (a.is_bottom() || b.is_top()) return Formula::top();
  if (a.is_top()) return b;
  if (a.identity() == b.identity()) return Formula::top();
  return Formula::make_implies(a, b);
}

namespace {

template <typename Leaf>
Formula rebuild(const Formula& f, const Leaf& leaf) {
  switch (f.op()) {
    case Formula::Op::kVar: return leaf(f);
    case Formula::Op::kTrue:
    case Formula::Op::kFalse: return f;
    case Formula::Op::kAnd:
    case Formula::Op::kOr: {
      std::vector<Formula> kids;
      kids.reserve(f.operands().size());
      for (const auto& g : f.operands()) kids.push_back(rebuild(g, leaf));
      return f.op() == Formula::Op::kAnd ? conj(std::move(kids)) : disj(std::move(kids));
    }
    case Formula::Op::kImplies:
      return implies(rebuild(f.operands()[0], leaf), rebuild(f.operands()[1], leaf));
  }
  return f;
}

}  // namespace

Formula fold_constants(const Formula& f) {
  return rebuild(f, [](const Formula& v) { return v; });
}

void collect_props(const Formula& f, std::set<Var>& out) {
  if (f.op() == Formula::Op::kVar) {
    out.insert(f.prop());
    return;
  }
  for (const auto& g : f.operands()) collect_props(g, out);
}

std::set<Var> props_of(const Formula& f) {
  std::set<Var> out;
  collect_props(f, out);
  return out;
}

Formula substitute_props(const Formula& f, const std::map<Var, Formula>& sigma) {
  if (sigma.empty()) return f;
  return rebuild(f, [&](const Formula& v) {
    auto it = sigma.find(v.prop());
    return it == sigma.end() ? v : it->second;
  });
}

Formula restrict(const Formula& f, const Valuation& fixed) {
  return rebuild(f, [&](const Formula& v) {
    if (!fixed.contains(v.prop())) return v;
    return fixed(v.prop()) ? Formula::top() : Formula::bottom();
  });
}

namespace {

void print(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Formula::Op::kVar: out += f.prop().text(); return;
    case Formula::Op::kTrue: out += "T"; return;
    case Formula::Op::kFalse: out += "F"; return;
    case Formula::Op::kAnd:
    case Formula::Op::kOr: {
      const char* sep = f.op() == Formula::Op::kAnd ? " & " : " | ";
      out += '(';
      bool first = true;
      for (const auto& g : f.operands()) {
        if (!first) out += sep;
        first = false;
        print(g, out);
      }
      out += ')';
      return;
    }
    case Formula::Op::kImplies:
      out += '(';
      print(f.operands()[0], out);
      out += " -> ";
      print(f.operands()[1], out);
      out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

}  // namespace efl

namespace efl {

bool equivalent_by_enumeration(const Formula& a, const Formula& b, std::size_t max_props) {
  if (compare(a, b) == 0) return true;
  std::set<Var> vars;
  collect_props(a, vars);
  collect_props(b, vars);
  if (vars.size() > max_props) throw std::length_error("too many variables to enumerate");
  std::vector<Var> order(vars.begin(), vars.end());
  const std::uint64_t total = std::uint64_t{1} << order.size();
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    Valuation rho;
    for (std::size_t i = 0; i < order.size(); ++i) rho.set(order[i], (bits >> i) & 1U);
    if (a.evaluate(rho) != b.evaluate(rho)) return false;
  }
  return true;
}

}  // namespace efl
