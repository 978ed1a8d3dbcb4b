// Copyright 2026 The memomut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "memomut/analysis.h"

#include <algorithm>
#include <functional>
#include <numeric>

#include "json.hpp"

namespace memomut {
namespace {

// ---------------------------------------------------------------------------
// 0-CFA over function references.

class FlowAnalysis {
 public:
  explicit FlowAnalysis(const Program& program) : program_(program) {
    size_t n = 0;
    for (size_t f = 0; f < program.num_functions(); ++f) {
      slot_base_.push_back(n);
      n += static_cast<size_t>(program.function(static_cast<FunctionId>(f)).num_slots);
    }
    global_base_ = n;
    n += program.globals().size();
    cells_ = n++;
    ret_base_ = n;
    n += program.num_functions();
    sets_.resize(n);
  }

  void Solve() {
    do {
      changed_ = false;
      for (size_t f = 0; f < program_.num_functions(); ++f) {
        fn_ = static_cast<FunctionId>(f);
        Walk(0);
      }
    } while (changed_);
  }

  // Targets of an indirect call node in `fn`, filtered by arity.
  std::set<FunctionId> Targets(FunctionId fn, NodeId id) {
    fn_ = fn;
    const Node& n = program_.function(fn).node(id);
    std::set<FunctionId> out;
    for (FunctionId t : Walk(n.kids[0])) {
      if (program_.function(t).params.size() == n.kids.size() - 1) out.insert(t);
    }
    return out;
  }

 private:
  using Set = std::set<FunctionId>;

  size_t Slot(FunctionId fn, int32_t slot) const {
    return slot_base_[static_cast<size_t>(fn)] + static_cast<size_t>(slot);
  }
  size_t Ret(FunctionId fn) const { return ret_base_ + static_cast<size_t>(fn); }

  void Flow(size_t var, const Set& values) {
    for (FunctionId v : values) changed_ |= sets_[var].insert(v).second;
  }

  // Abstract value of node `id`, applying the constraints it generates.
  Set Walk(NodeId id) {
    const FunctionDef& fn = program_.function(fn_);
    const Node& n = fn.node(id);
    switch (n.kind) {
      case NodeKind::kFnRefLit:
        return {n.ref};
      case NodeKind::kLocal:
        return sets_[Slot(fn_, n.ref)];
      case NodeKind::kGlobal:
        return sets_[global_base_ + static_cast<size_t>(n.ref)];
      case NodeKind::kIndex:
        Walk(n.kids[0]);
        Walk(n.kids[1]);
        return sets_[cells_];
      case NodeKind::kArrayLit:
        for (NodeId k : n.kids) Flow(cells_, Walk(k));
        return {};
      case NodeKind::kLet:
        Flow(Slot(fn_, n.ref), Walk(n.kids[0]));
        return {};
      case NodeKind::kAssign: {
        const Node& t = fn.node(n.kids[0]);
        Set v = Walk(n.kids[1]);
        if (t.kind == NodeKind::kLocal) {
          Flow(Slot(fn_, t.ref), v);
        } else if (t.kind == NodeKind::kGlobal) {
          Flow(global_base_ + static_cast<size_t>(t.ref), v);
        } else {
          Walk(n.kids[0]);
          Flow(cells_, v);
        }
        return {};
      }
      case NodeKind::kReturn:
        if (!n.kids.empty()) Flow(Ret(fn_), Walk(n.kids[0]));
        return {};
      case NodeKind::kCall: {
        FunctionId callee = n.ref;
        for (size_t i = 0; i < n.kids.size(); ++i) {
          Flow(Slot(callee, static_cast<int32_t>(i)), Walk(n.kids[i]));
        }
        return sets_[Ret(callee)];
      }
      case NodeKind::kIndirectCall: {
        Set targets;
        for (FunctionId t : Walk(n.kids[0])) {
          if (program_.function(t).params.size() == n.kids.size() - 1) {
            targets.insert(t);
          }
        }
        std::vector<Set> args;
        for (size_t i = 1; i < n.kids.size(); ++i) args.push_back(Walk(n.kids[i]));
        Set out;
        for (FunctionId t : targets) {
          for (size_t i = 0; i < args.size(); ++i) {
            Flow(Slot(t, static_cast<int32_t>(i)), args[i]);
          }
          const Set& r = sets_[Ret(t)];
          out.insert(r.begin(), r.end());
        }
        return out;
      }
      case NodeKind::kBuiltinCall: {
        std::vector<Set> args;
        for (NodeId k : n.kids) args.push_back(Walk(k));
        if (n.builtin == Builtin::kPush) Flow(cells_, args[1]);
        return {};
      }
      default:
        for (NodeId k : n.kids) Walk(k);
        return {};
    }
  }

  const Program& program_;
  std::vector<size_t> slot_base_;
  size_t global_base_ = 0;
  size_t cells_ = 0;
  size_t ret_base_ = 0;
  std::vector<Set> sets_;
  FunctionId fn_ = 0;
  bool changed_ = false;
};

// ---------------------------------------------------------------------------
// Side effects: a flow-insensitive unification (Steensgaard-style) of every
// value that may hold an array, per function, with interprocedural summaries.

class UnionFind {
 public:
  int Add() {
    parent_.push_back(static_cast<int>(parent_.size()));
    mutated_.push_back(false);
    return parent_.back();
  }
  int Find(int x) {
    while (parent_[static_cast<size_t>(x)] != x) {
      parent_[static_cast<size_t>(x)] =
          parent_[static_cast<size_t>(parent_[static_cast<size_t>(x)])];
      x = parent_[static_cast<size_t>(x)];
    }
    return x;
  }
  void Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[static_cast<size_t>(b)] = a;
    mutated_[static_cast<size_t>(a)] =
        mutated_[static_cast<size_t>(a)] || mutated_[static_cast<size_t>(b)];
  }
  void Mark(int x) { mutated_[static_cast<size_t>(Find(x))] = true; }
  bool Mutated(int x) { return mutated_[static_cast<size_t>(Find(x))]; }

 private:
  std::vector<int> parent_;
  std::vector<bool> mutated_;
};

// Members of a summary group: 0 = return value, i+1 = parameter i,
// -(g+1) = global g.
struct Summary {
  std::vector<std::pair<std::vector<int>, bool>> groups;  // (members, mutated)
  std::set<int32_t> reads;
  std::set<int32_t> writes;

  bool operator==(const Summary&) const = default;
};

class EffectAnalysis {
 public:
  EffectAnalysis(const Program& program,
                 const std::map<std::pair<FunctionId, NodeId>, std::set<FunctionId>>& indirect)
      : program_(program),
        indirect_(indirect),
        summaries_(program.num_functions()),
        global_uf_(program.globals().size()) {
    std::iota(global_uf_.begin(), global_uf_.end(), 0);
  }

  void Solve() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t f = 0; f < program_.num_functions(); ++f) {
        Summary s = Summarize(static_cast<FunctionId>(f));
        if (!(s == summaries_[f])) {
          summaries_[f] = std::move(s);
          changed = true;
        }
      }
      // Globals unified inside any function alias program-wide.
      for (const Summary& s : summaries_) {
        for (const auto& [members, mutated] : s.groups) {
          int first = -1;
          for (int m : members) {
            if (m >= 0) continue;
            int g = -m - 1;
            if (first < 0) {
              first = g;
            } else if (GlobalFind(g) != GlobalFind(first)) {
              global_uf_[static_cast<size_t>(GlobalFind(g))] = GlobalFind(first);
              changed = true;
            }
          }
        }
      }
    }
  }

  FunctionEffects Effects(FunctionId f) const {
    const Summary& s = summaries_[static_cast<size_t>(f)];
    FunctionEffects e;
    for (int32_t g : s.reads) e.reads.insert(program_.globals()[static_cast<size_t>(g)].name);
    for (int32_t g : s.writes) e.writes.insert(program_.globals()[static_cast<size_t>(g)].name);
    for (const auto& [members, mutated] : s.groups) {
      if (!mutated) continue;
      for (int m : members) {
        if (m > 0) e.mutargs.insert(m - 1);
      }
    }
    return e;
  }

 private:
  int GlobalFind(int g) const {
    while (global_uf_[static_cast<size_t>(g)] != g) g = global_uf_[static_cast<size_t>(g)];
    return g;
  }

  Summary Summarize(FunctionId f) {
    fn_ = f;
    const FunctionDef& def = program_.function(f);
    uf_ = UnionFind();
    for (int i = 0; i < def.num_slots; ++i) uf_.Add();
    global_base_ = def.num_slots;
    for (size_t g = 0; g < program_.globals().size(); ++g) uf_.Add();
    ret_ = uf_.Add();
    for (size_t g = 0; g < program_.globals().size(); ++g) {
      uf_.Union(Global(static_cast<int32_t>(g)), Global(GlobalFind(static_cast<int>(g))));
    }
    reads_.clear();
    writes_.clear();
    Walk(0);

    Summary s;
    s.reads = reads_;
    s.writes = writes_;
    std::map<int, std::vector<int>> by_root;
    by_root[uf_.Find(ret_)].push_back(0);
    for (size_t i = 0; i < def.params.size(); ++i) {
      by_root[uf_.Find(static_cast<int>(i))].push_back(static_cast<int>(i) + 1);
    }
    for (size_t g = 0; g < program_.globals().size(); ++g) {
      int root = uf_.Find(Global(static_cast<int32_t>(g)));
      if (uf_.Mutated(root)) s.writes.insert(static_cast<int32_t>(g));
      by_root[root].push_back(-static_cast<int>(g) - 1);
    }
    for (auto& [root, members] : by_root) {
      bool mutated = uf_.Mutated(root);
      if (members.size() < 2 && !mutated) continue;
      std::sort(members.begin(), members.end());
      s.groups.emplace_back(std::move(members), mutated);
    }
    std::sort(s.groups.begin(), s.groups.end());
    return s;
  }

  int Global(int32_t g) const { return global_base_ + g; }

  void ApplySummary(FunctionId callee, const std::vector<int>& args, int result) {
    const Summary& s = summaries_[static_cast<size_t>(callee)];
    reads_.insert(s.reads.begin(), s.reads.end());
    writes_.insert(s.writes.begin(), s.writes.end());
    for (const auto& [members, mutated] : s.groups) {
      int first = -1;
      for (int m : members) {
        int elem;
        if (m == 0) {
          elem = result;
        } else if (m > 0) {
          elem = args[static_cast<size_t>(m - 1)];
        } else {
          elem = Global(-m - 1);
        }
        if (first < 0) {
          first = elem;
        } else {
          uf_.Union(first, elem);
        }
      }
      if (mutated && first >= 0) uf_.Mark(first);
    }
  }

  // Returns the unification element standing for the value of node `id`.
  int Walk(NodeId id) {
    const Node& n = program_.function(fn_).node(id);
    switch (n.kind) {
      case NodeKind::kLocal:
        return n.ref;
      case NodeKind::kGlobal:
        reads_.insert(n.ref);
        return Global(n.ref);
      case NodeKind::kIndex: {
        int base = Walk(n.kids[0]);
        Walk(n.kids[1]);
        return base;
      }
      case NodeKind::kArrayLit: {
        int t = uf_.Add();
        for (NodeId k : n.kids) uf_.Union(t, Walk(k));
        return t;
      }
      case NodeKind::kLet:
        uf_.Union(n.ref, Walk(n.kids[0]));
        return uf_.Add();
      case NodeKind::kAssign: {
        const Node& t = program_.function(fn_).node(n.kids[0]);
        int v = Walk(n.kids[1]);
        if (t.kind == NodeKind::kLocal) {
          uf_.Union(t.ref, v);
        } else if (t.kind == NodeKind::kGlobal) {
          writes_.insert(t.ref);
          uf_.Union(Global(t.ref), v);
        } else {
          int base = Walk(n.kids[0]);
          uf_.Union(base, v);
          uf_.Mark(base);
        }
        return uf_.Add();
      }
      case NodeKind::kReturn:
        if (!n.kids.empty()) uf_.Union(ret_, Walk(n.kids[0]));
        return uf_.Add();
      case NodeKind::kCall: {
        std::vector<int> args;
        for (NodeId k : n.kids) args.push_back(Walk(k));
        int result = uf_.Add();
        ApplySummary(n.ref, args, result);
        return result;
      }
      case NodeKind::kIndirectCall: {
        Walk(n.kids[0]);
        std::vector<int> args;
        for (size_t i = 1; i < n.kids.size(); ++i) args.push_back(Walk(n.kids[i]));
        int result = uf_.Add();
        auto it = indirect_.find({fn_, id});
        if (it != indirect_.end()) {
          for (FunctionId t : it->second) ApplySummary(t, args, result);
        }
        return result;
      }
      case NodeKind::kBuiltinCall: {
        std::vector<int> args;
        for (NodeId k : n.kids) args.push_back(Walk(k));
        if (n.builtin == Builtin::kPush) {
          uf_.Union(args[0], args[1]);
          uf_.Mark(args[0]);
        }
        return uf_.Add();
      }
      default:
        for (NodeId k : n.kids) Walk(k);
        return uf_.Add();
    }
  }

  const Program& program_;
  const std::map<std::pair<FunctionId, NodeId>, std::set<FunctionId>>& indirect_;
  std::vector<Summary> summaries_;
  std::vector<int> global_uf_;

  FunctionId fn_ = 0;
  UnionFind uf_;
  int global_base_ = 0;
  int ret_ = 0;
  std::set<int32_t> reads_;
  std::set<int32_t> writes_;
};

std::map<std::pair<FunctionId, NodeId>, std::set<FunctionId>> ResolveIndirect(
    const Program& program) {
  FlowAnalysis flow(program);
  flow.Solve();
  std::map<std::pair<FunctionId, NodeId>, std::set<FunctionId>> out;
  for (size_t f = 0; f < program.num_functions(); ++f) {
    const FunctionDef& def = program.function(static_cast<FunctionId>(f));
    for (size_t i = 0; i < def.nodes.size(); ++i) {
      if (def.nodes[i].kind == NodeKind::kIndirectCall) {
        FunctionId fid = static_cast<FunctionId>(f);
        NodeId nid = static_cast<NodeId>(i);
        out[{fid, nid}] = flow.Targets(fid, nid);
      }
    }
  }
  return out;
}

std::map<std::pair<FunctionId, NodeId>, std::set<FunctionId>> IndirectById(const Program& program,
                                                                           const CallGraph& cg) {
  std::map<std::pair<FunctionId, NodeId>, std::set<FunctionId>> out;
  for (const auto& [key, callees] : cg.resolution) {
    FunctionId caller = *program.FindFunction(key.first);
    if (program.function(caller).node(key.second).kind != NodeKind::kIndirectCall) {
      continue;
    }
    std::set<FunctionId>& targets = out[{caller, key.second}];
    for (const std::string& c : callees) targets.insert(*program.FindFunction(c));
  }
  return out;
}

}  // namespace

Digraph CallGraph::Adjacency() const {
  Digraph g;
  for (const std::string& n : nodes) g[n];
  for (const auto& [caller, site, callee] : edges) g[caller].insert(callee);
  return g;
}

CallGraph BuildCallGraph(const Program& program) {
  CallGraph cg;
  for (size_t f = 0; f < program.num_functions(); ++f) {
    cg.nodes.push_back(program.function(static_cast<FunctionId>(f)).name);
  }
  for (int b = 0; b < kNumBuiltins; ++b) {
    cg.nodes.emplace_back(BuiltinName(static_cast<Builtin>(b)));
  }
  auto indirect = ResolveIndirect(program);
  for (size_t f = 0; f < program.num_functions(); ++f) {
    const FunctionDef& def = program.function(static_cast<FunctionId>(f));
    for (size_t i = 0; i < def.nodes.size(); ++i) {
      const Node& n = def.nodes[i];
      NodeId site = static_cast<NodeId>(i);
      std::set<std::string> callees;
      if (n.kind == NodeKind::kCall) {
        callees.insert(program.function(n.ref).name);
      } else if (n.kind == NodeKind::kBuiltinCall) {
        callees.emplace(BuiltinName(n.builtin));
      } else if (n.kind == NodeKind::kIndirectCall) {
        for (FunctionId t : indirect[{static_cast<FunctionId>(f), site}]) {
          callees.insert(program.function(t).name);
        }
        if (callees.empty()) {
          cg.warnings.push_back(def.name + ": indirect call through '" + n.text + "' at line " +
                                std::to_string(n.line) + " has no possible callee");
        }
      } else {
        continue;
      }
      for (const std::string& c : callees) cg.edges.emplace(def.name, site, c);
      cg.resolution[{def.name, site}] = std::move(callees);
    }
  }
  return cg;
}

DependencyClosure ComputeClosure(const Digraph& graph) {
  // Tarjan's SCCs come out in reverse topological order, so every
  // successor component is complete before its predecessors.
  std::vector<std::string> names;
  std::map<std::string, int> index_of;
  for (const auto& [n, succ] : graph) {
    index_of[n] = static_cast<int>(names.size());
    names.push_back(n);
  }
  for (const auto& [n, succ] : graph) {
    for (const std::string& s : succ) {
      if (!index_of.count(s)) {
        index_of[s] = static_cast<int>(names.size());
        names.push_back(s);
      }
    }
  }
  size_t count = names.size();
  std::vector<std::vector<int>> adj(count);
  for (const auto& [n, succ] : graph) {
    for (const std::string& s : succ) {
      adj[static_cast<size_t>(index_of[n])].push_back(index_of[s]);
    }
  }

  std::vector<int> index(count, -1), low(count, 0), comp(count, -1);
  std::vector<bool> on_stack(count, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> comps;
  int counter = 0;
  std::function<void(int)> strong = [&](int v) {
    size_t vs = static_cast<size_t>(v);
    index[vs] = low[vs] = counter++;
    stack.push_back(v);
    on_stack[vs] = true;
    for (int w : adj[vs]) {
      size_t ws = static_cast<size_t>(w);
      if (index[ws] < 0) {
        strong(w);
        low[vs] = std::min(low[vs], low[ws]);
      } else if (on_stack[ws]) {
        low[vs] = std::min(low[vs], index[ws]);
      }
    }
    if (low[vs] == index[vs]) {
      std::vector<int> members;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[static_cast<size_t>(w)] = false;
        comp[static_cast<size_t>(w)] = static_cast<int>(comps.size());
        members.push_back(w);
      } while (w != v);
      comps.push_back(std::move(members));
    }
  };
  for (size_t v = 0; v < count; ++v) {
    if (index[v] < 0) strong(static_cast<int>(v));
  }

  std::vector<std::set<int>> reach(comps.size());
  for (size_t c = 0; c < comps.size(); ++c) {
    for (int v : comps[c]) {
      reach[c].insert(v);
      for (int w : adj[static_cast<size_t>(v)]) {
        size_t wc = static_cast<size_t>(comp[static_cast<size_t>(w)]);
        if (wc != c) reach[c].insert(reach[wc].begin(), reach[wc].end());
      }
    }
  }

  DependencyClosure out;
  for (size_t v = 0; v < count; ++v) {
    std::set<std::string>& s = out[names[v]];
    for (int w : reach[static_cast<size_t>(comp[v])]) s.insert(names[static_cast<size_t>(w)]);
  }
  return out;
}

DependencyClosure DependencyClosureOf(const CallGraph& cg) {
  return ComputeClosure(cg.Adjacency());
}

SideEffectSummary AnalyzeSideEffects(const Program& program, const CallGraph& cg) {
  auto indirect = IndirectById(program, cg);
  EffectAnalysis analysis(program, indirect);
  analysis.Solve();
  SideEffectSummary out;
  for (size_t f = 0; f < program.num_functions(); ++f) {
    FunctionId id = static_cast<FunctionId>(f);
    out[program.function(id).name] = analysis.Effects(id);
  }
  return out;
}

std::string NondetCause::ToString() const {
  switch (reason) {
    case NondetReason::kCallsTime:
      return "CallsTime";
    case NondetReason::kCallsRand:
      return "CallsRand";
    case NondetReason::kPerformsIo:
      return "PerformsIO";
    case NondetReason::kTaintedGlobal:
      return "TaintedGlobal(" + subject + ")";
    case NondetReason::kTransitiveVia:
      return "TransitiveVia(" + subject + ")";
  }
  return "?";
}

DeterminacyReport AnalyzeDeterminacy(const Program& program, const CallGraph& cg,
                                     const SideEffectSummary& effects,
                                     const DeterminacyOptions& options) {
  Digraph callees = cg.Adjacency();
  std::set<std::string> nondet;
  auto is_axiom = [&](const std::string& b) {
    if (b == BuiltinName(Builtin::kTimeNow) || b == BuiltinName(Builtin::kRand) ||
        b == BuiltinName(Builtin::kLogSize)) {
      return true;
    }
    return b == BuiltinName(Builtin::kPrint) && options.print_is_nondeterministic;
  };
  for (int b = 0; b < kNumBuiltins; ++b) {
    std::string name(BuiltinName(static_cast<Builtin>(b)));
    if (is_axiom(name)) nondet.insert(name);
  }

  // Least fixpoint of rules (ii) and (iii) seeded by the axioms.
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<std::string> tainted;
    if (options.global_taint) {
      for (const std::string& f : nondet) {
        auto it = effects.find(f);
        if (it != effects.end()) tainted.insert(it->second.writes.begin(), it->second.writes.end());
      }
    }
    for (size_t i = 0; i < program.num_functions(); ++i) {
      const std::string& f = program.function(static_cast<FunctionId>(i)).name;
      if (nondet.count(f)) continue;
      bool hit = false;
      for (const std::string& c : callees[f]) hit |= nondet.count(c) > 0;
      for (const std::string& g : effects.at(f).reads) hit |= tainted.count(g) > 0;
      if (hit) {
        nondet.insert(f);
        changed = true;
      }
    }
  }

  // Reasons, most specific first.
  std::set<std::string> tainted;
  if (options.global_taint) {
    for (const std::string& f : nondet) {
      auto it = effects.find(f);
      if (it != effects.end()) tainted.insert(it->second.writes.begin(), it->second.writes.end());
    }
  }
  DeterminacyReport report;
  for (size_t i = 0; i < program.num_functions(); ++i) {
    const std::string& f = program.function(static_cast<FunctionId>(i)).name;
    if (!nondet.count(f)) continue;
    const std::set<std::string>& cs = callees[f];
    NondetCause cause{NondetReason::kTransitiveVia, ""};
    if (cs.count(std::string(BuiltinName(Builtin::kTimeNow)))) {
      cause = {NondetReason::kCallsTime, ""};
    } else if (cs.count(std::string(BuiltinName(Builtin::kRand)))) {
      cause = {NondetReason::kCallsRand, ""};
    } else if (cs.count(std::string(BuiltinName(Builtin::kLogSize))) ||
               (options.print_is_nondeterministic &&
                cs.count(std::string(BuiltinName(Builtin::kPrint))))) {
      cause = {NondetReason::kPerformsIo, ""};
    } else {
      for (const std::string& c : cs) {
        if (nondet.count(c)) {
          cause = {NondetReason::kTransitiveVia, c};
          break;
        }
      }
      if (cause.subject.empty()) {
        for (const std::string& g : effects.at(f).reads) {
          if (tainted.count(g)) {
            cause = {NondetReason::kTaintedGlobal, g};
            break;
          }
        }
      }
    }
    report.nondet[f] = cause;
  }
  return report;
}

Analysis Analyze(const Program& program, const DeterminacyOptions& options) {
  Analysis a;
  a.call_graph = BuildCallGraph(program);
  a.closure = DependencyClosureOf(a.call_graph);
  a.effects = AnalyzeSideEffects(program, a.call_graph);
  a.determinacy = AnalyzeDeterminacy(program, a.call_graph, a.effects, options);
  return a;
}

std::string AnalysisJson(const Analysis& analysis) {
  using nlohmann::json;
  json doc;
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& [caller, site, callee] : analysis.call_graph.edges) {
    pairs.emplace(caller, callee);
  }
  json edges = json::array();
  for (const auto& [caller, callee] : pairs) edges.push_back({caller, callee});
  doc["call_graph"] = std::move(edges);
  json closure = json::object();
  for (const auto& [f, reach] : analysis.closure) closure[f] = reach;
  doc["closure"] = std::move(closure);
  json nondet = json::object();
  for (const auto& [f, cause] : analysis.determinacy.nondet) nondet[f] = cause.ToString();
  doc["nondet"] = std::move(nondet);
  json effects = json::object();
  for (const auto& [f, e] : analysis.effects) {
    effects[f] = {{"reads", e.reads}, {"writes", e.writes}, {"mutargs", e.mutargs}};
  }
  doc["effects"] = std::move(effects);
  std::vector<std::string> warnings = analysis.call_graph.warnings;
  std::sort(warnings.begin(), warnings.end());
  doc["warnings"] = warnings;
  return doc.dump(2) + "\n";
}

}  // namespace memomut
