#include "bps/tree_automaton.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "bps/error.hpp"

namespace bps {

namespace {

/// Sub-automaton under construction: state ids are global, one entry and one
/// exit state each (exit accepting only at the top level).
struct Frag {
  int entry = 0;
  int exit = 0;
};

}  // namespace

struct AutomatonBuilder {
  TreeAutomaton& a;
  std::size_t budget;

  int new_state() {
    if (a.out_.size() >= budget)
      fail(ErrorCode::StateSpaceBudgetExceeded, "automaton exceeds " + std::to_string(budget) + " states");
    a.out_.emplace_back();
    a.accept_.push_back(0);
    return static_cast<int>(a.out_.size()) - 1;
  }

  void add_edge(int from, TreeAutomaton::Edge e) { a.out_[from].push_back(std::move(e)); }

  void eps(int from, int to) { add_edge(from, {to, -1, -1, -1, {}}); }

  void eps_decision(int from, int to, std::int64_t node, std::string label) {
    add_edge(from, {to, -1, -1, node, std::move(label)});
  }

  int intern_symbol(const std::string& act) {
    auto it = a.symbol_index_.find(act);
    if (it != a.symbol_index_.end()) return it->second;
    int idx = static_cast<int>(a.alphabet_.size());
    a.alphabet_.push_back(act);
    a.symbol_index_[act] = idx;
    return idx;
  }

  Frag build(const NodePtr& n) {
    switch (n->kind) {
      case NodeKind::Activity: {
        Frag f{new_state(), new_state()};
        add_edge(f.entry, {f.exit, intern_symbol(n->label), n->id, -1, {}});
        return f;
      }
      case NodeKind::Tau: {
        Frag f{new_state(), new_state()};
        add_edge(f.entry, {f.exit, -1, n->id, -1, {}});
        return f;
      }
      case NodeKind::Sequence: {
        Frag first = build(n->children.front());
        int prev_exit = first.exit;
        for (std::size_t i = 1; i < n->children.size(); ++i) {
          Frag c = build(n->children[i]);
          eps(prev_exit, c.entry);
          prev_exit = c.exit;
        }
        return {first.entry, prev_exit};
      }
      case NodeKind::Xor: {
        Frag f{new_state(), new_state()};
        auto labels = decision_labels(*n);
        for (std::size_t i = 0; i < n->children.size(); ++i) {
          Frag c = build(n->children[i]);
          eps_decision(f.entry, c.entry, n->id, labels[i]);
          eps(c.exit, f.exit);
        }
        return f;
      }
      case NodeKind::Loop: {
        Frag body = build(n->children[0]);
        Frag redo = build(n->children[1]);
        int done = new_state();
        eps_decision(body.exit, redo.entry, n->id, "redo");
        eps_decision(body.exit, done, n->id, "exit");
        eps(redo.exit, body.entry);
        return {body.entry, done};
      }
      case NodeKind::And: {
        // shuffle product of the children fragments
        std::vector<Frag> parts;
        std::size_t base = a.out_.size();
        for (const auto& c : n->children) parts.push_back(build(c));
        std::size_t local_count = a.out_.size() - base;
        (void)local_count;

        std::map<std::vector<int>, int> index;
        std::deque<std::vector<int>> queue;
        std::vector<int> start_tuple, exit_tuple;
        for (const Frag& p : parts) {
          start_tuple.push_back(p.entry);
          exit_tuple.push_back(p.exit);
        }
        auto state_of = [&](const std::vector<int>& tuple) {
          auto it = index.find(tuple);
          if (it != index.end()) return it->second;
          int s = new_state();
          index.emplace(tuple, s);
          queue.push_back(tuple);
          return s;
        };
        int entry = state_of(start_tuple);
        while (!queue.empty()) {
          std::vector<int> tuple = queue.front();
          queue.pop_front();
          int from = index[tuple];
          for (std::size_t i = 0; i < tuple.size(); ++i) {
            for (const TreeAutomaton::Edge& e : a.out_[tuple[i]]) {
              std::vector<int> next = tuple;
              next[i] = e.to;
              TreeAutomaton::Edge pe = e;
              pe.to = state_of(next);
              add_edge(from, pe);
            }
          }
        }
        return {entry, index[exit_tuple]};
      }
    }
    fail(ErrorCode::EmptyInput, "unreachable node kind");
  }
};

TreeAutomaton::TreeAutomaton(const ProcessTree& tree, std::size_t state_budget) {
  if (!tree.root()) fail(ErrorCode::EmptyInput, "cannot compile empty tree");
  AutomatonBuilder builder{*this, state_budget};
  Frag f = builder.build(tree.root());
  start_ = f.entry;
  accept_[f.exit] = 1;

  // trim: reachable from start and co-reachable to accept
  std::vector<char> reach(out_.size(), 0);
  std::deque<int> q{start_};
  reach[start_] = 1;
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    for (const Edge& e : out_[s]) {
      if (!reach[e.to]) {
        reach[e.to] = 1;
        q.push_back(e.to);
      }
    }
  }
  std::vector<std::vector<int>> rev(out_.size());
  for (std::size_t s = 0; s < out_.size(); ++s)
    for (const Edge& e : out_[s]) rev[e.to].push_back(static_cast<int>(s));
  std::vector<char> coreach(out_.size(), 0);
  for (std::size_t s = 0; s < out_.size(); ++s) {
    if (accept_[s]) {
      coreach[s] = 1;
      q.push_back(static_cast<int>(s));
    }
  }
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    for (int p : rev[s]) {
      if (!coreach[p]) {
        coreach[p] = 1;
        q.push_back(p);
      }
    }
  }
  alive_.assign(out_.size(), 0);
  for (std::size_t s = 0; s < out_.size(); ++s) alive_[s] = reach[s] && coreach[s];
}

int TreeAutomaton::symbol(const std::string& activity) const {
  auto it = symbol_index_.find(activity);
  return it == symbol_index_.end() ? -2 : it->second;
}

std::vector<int> TreeAutomaton::intern(const std::vector<std::string>& seq) const {
  std::vector<int> out;
  out.reserve(seq.size());
  for (const auto& s : seq) out.push_back(symbol(s));
  return out;
}

namespace {

void closure(const TreeAutomaton& a, std::set<int>& states) {
  std::deque<int> q(states.begin(), states.end());
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    for (const auto& e : a.edges(s)) {
      if (e.symbol < 0 && !states.count(e.to)) {
        states.insert(e.to);
        q.push_back(e.to);
      }
    }
  }
}

}  // namespace

bool TreeAutomaton::accepts(const std::vector<std::string>& seq, FragmentKind kind) const {
  bool open_start = kind == FragmentKind::Postfix || kind == FragmentKind::Infix;
  bool open_end = kind == FragmentKind::Prefix || kind == FragmentKind::Infix;

  std::set<int> states;
  if (open_start) {
    for (int s = 0; s < state_count(); ++s)
      if (alive_[s]) states.insert(s);
  } else {
    states.insert(start_);
  }
  closure(*this, states);

  for (const std::string& act : seq) {
    int sym = symbol(act);
    if (sym < 0) return false;
    std::set<int> next;
    for (int s : states)
      for (const Edge& e : out_[s])
        if (e.symbol == sym) next.insert(e.to);
    closure(*this, next);
    states.swap(next);
    if (states.empty()) return false;
  }
  if (open_end) return !states.empty();
  for (int s : states)
    if (accept_[s]) return true;
  return false;
}

}  // namespace bps
