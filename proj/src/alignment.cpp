#include "bps/alignment.hpp"

#include <algorithm>
#include <queue>

#include "bps/error.hpp"

namespace bps {

namespace {

struct SearchNode {
  int cost;
  std::uint64_t order;  // insertion tie-break for determinism
  std::int64_t key;     // pos * n_states + state
};

struct NodeOrder {
  bool operator()(const SearchNode& a, const SearchNode& b) const {
    if (a.cost != b.cost) return a.cost > b.cost;
    return a.order > b.order;
  }
};

struct Back {
  std::int64_t from = -1;
  signed char kind = -1;  // 0 sync, 1 log, 2 model, 3 tau
  int edge = -1;          // edge index at `from`'s state, -1 for log moves
};

}  // namespace

Alignment align(const TreeAutomaton& a, const std::vector<std::string>& activities,
                FragmentKind kind, const AlignOptions& opts) {
  const bool open_start = kind == FragmentKind::Postfix || kind == FragmentKind::Infix;
  const bool open_end = kind == FragmentKind::Prefix || kind == FragmentKind::Infix;
  const bool need_accept = !open_end;
  const int n_states = a.state_count();
  const int n = static_cast<int>(activities.size());
  std::vector<int> trace = a.intern(activities);

  auto key_of = [&](int pos, int state) {
    return static_cast<std::int64_t>(pos) * n_states + state;
  };

  std::vector<int> dist(static_cast<std::size_t>(n + 1) * n_states, -1);
  std::vector<Back> back(dist.size());
  std::priority_queue<SearchNode, std::vector<SearchNode>, NodeOrder> queue;
  std::uint64_t order = 0;

  auto push = [&](int pos, int state, int cost, Back b) {
    std::int64_t k = key_of(pos, state);
    if (dist[k] >= 0 && dist[k] <= cost) return;
    dist[k] = cost;
    back[k] = b;
    queue.push({cost, order++, k});
  };

  if (open_start) {
    for (int s = 0; s < n_states; ++s)
      if (a.alive(s)) push(0, s, 0, {});
  } else {
    push(0, a.start(), 0, {});
  }

  std::size_t pops = 0;
  std::int64_t goal = -1;
  while (!queue.empty()) {
    SearchNode top = queue.top();
    queue.pop();
    if (dist[top.key] != top.cost) continue;  // stale entry
    if (++pops > opts.node_budget)
      fail(ErrorCode::StateSpaceBudgetExceeded, "alignment search budget exhausted");
    int pos = static_cast<int>(top.key / n_states);
    int state = static_cast<int>(top.key % n_states);
    if (pos == n && (!need_accept || a.accepting(state))) {
      goal = top.key;
      break;
    }
    if (pos < n) push(pos + 1, state, top.cost + 1, {top.key, 1, -1});  // log move
    const auto& edges = a.edges(state);
    for (int ei = 0; ei < static_cast<int>(edges.size()); ++ei) {
      const auto& e = edges[ei];
      if (e.symbol < 0) {
        push(pos, e.to, top.cost, {top.key, 3, ei});  // tau / structural
      } else {
        if (pos < n && trace[pos] == e.symbol)
          push(pos + 1, e.to, top.cost, {top.key, 0, ei});  // synchronous
        push(pos, e.to, top.cost + 1, {top.key, 2, ei});    // model move
      }
    }
  }
  if (goal < 0) fail(ErrorCode::StateSpaceBudgetExceeded, "no alignment found within budget");

  Alignment result;
  result.cost = dist[goal];
  result.open_start = open_start;
  result.open_end = open_end;
  std::vector<Move> rev;
  std::int64_t cur = goal;
  while (back[cur].from >= 0 || back[cur].kind >= 0) {
    const Back& b = back[cur];
    int pos = static_cast<int>(cur / n_states);
    Move m;
    switch (b.kind) {
      case 0:
      case 2: {
        int from_state = static_cast<int>(b.from % n_states);
        const auto& e = a.edges(from_state)[b.edge];
        m.kind = b.kind == 0 ? MoveKind::Sync : MoveKind::Model;
        m.activity = a.alphabet()[e.symbol];
        m.node_id = e.leaf_id;
        break;
      }
      case 1:
        m.kind = MoveKind::Log;
        m.activity = activities[pos - 1];
        break;
      case 3: {
        int from_state = static_cast<int>(b.from % n_states);
        const auto& e = a.edges(from_state)[b.edge];
        m.kind = MoveKind::Tau;
        m.node_id = e.leaf_id >= 0 ? e.leaf_id : e.decision_id;
        m.decision_id = e.decision_id;
        m.decision_label = e.decision_label;
        break;
      }
      default: break;
    }
    rev.push_back(std::move(m));
    cur = b.from;
    if (cur < 0) break;
  }
  result.moves.assign(rev.rbegin(), rev.rend());
  return result;
}

Alignment align(const ProcessTree& tree, const TraceFragment& fragment, const AlignOptions& opts) {
  TreeAutomaton automaton(tree);
  return align(automaton, fragment.activities(), fragment.kind, opts);
}

}  // namespace bps
