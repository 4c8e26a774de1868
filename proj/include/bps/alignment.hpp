#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bps/stream.hpp"
#include "bps/tree_automaton.hpp"

namespace bps {

enum class MoveKind { Sync, Log, Model, Tau };

struct Move {
  MoveKind kind;
  std::string activity;          // sync/log/model activity; empty for tau
  std::int64_t node_id = -1;     // leaf for sync/model, tau leaf or decision node for tau moves
  std::int64_t decision_id = -1; // set when this step commits an xor/loop choice
  std::string decision_label;
};

/// Cheapest explanation of a fragment on the model. Cost counts log moves
/// and visible model moves; tau and synchronous moves are free.
struct Alignment {
  std::vector<Move> moves;
  int cost = 0;
  bool open_start = false;
  bool open_end = false;

  std::vector<std::pair<std::int64_t, std::string>> decisions() const {
    std::vector<std::pair<std::int64_t, std::string>> out;
    for (const Move& m : moves)
      if (m.decision_id >= 0) out.emplace_back(m.decision_id, m.decision_label);
    return out;
  }
};

struct AlignOptions {
  std::size_t node_budget = 200000;  // max search-queue pops before giving up
};

/// Minimum-cost alignment via shortest path over the synchronous product of
/// the fragment and the tree automaton. Fragment kind selects open-start /
/// open-end semantics. Throws StateSpaceBudgetExceeded past the budget.
Alignment align(const TreeAutomaton& automaton, const std::vector<std::string>& activities,
                FragmentKind kind, const AlignOptions& opts = {});

Alignment align(const ProcessTree& tree, const TraceFragment& fragment,
                const AlignOptions& opts = {});

}  // namespace bps
