#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bps/process_tree.hpp"
#include "bps/stream.hpp"

namespace bps {

/// Finite automaton over a tree's language. Activity labels are interned;
/// epsilon edges carry structural information: the leaf they stand for
/// (tau) or the decision (xor child / loop redo/exit) they commit to.
class TreeAutomaton {
public:
  struct Edge {
    int to = 0;
    int symbol = -1;               // index into alphabet(); -1 = epsilon
    std::int64_t leaf_id = -1;     // producing leaf for labeled edges
    std::int64_t decision_id = -1; // xor/loop node id for decision epsilons
    std::string decision_label;
  };

  /// Compiles the tree; `state_budget` caps the product construction for
  /// parallel blocks (throws StateSpaceBudgetExceeded).
  explicit TreeAutomaton(const ProcessTree& tree, std::size_t state_budget = 200000);

  int start() const { return start_; }
  int state_count() const { return static_cast<int>(out_.size()); }
  bool accepting(int s) const { return accept_[s]; }
  bool alive(int s) const { return alive_[s]; }
  const std::vector<Edge>& edges(int s) const { return out_[s]; }

  int symbol(const std::string& activity) const;  // -2 when unknown
  const std::vector<std::string>& alphabet() const { return alphabet_; }

  std::vector<int> intern(const std::vector<std::string>& seq) const;

  /// Language membership under fragment-kind semantics:
  ///   complete: start -> accepting; prefix: start -> anywhere;
  ///   postfix: anywhere -> accepting; infix: anywhere -> anywhere.
  bool accepts(const std::vector<std::string>& seq, FragmentKind kind = FragmentKind::Complete) const;

private:
  int start_ = 0;
  std::vector<char> accept_;
  std::vector<char> alive_;  // reachable and co-reachable
  std::vector<std::vector<Edge>> out_;
  std::vector<std::string> alphabet_;
  std::map<std::string, int> symbol_index_;

  friend struct AutomatonBuilder;
};

}  // namespace bps
