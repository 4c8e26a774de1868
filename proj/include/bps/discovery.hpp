#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bps/process_tree.hpp"

namespace bps {

struct DirectlyFollowsGraph {
  std::set<std::string> activities;
  std::map<std::pair<std::string, std::string>, std::int64_t> edges;
  std::map<std::string, std::int64_t> start_activities;
  std::map<std::string, std::int64_t> end_activities;
};

DirectlyFollowsGraph build_dfg(const std::vector<std::vector<std::string>>& traces);

/// Inductive Miner, infrequent variant: recursive xor/sequence/parallel/loop
/// cut detection over the (optionally noise-filtered) directly-follows
/// graph, falling through to a flower model. With noise_threshold = 0 every
/// input trace fits the result.
ProcessTree discover_initial_tree(const std::vector<std::vector<std::string>>& traces,
                                  double noise_threshold = 0.2);

}  // namespace bps
