#include "bps/process_tree.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "bps/error.hpp"

namespace bps {

namespace {

NodePtr make_node(NodeKind kind, std::string label, std::vector<NodePtr> children,
                  std::int64_t id) {
  auto n = std::make_shared<TreeNode>();
  n->kind = kind;
  n->label = std::move(label);
  n->children = std::move(children);
  n->id = id;
  return n;
}

}  // namespace

NodePtr TreeBuilder::activity(const std::string& label) {
  return make_node(NodeKind::Activity, label, {}, next++);
}

NodePtr TreeBuilder::tau() { return make_node(NodeKind::Tau, "", {}, next++); }

NodePtr TreeBuilder::sequence(std::vector<NodePtr> children) {
  return make_node(NodeKind::Sequence, "", std::move(children), next++);
}

NodePtr TreeBuilder::exclusive(std::vector<NodePtr> children) {
  return make_node(NodeKind::Xor, "", std::move(children), next++);
}

NodePtr TreeBuilder::parallel(std::vector<NodePtr> children) {
  return make_node(NodeKind::And, "", std::move(children), next++);
}

NodePtr TreeBuilder::loop(NodePtr body, NodePtr redo) {
  return make_node(NodeKind::Loop, "", {std::move(body), std::move(redo)}, next++);
}

NodePtr TreeBuilder::loop_nary(NodePtr body, std::vector<NodePtr> redos) {
  if (redos.empty()) return loop(std::move(body), tau());
  if (redos.size() == 1) return loop(std::move(body), std::move(redos[0]));
  return loop(std::move(body), exclusive(std::move(redos)));
}

void validate_tree(const NodePtr& node) {
  if (!node) fail(ErrorCode::EmptyInput, "null tree node");
  switch (node->kind) {
    case NodeKind::Activity:
      if (node->label.empty()) fail(ErrorCode::EmptyInput, "activity leaf without label");
      if (!node->children.empty()) fail(ErrorCode::EmptyInput, "leaf with children");
      break;
    case NodeKind::Tau:
      if (!node->children.empty()) fail(ErrorCode::EmptyInput, "tau with children");
      break;
    case NodeKind::Sequence:
    case NodeKind::Xor:
    case NodeKind::And:
      if (node->children.size() < 2)
        fail(ErrorCode::EmptyInput, "operator needs at least two children");
      break;
    case NodeKind::Loop:
      if (node->children.size() != 2) fail(ErrorCode::EmptyInput, "loop must be (do, redo)");
      break;
  }
  for (const auto& c : node->children) validate_tree(c);
}

std::vector<std::string> ProcessTree::alphabet() const {
  std::set<std::string> acts;
  std::function<void(const NodePtr&)> walk = [&](const NodePtr& n) {
    if (!n) return;
    if (n->kind == NodeKind::Activity) acts.insert(n->label);
    for (const auto& c : n->children) walk(c);
  };
  walk(root_);
  return {acts.begin(), acts.end()};
}

namespace {

const char* kSeqSym = "→";   // →
const char* kXorSym = "×";   // ×
const char* kAndSym = "∧";   // ∧
const char* kLoopSym = "⟲";  // ⟲
const char* kTauSym = "τ";   // τ

void print_rec(const NodePtr& n, std::string& out) {
  switch (n->kind) {
    case NodeKind::Activity: out += n->label; return;
    case NodeKind::Tau: out += kTauSym; return;
    case NodeKind::Sequence: out += kSeqSym; break;
    case NodeKind::Xor: out += kXorSym; break;
    case NodeKind::And: out += kAndSym; break;
    case NodeKind::Loop: out += kLoopSym; break;
  }
  out += '(';
  for (std::size_t i = 0; i < n->children.size(); ++i) {
    if (i) out += ", ";
    print_rec(n->children[i], out);
  }
  out += ')';
}

struct Parser {
  const std::string& text;
  std::size_t pos = 0;
  TreeBuilder builder;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n')) ++pos;
  }

  bool consume(const std::string& tok) {
    if (text.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }

  NodePtr parse_node() {
    skip_ws();
    NodeKind op;
    if (consume(kSeqSym) || consume("seq")) op = NodeKind::Sequence;
    else if (consume(kXorSym) || consume("xor")) op = NodeKind::Xor;
    else if (consume(kAndSym) || consume("and")) op = NodeKind::And;
    else if (consume(kLoopSym) || consume("loop")) op = NodeKind::Loop;
    else return parse_leaf();
    skip_ws();
    if (!consume("(")) fail(ErrorCode::EmptyInput, "expected '(' at " + std::to_string(pos));
    std::vector<NodePtr> children;
    while (true) {
      children.push_back(parse_node());
      skip_ws();
      if (consume(",")) continue;
      if (consume(")")) break;
      fail(ErrorCode::EmptyInput, "expected ',' or ')' at " + std::to_string(pos));
    }
    switch (op) {
      case NodeKind::Sequence: return builder.sequence(std::move(children));
      case NodeKind::Xor: return builder.exclusive(std::move(children));
      case NodeKind::And: return builder.parallel(std::move(children));
      case NodeKind::Loop: {
        if (children.size() < 2) fail(ErrorCode::EmptyInput, "loop needs (do, redo)");
        NodePtr body = children.front();
        children.erase(children.begin());
        return builder.loop_nary(std::move(body), std::move(children));
      }
      default: break;
    }
    fail(ErrorCode::EmptyInput, "unreachable");
  }

  NodePtr parse_leaf() {
    skip_ws();
    if (consume(kTauSym) || consume("tau")) return builder.tau();
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != ',' && text[pos] != '(' && text[pos] != ')') ++pos;
    std::string label = text.substr(start, pos - start);
    while (!label.empty() && (label.back() == ' ' || label.back() == '\t')) label.pop_back();
    if (label.empty()) fail(ErrorCode::EmptyInput, "empty label at " + std::to_string(start));
    return builder.activity(label);
  }
};

}  // namespace

std::string print_tree(const NodePtr& node) {
  std::string out;
  if (node) print_rec(node, out);
  return out;
}

std::string print_tree(const ProcessTree& tree) { return print_tree(tree.root()); }

ProcessTree parse_tree(const std::string& text) {
  Parser p{text};
  NodePtr root = p.parse_node();
  p.skip_ws();
  if (p.pos != text.size())
    fail(ErrorCode::EmptyInput, "trailing characters at " + std::to_string(p.pos));
  validate_tree(root);
  return p.builder.finish(root);
}

TreeIndex TreeIndex::build(const ProcessTree& tree) {
  TreeIndex index;
  std::function<void(const NodePtr&)> walk = [&](const NodePtr& n) {
    index.by_id[n->id] = n.get();
    for (const auto& c : n->children) {
      index.parent[c->id] = n->id;
      walk(c);
    }
  };
  if (tree.root()) walk(tree.root());
  return index;
}

std::vector<std::int64_t> TreeIndex::ancestors(std::int64_t id) const {
  std::vector<std::int64_t> out;
  std::int64_t cur = id;
  out.push_back(cur);
  while (true) {
    auto it = parent.find(cur);
    if (it == parent.end()) break;
    cur = it->second;
    out.push_back(cur);
  }
  return out;
}

std::int64_t TreeIndex::lowest_common_ancestor(std::int64_t a, std::int64_t b) const {
  auto pa = ancestors(a);
  std::set<std::int64_t> seen(pa.begin(), pa.end());
  std::int64_t cur = b;
  while (true) {
    if (seen.count(cur)) return cur;
    auto it = parent.find(cur);
    if (it == parent.end()) return cur;  // root
    cur = it->second;
  }
}

std::vector<std::string> decision_labels(const TreeNode& node) {
  if (node.kind == NodeKind::Loop) return {"redo", "exit"};
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const TreeNode& c = *node.children[i];
    std::string label;
    if (c.kind == NodeKind::Activity) label = c.label;
    else if (c.kind == NodeKind::Tau) label = "tau";
    else label = "branch" + std::to_string(i);
    labels.push_back(std::move(label));
  }
  // de-duplicate repeated labels by position suffix
  std::map<std::string, int> count;
  for (const auto& l : labels) ++count[l];
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (count[labels[i]] > 1) {
      labels[i] += "#" + std::to_string(seen[labels[i]]++);
    }
  }
  return labels;
}

std::vector<DecisionPoint> decision_points(const ProcessTree& tree) {
  std::vector<DecisionPoint> points;
  std::function<void(const NodePtr&)> walk = [&](const NodePtr& n) {
    if (n->kind == NodeKind::Xor || n->kind == NodeKind::Loop) {
      points.push_back({n->id, n->kind == NodeKind::Loop, decision_labels(*n)});
    }
    for (const auto& c : n->children) walk(c);
  };
  if (tree.root()) walk(tree.root());
  return points;
}

namespace {

constexpr double kSampleRedoProb = 0.4;
constexpr int kSampleLoopCap = 25;

void sample_rec(const NodePtr& n, Rng& rng, std::vector<std::string>& out) {
  switch (n->kind) {
    case NodeKind::Activity: out.push_back(n->label); return;
    case NodeKind::Tau: return;
    case NodeKind::Sequence:
      for (const auto& c : n->children) sample_rec(c, rng, out);
      return;
    case NodeKind::Xor: sample_rec(n->children[rng.below(n->children.size())], rng, out); return;
    case NodeKind::And: {
      std::vector<std::vector<std::string>> parts(n->children.size());
      for (std::size_t i = 0; i < n->children.size(); ++i) sample_rec(n->children[i], rng, parts[i]);
      // random order-preserving interleave
      std::vector<std::size_t> cursor(parts.size(), 0);
      while (true) {
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < parts.size(); ++i)
          if (cursor[i] < parts[i].size()) open.push_back(i);
        if (open.empty()) break;
        std::size_t pick = open[rng.below(open.size())];
        out.push_back(parts[pick][cursor[pick]++]);
      }
      return;
    }
    case NodeKind::Loop: {
      sample_rec(n->children[0], rng, out);
      for (int i = 0; i < kSampleLoopCap && rng.bernoulli(kSampleRedoProb); ++i) {
        sample_rec(n->children[1], rng, out);
        sample_rec(n->children[0], rng, out);
      }
      return;
    }
  }
}

}  // namespace

std::vector<std::string> sample_one(const NodePtr& node, Rng& rng) {
  std::vector<std::string> out;
  if (node) sample_rec(node, rng, out);
  return out;
}

std::vector<std::vector<std::string>> language_sample(const ProcessTree& tree, int n,
                                                      std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  std::vector<std::vector<std::string>> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(sample_one(tree.root(), rng));
  return out;
}

}  // namespace bps
