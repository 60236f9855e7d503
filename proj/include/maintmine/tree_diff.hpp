#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "maintmine/error.hpp"
#include "maintmine/source_tree.hpp"

namespace maintmine {

enum class EditKind { insert, remove, update, move };

inline std::string_view to_string(EditKind k) noexcept {
  switch (k) {
  case EditKind::insert:
    return "insert";
  case EditKind::remove:
    return "delete";
  case EditKind::update:
    return "update";
  case EditKind::move:
    return "move";
  }
  return "?";
}

// One tree edit. `node` is an id in the working tree: ids of the before-tree
// (comment-free, preorder) for existing nodes, consecutive new ids for
// inserted ones. `kind` is the kind of the edited node; `value` is the new
// value for insert/update, `old_value` the previous one for update/delete.
// `parent`/`position` locate insert and move targets; for a move the
// position is taken after the node was detached.
struct EditOp {
  EditKind op = EditKind::insert;
  NodeId node = kNoNode;
  NodeKind kind = NodeKind::statement;
  std::string value;
  std::string old_value;
  NodeId parent = kNoNode;
  std::size_t position = 0;

  bool operator==(const EditOp &) const = default;
};

using EditScript = std::vector<EditOp>;

inline nlohmann::ordered_json to_json(const EditOp &op) {
  nlohmann::ordered_json j;
  j["op"] = std::string(to_string(op.op));
  j["node"] = op.node;
  j["kind"] = std::string(to_string(op.kind));
  switch (op.op) {
  case EditKind::insert:
    j["value"] = op.value;
    j["parent"] = op.parent;
    j["position"] = op.position;
    break;
  case EditKind::remove:
    j["value"] = op.old_value;
    break;
  case EditKind::update:
    j["old"] = op.old_value;
    j["new"] = op.value;
    break;
  case EditKind::move:
    j["parent"] = op.parent;
    j["position"] = op.position;
    break;
  }
  return j;
}

// Dice coefficient over character bigram multisets. Strings shorter than two
// characters compare by equality.
inline double bigram_similarity(std::string_view a, std::string_view b) {
  if (a.size() < 2 || b.size() < 2)
    return a == b ? 1.0 : 0.0;
  auto grams = [](std::string_view s) {
    std::vector<std::uint16_t> g;
    g.reserve(s.size() - 1);
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
      g.push_back(static_cast<std::uint16_t>(static_cast<unsigned char>(s[i]) << 8 | static_cast<unsigned char>(s[i + 1])));
    std::sort(g.begin(), g.end());
    return g;
  };
  auto ga = grams(a), gb = grams(b);
  std::size_t common = 0;
  for (std::size_t i = 0, j = 0; i < ga.size() && j < gb.size();) {
    if (ga[i] == gb[j]) {
      ++common, ++i, ++j;
    } else if (ga[i] < gb[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return 2.0 * static_cast<double>(common) / static_cast<double>(ga.size() + gb.size());
}

struct MatchParams {
  double leaf_similarity = 0.6;
  double inner_ratio = 0.5;
  // leaves left over under an already matched parent pair
  double sibling_similarity = 0.4;
};

namespace detail {

// Mutable copy of a tree used while generating and applying scripts.
class WorkTree {
public:
  struct Node {
    NodeKind kind;
    std::string value;
    LineRange range;
    NodeId parent;
    std::vector<NodeId> children;
    bool alive = true;
  };

  explicit WorkTree(const SourceTree &t) {
    nodes_.reserve(t.size());
    for (NodeId i = 0; i < t.size(); ++i)
      nodes_.push_back({t[i].kind, t[i].value, t[i].range, t[i].parent, t[i].children});
  }

  std::size_t size() const { return nodes_.size(); }
  Node &operator[](NodeId id) { return nodes_[id]; }
  const Node &operator[](NodeId id) const { return nodes_[id]; }

  void check_live(NodeId id, std::size_t step) const {
    if (id >= nodes_.size() || !nodes_[id].alive)
      throw DataError("edit " + std::to_string(step) + ": no node " + std::to_string(id));
  }

  NodeId insert(NodeKind kind, std::string value, NodeId parent, std::size_t pos) {
    NodeId id = nodes_.size();
    nodes_.push_back({kind, std::move(value), {}, parent, {}});
    attach(id, parent, pos);
    return id;
  }

  void detach(NodeId id) {
    auto &siblings = nodes_[nodes_[id].parent].children;
    siblings.erase(std::find(siblings.begin(), siblings.end(), id));
    nodes_[id].parent = kNoNode;
  }

  void attach(NodeId id, NodeId parent, std::size_t pos) {
    auto &siblings = nodes_[parent].children;
    siblings.insert(siblings.begin() + static_cast<std::ptrdiff_t>(pos), id);
    nodes_[id].parent = parent;
  }

  void remove(NodeId id) {
    detach(id);
    nodes_[id].alive = false;
  }

  std::size_t index_in_parent(NodeId id) const {
    const auto &siblings = nodes_[nodes_[id].parent].children;
    return static_cast<std::size_t>(std::find(siblings.begin(), siblings.end(), id) - siblings.begin());
  }

  bool is_ancestor(NodeId a, NodeId n) const {
    for (; n != kNoNode; n = nodes_[n].parent)
      if (n == a)
        return true;
    return false;
  }

  void postorder(NodeId n, std::vector<NodeId> &out) const {
    for (NodeId c : nodes_[n].children)
      postorder(c, out);
    out.push_back(n);
  }

  SourceTree to_tree() const {
    SourceTree t;
    t[0].kind = nodes_[0].kind;
    t[0].value = nodes_[0].value;
    t[0].range = nodes_[0].range;
    copy(0, t, 0);
    return t;
  }

private:
  std::vector<Node> nodes_;

  void copy(NodeId from, SourceTree &t, NodeId to) const {
    for (NodeId c : nodes_[from].children) {
      NodeId id = t.add(nodes_[c].kind, nodes_[c].value, nodes_[c].range, to);
      copy(c, t, id);
    }
  }
};

inline bool is_leaf(const SourceTree &t, NodeId n) {
  return n != t.root() && t[n].kind == NodeKind::statement && t[n].children.empty();
}

inline std::string ancestor_path(const SourceTree &t, NodeId n) {
  std::string path;
  for (NodeId p = t[n].parent; p != kNoNode; p = t[p].parent) {
    path += compact(t[p].value);
    path.push_back('\x1f');
  }
  return path;
}

// Two-phase matching. Returns partner arrays indexed by node id of a and b.
class Matcher {
public:
  Matcher(const SourceTree &a, const SourceTree &b, MatchParams params)
      : a_(a), b_(b), p_(params), m1_(a.size(), kNoNode), m2_(b.size(), kNoNode) {}

  std::pair<std::vector<NodeId>, std::vector<NodeId>> run() {
    link(a_.root(), b_.root());
    match_leaves();
    match_inner();
    match_under_partners();
    return {std::move(m1_), std::move(m2_)};
  }

private:
  const SourceTree &a_;
  const SourceTree &b_;
  MatchParams p_;
  std::vector<NodeId> m1_, m2_;

  void link(NodeId x, NodeId y) {
    m1_[x] = y;
    m2_[y] = x;
  }

  void match_leaves() {
    std::vector<NodeId> la, lb;
    for (NodeId n : a_.preorder())
      if (is_leaf(a_, n))
        la.push_back(n);
    for (NodeId n : b_.preorder())
      if (is_leaf(b_, n))
        lb.push_back(n);

    // Identical text first, preferring an identical ancestor chain.
    for (bool with_path : {true, false}) {
      std::map<std::string, std::deque<NodeId>> pending;
      auto key = [&](const SourceTree &t, NodeId n) {
        std::string k = compact(t[n].value);
        if (with_path)
          k += '\x1e' + ancestor_path(t, n);
        return k;
      };
      for (NodeId y : lb)
        if (m2_[y] == kNoNode)
          pending[key(b_, y)].push_back(y);
      for (NodeId x : la) {
        if (m1_[x] != kNoNode)
          continue;
        auto it = pending.find(key(a_, x));
        if (it == pending.end() || it->second.empty())
          continue;
        link(x, it->second.front());
        it->second.pop_front();
      }
    }

    struct Candidate {
      double sim;
      bool same_parent;
      std::size_t i, j;
    };
    std::vector<Candidate> cands;
    std::vector<std::string> va, vb;
    std::vector<std::size_t> ia, ib;
    for (std::size_t i = 0; i < la.size(); ++i)
      if (m1_[la[i]] == kNoNode) {
        ia.push_back(i);
        va.push_back(compact(a_[la[i]].value));
      }
    for (std::size_t j = 0; j < lb.size(); ++j)
      if (m2_[lb[j]] == kNoNode) {
        ib.push_back(j);
        vb.push_back(compact(b_[lb[j]].value));
      }
    for (std::size_t s = 0; s < ia.size(); ++s)
      for (std::size_t t = 0; t < ib.size(); ++t) {
        double sim = bigram_similarity(va[s], vb[t]);
        if (sim >= p_.leaf_similarity) {
          NodeId pa = a_[la[ia[s]]].parent, pb = b_[lb[ib[t]]].parent;
          cands.push_back({sim, compact(a_[pa].value) == compact(b_[pb].value), ia[s], ib[t]});
        }
      }
    std::sort(cands.begin(), cands.end(), [](const Candidate &x, const Candidate &y) {
      if (x.sim != y.sim)
        return x.sim > y.sim;
      if (x.same_parent != y.same_parent)
        return x.same_parent;
      return std::pair(x.i, x.j) < std::pair(y.i, y.j);
    });
    for (const auto &c : cands)
      if (m1_[la[c.i]] == kNoNode && m2_[lb[c.j]] == kNoNode)
        link(la[c.i], lb[c.j]);
  }

  static std::vector<std::size_t> leaf_counts(const SourceTree &t) {
    std::vector<std::size_t> counts(t.size(), 0);
    for (NodeId n : t.postorder()) {
      if (is_leaf(t, n))
        counts[n] = 1;
      if (t[n].parent != kNoNode)
        counts[t[n].parent] += counts[n];
    }
    return counts;
  }

  void collect_leaves(NodeId n, std::vector<NodeId> &out) const {
    if (is_leaf(a_, n))
      out.push_back(n);
    for (NodeId c : a_[n].children)
      collect_leaves(c, out);
  }

  void match_inner() {
    const auto ca = leaf_counts(a_), cb = leaf_counts(b_);
    std::vector<NodeId> inner_b;
    for (NodeId y : b_.preorder())
      if (y != b_.root() && !is_leaf(b_, y))
        inner_b.push_back(y);

    for (NodeId x : a_.postorder()) {
      if (x == a_.root() || is_leaf(a_, x) || m1_[x] != kNoNode)
        continue;
      // Matched leaf descendants shared with each candidate ancestor in b.
      std::map<NodeId, std::size_t> common;
      std::vector<NodeId> leaves;
      collect_leaves(x, leaves);
      for (NodeId l : leaves) {
        NodeId partner = m1_[l];
        if (partner == kNoNode)
          continue;
        for (NodeId y = b_[partner].parent; y != kNoNode && y != b_.root(); y = b_[y].parent)
          ++common[y];
      }
      const std::string vx = compact(a_[x].value);
      NodeId best = kNoNode;
      double best_ratio = -1.0, best_sim = -1.0;
      for (NodeId y : inner_b) {
        if (m2_[y] != kNoNode || b_[y].kind != a_[x].kind)
          continue;
        const double sim = bigram_similarity(vx, compact(b_[y].value));
        double ratio;
        if (ca[x] == 0 || cb[y] == 0) {
          if (sim < p_.leaf_similarity)
            continue;
          ratio = 0.0;
        } else {
          auto it = common.find(y);
          const auto shared = it == common.end() ? 0.0 : static_cast<double>(it->second);
          // identical headers stay candidates even without shared leaves
          if (shared == 0 && compact(b_[y].value) != vx)
            continue;
          ratio = shared / static_cast<double>(std::max(ca[x], cb[y]));
          // A node that grew or shrank keeps its partner when the headers
          // agree and most of the smaller side is shared.
          const bool grown = sim >= p_.leaf_similarity &&
                             shared / static_cast<double>(std::min(ca[x], cb[y])) >= p_.inner_ratio;
          if (ratio < p_.inner_ratio && !grown && compact(b_[y].value) != vx)
            continue;
        }
        if (ratio > best_ratio || (ratio == best_ratio && sim > best_sim)) {
          best = y;
          best_ratio = ratio;
          best_sim = sim;
        }
      }
      if (best != kNoNode)
        link(x, best);
    }
  }

  // Top-down second chance: below a matched pair, unmatched inner children
  // pair up on identical headers and unmatched leaf children on a lower
  // similarity bar. Small bodies leave too few leaves for the bottom-up pass.
  void match_under_partners() {
    for (NodeId x : a_.preorder()) {
      const NodeId y = m1_[x];
      if (y == kNoNode)
        continue;
      for (NodeId cx : a_[x].children) {
        if (m1_[cx] != kNoNode || is_leaf(a_, cx))
          continue;
        for (NodeId cy : b_[y].children)
          if (m2_[cy] == kNoNode && !is_leaf(b_, cy) && b_[cy].kind == a_[cx].kind &&
              compact(b_[cy].value) == compact(a_[cx].value)) {
            link(cx, cy);
            break;
          }
      }
      struct Candidate {
        double sim;
        NodeId cx, cy;
      };
      std::vector<Candidate> cands;
      for (NodeId cx : a_[x].children) {
        if (m1_[cx] != kNoNode || !is_leaf(a_, cx))
          continue;
        for (NodeId cy : b_[y].children) {
          if (m2_[cy] != kNoNode || !is_leaf(b_, cy) || b_[cy].kind != a_[cx].kind)
            continue;
          const double sim = bigram_similarity(compact(a_[cx].value), compact(b_[cy].value));
          if (sim >= p_.sibling_similarity)
            cands.push_back({sim, cx, cy});
        }
      }
      std::stable_sort(cands.begin(), cands.end(), [](const Candidate &p, const Candidate &q) { return p.sim > q.sim; });
      for (const auto &c : cands)
        if (m1_[c.cx] == kNoNode && m2_[c.cy] == kNoNode)
          link(c.cx, c.cy);
    }
  }
};

// Chawathe et al. edit script generation over a fixed matching.
class ScriptBuilder {
public:
  ScriptBuilder(const SourceTree &a, const SourceTree &b, std::vector<NodeId> m1, std::vector<NodeId> m2)
      : b_(b), w_(a), m1_(std::move(m1)), m2_(std::move(m2)), order1_(a.size(), false), order2_(b.size(), false) {}

  EditScript run() {
    std::deque<NodeId> queue = {b_.root()};
    while (!queue.empty()) {
      NodeId x = queue.front();
      queue.pop_front();
      for (NodeId c : b_[x].children)
        queue.push_back(c);
      visit(x);
    }
    std::vector<NodeId> post;
    w_.postorder(0, post);
    for (NodeId w : post)
      if (w != 0 && m1_[w] == kNoNode) {
        EditOp op{EditKind::remove, w, w_[w].kind, {}, w_[w].value, kNoNode, 0};
        w_.remove(w);
        script_.push_back(std::move(op));
      }
    return std::move(script_);
  }

private:
  const SourceTree &b_;
  WorkTree w_;
  std::vector<NodeId> m1_, m2_;
  std::vector<bool> order1_, order2_;
  EditScript script_;

  void visit(NodeId x) {
    NodeId w;
    if (x == b_.root()) {
      w = m2_[x];
    } else {
      const NodeId z = m2_[b_[x].parent];
      if (m2_[x] == kNoNode) {
        std::size_t k = find_pos(x);
        w = w_.insert(b_[x].kind, b_[x].value, z, k);
        m1_.push_back(x);
        order1_.push_back(true);
        m2_[x] = w;
        order2_[x] = true;
        script_.push_back({EditKind::insert, w, b_[x].kind, b_[x].value, {}, z, k});
      } else {
        w = m2_[x];
        if (compact(w_[w].value) != compact(b_[x].value)) {
          script_.push_back({EditKind::update, w, w_[w].kind, b_[x].value, w_[w].value, kNoNode, 0});
          w_[w].value = b_[x].value;
        }
        if (w_[w].parent != z)
          move(w, x, z);
      }
    }
    align_children(w, x);
  }

  void move(NodeId w, NodeId x, NodeId z) {
    w_.detach(w);
    std::size_t k = find_pos(x);
    w_.attach(w, z, k);
    order1_[w] = true;
    order2_[x] = true;
    script_.push_back({EditKind::move, w, w_[w].kind, {}, {}, z, k});
  }

  std::size_t find_pos(NodeId x) const {
    const auto &siblings = b_[b_[x].parent].children;
    NodeId v = kNoNode;
    for (NodeId s : siblings) {
      if (s == x)
        break;
      if (order2_[s])
        v = s;
    }
    if (v == kNoNode)
      return 0;
    return w_.index_in_parent(m2_[v]) + 1;
  }

  void align_children(NodeId w, NodeId x) {
    for (NodeId c : w_[w].children)
      order1_[c] = false;
    for (NodeId c : b_[x].children)
      order2_[c] = false;
    std::vector<NodeId> s1, s2;
    for (NodeId c : w_[w].children)
      if (m1_[c] != kNoNode && b_[m1_[c]].parent == x)
        s1.push_back(c);
    for (NodeId c : b_[x].children)
      if (m2_[c] != kNoNode && w_[m2_[c]].parent == w)
        s2.push_back(c);

    // Longest common subsequence under the matching.
    const std::size_t n = s1.size(), m = s2.size();
    std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;)
      for (std::size_t j = m; j-- > 0;)
        lcs[i][j] = m1_[s1[i]] == s2[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    for (std::size_t i = 0, j = 0; i < n && j < m;) {
      if (m1_[s1[i]] == s2[j]) {
        order1_[s1[i]] = true;
        order2_[s2[j]] = true;
        ++i, ++j;
      } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
        ++i;
      } else {
        ++j;
      }
    }
    for (NodeId b : s2)
      if (!order2_[b])
        move(m2_[b], b, w);
  }
};

} // namespace detail

// Node partners between the comment-free forms of two trees:
// first[i] is the partner of before-node i (or kNoNode), second likewise.
inline std::pair<std::vector<NodeId>, std::vector<NodeId>> match_trees(const SourceTree &before,
                                                                      const SourceTree &after,
                                                                      MatchParams params = {}) {
  const SourceTree a = before.without_comments(), b = after.without_comments();
  return detail::Matcher(a, b, params).run();
}

// Edit script turning `before` into `after`. Comment nodes are ignored and
// node ids refer to before.without_comments().
inline EditScript diff_trees(const SourceTree &before, const SourceTree &after, MatchParams params = {}) {
  const SourceTree a = before.without_comments(), b = after.without_comments();
  auto [m1, m2] = detail::Matcher(a, b, params).run();
  return detail::ScriptBuilder(a, b, std::move(m1), std::move(m2)).run();
}

// Replays a script produced by diff_trees on the comment-free form of
// `before`. Throws DataError when an op does not fit the tree.
inline SourceTree apply_script(const SourceTree &before, const EditScript &script) {
  detail::WorkTree w(before.without_comments());
  for (std::size_t step = 0; step < script.size(); ++step) {
    const EditOp &op = script[step];
    auto bad = [&](const std::string &why) { return DataError("edit " + std::to_string(step) + ": " + why); };
    switch (op.op) {
    case EditKind::insert:
      w.check_live(op.parent, step);
      if (op.node != w.size())
        throw bad("insert id " + std::to_string(op.node) + " out of sequence");
      if (op.position > w[op.parent].children.size())
        throw bad("position out of range");
      w.insert(op.kind, op.value, op.parent, op.position);
      break;
    case EditKind::remove:
      w.check_live(op.node, step);
      if (op.node == 0 || !w[op.node].children.empty())
        throw bad("cannot delete node " + std::to_string(op.node));
      w.remove(op.node);
      break;
    case EditKind::update:
      w.check_live(op.node, step);
      w[op.node].value = op.value;
      break;
    case EditKind::move:
      w.check_live(op.node, step);
      w.check_live(op.parent, step);
      if (op.node == 0 || w.is_ancestor(op.node, op.parent))
        throw bad("cannot move node " + std::to_string(op.node));
      w.detach(op.node);
      if (op.position > w[op.parent].children.size())
        throw bad("position out of range");
      w.attach(op.node, op.parent, op.position);
      break;
    }
  }
  return w.to_tree();
}

} // namespace maintmine
