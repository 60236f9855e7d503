#pragma once

// Source fixtures and random tree mutations shared by the distiller tests
// and the acceptance run.

#include <string>
#include <vector>

#include "maintmine/rng.hpp"
#include "maintmine/source_tree.hpp"

namespace maintmine::fixtures {

// Counter before and after: bump() changes one statement, reset() and
// current() are new.
inline const char *kBefore = R"(package demo;

public class Counter {
  private int count;

  // bumps the counter
  public void bump() {
    count = count + 1;
    log("bumped");
  }
}
)";

inline const char *kAfter = R"(package demo;

public class Counter {
  private int count;

  public void bump() {
    count = count + 2;
    log("bumped");
  }

  public void reset() {
  }

  public int current() {
  }
}
)";

// Plain nested tree used to generate random trees and mutations.
struct Node {
  NodeKind kind;
  std::string value;
  std::vector<Node> kids;
};

inline const std::vector<std::string> kWords = {"alpha", "beta", "gamma", "delta", "count", "total", "index", "value"};

inline std::string random_value(Rng &rng, NodeKind kind) {
  auto w = [&] { return kWords[rng.below(kWords.size())]; };
  switch (kind) {
  case NodeKind::class_decl:
    return "class " + w();
  case NodeKind::method:
    return "void " + w() + "(int " + w() + ")";
  default:
    switch (rng.below(3)) {
    case 0:
      return w() + " = " + w() + " + " + std::to_string(rng.below(3)) + ";";
    case 1:
      return w() + "(" + w() + ");";
    default:
      return "if (" + w() + " > " + std::to_string(rng.below(3)) + ")";
    }
  }
}

inline Node random_subtree(Rng &rng, NodeKind kind, int depth) {
  Node n{kind, random_value(rng, kind), {}};
  std::size_t kids = depth <= 0 ? 0 : rng.below(4);
  for (std::size_t i = 0; i < kids; ++i) {
    NodeKind k = kind == NodeKind::class_decl ? (rng.below(4) == 0 ? NodeKind::statement : NodeKind::method)
                                              : NodeKind::statement;
    n.kids.push_back(random_subtree(rng, k, depth - 1 - static_cast<int>(rng.below(2))));
  }
  return n;
}

inline void collect(Node &n, std::vector<Node *> &out) {
  out.push_back(&n);
  for (auto &k : n.kids)
    collect(k, out);
}

inline bool contains(const Node &root, const Node *target) {
  if (&root == target)
    return true;
  for (const auto &k : root.kids)
    if (contains(k, target))
      return true;
  return false;
}

inline Node *parent_of(Node &root, const Node *target) {
  for (auto &k : root.kids) {
    if (&k == target)
      return &root;
    if (auto *p = parent_of(k, target))
      return p;
  }
  return nullptr;
}

inline void mutate(Node &root, Rng &rng) {
  std::vector<Node *> all;
  collect(root, all);
  Node *n = all[rng.below(all.size())];
  switch (rng.below(5)) {
  case 0: { // insert
    Node *p = n;
    p->kids.insert(p->kids.begin() + static_cast<std::ptrdiff_t>(rng.below(p->kids.size() + 1)),
                   random_subtree(rng, p == &root ? NodeKind::class_decl : NodeKind::statement, 1));
    break;
  }
  case 1: // update
    if (n != &root)
      n->value = random_value(rng, n->kind);
    break;
  case 2: // small edit keeping most bigrams
    if (n != &root)
      n->value += " ";
    if (n != &root)
      n->value.insert(0, "x");
    break;
  case 3: { // delete
    if (n == &root)
      break;
    Node *p = parent_of(root, n);
    p->kids.erase(p->kids.begin() + (n - p->kids.data()));
    break;
  }
  default: { // move
    if (n == &root)
      break;
    Node *target = all[rng.below(all.size())];
    if (contains(*n, target))
      break;
    Node moved = *n;
    Node *p = parent_of(root, n);
    p->kids.erase(p->kids.begin() + (n - p->kids.data()));
    std::vector<Node *> again;
    collect(root, again);
    // `target` may have been invalidated by the erase; pick by index instead.
    Node *t = again[rng.below(again.size())];
    t->kids.insert(t->kids.begin() + static_cast<std::ptrdiff_t>(rng.below(t->kids.size() + 1)), std::move(moved));
    break;
  }
  }
}

inline void build(const Node &n, SourceTree &t, NodeId at) {
  for (const auto &k : n.kids)
    build(k, t, t.add(k.kind, k.value, {}, at));
}

inline SourceTree to_tree(const Node &n) {
  SourceTree t;
  build(n, t, t.root());
  return t;
}


} // namespace maintmine::fixtures
