#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <nlohmann/json.hpp>

#include "maintmine/matrix.hpp"
#include "maintmine/rng.hpp"

namespace maintmine {

// Node of a binary classification tree. Rows with x[feature] <= threshold go
// left. `dist` holds the training rows reaching the node per class;
// `decrease` the impurity decrease of its split weighted by row count.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  PerClass<double> dist;
  double decrease = 0;

  bool is_leaf() const noexcept { return feature < 0; }
  double total() const noexcept { return dist.values[0] + dist.values[1] + dist.values[2]; }
  bool operator==(const TreeNode &) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes; // nodes[0] is the root

  const TreeNode &leaf_for(std::span<const double> x) const {
    std::size_t n = 0;
    while (!nodes[n].is_leaf())
      n = static_cast<std::size_t>(x[static_cast<std::size_t>(nodes[n].feature)] <= nodes[n].threshold
                                       ? nodes[n].left
                                       : nodes[n].right);
    return nodes[n];
  }

  std::size_t leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](auto &n) { return n.is_leaf(); }));
  }

  std::size_t depth(std::size_t n = 0) const {
    if (nodes[n].is_leaf())
      return 0;
    return 1 + std::max(depth(static_cast<std::size_t>(nodes[n].left)), depth(static_cast<std::size_t>(nodes[n].right)));
  }

  void add_importance(std::vector<double> &raw) const {
    for (const auto &n : nodes)
      if (!n.is_leaf())
        raw[static_cast<std::size_t>(n.feature)] += n.decrease;
  }

  bool operator==(const DecisionTree &) const = default;
};

inline void to_json(nlohmann::json &j, const TreeNode &n) {
  if (n.is_leaf())
    j = {{"dist", n.dist.values}};
  else
    j = {{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right},
         {"dist", n.dist.values}, {"decrease", n.decrease}};
}

inline void from_json(const nlohmann::json &j, TreeNode &n) {
  n = TreeNode{};
  j.at("dist").get_to(n.dist.values);
  if (j.contains("feature")) {
    j.at("feature").get_to(n.feature);
    j.at("threshold").get_to(n.threshold);
    j.at("left").get_to(n.left);
    j.at("right").get_to(n.right);
    j.at("decrease").get_to(n.decrease);
  }
}

inline void to_json(nlohmann::json &j, const DecisionTree &t) { j = t.nodes; }

inline void from_json(const nlohmann::json &j, DecisionTree &t) {
  t.nodes = j.get<std::vector<TreeNode>>();
  if (t.nodes.empty())
    throw DataError("tree without nodes");
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto &n = t.nodes[i];
    if (n.is_leaf())
      continue;
    auto ok = [&](std::int32_t c) { return c > static_cast<std::int32_t>(i) && c < static_cast<std::int32_t>(t.nodes.size()); };
    if (!ok(n.left) || !ok(n.right))
      throw DataError("tree node " + std::to_string(i) + " has invalid children");
  }
}

namespace detail {

inline double entropy(const PerClass<double> &d, double n) {
  double h = 0;
  for (double c : d.values)
    if (c > 0)
      h -= c / n * std::log2(c / n);
  return h;
}

inline double gini(const PerClass<double> &d, double n) {
  double s = 1;
  for (double c : d.values)
    s -= (c / n) * (c / n);
  return s;
}

inline PerClass<double> count_rows(const TrainingMatrix &m, std::span<const std::size_t> rows) {
  PerClass<double> d;
  for (auto r : rows)
    d[m.label(r)] += 1;
  return d;
}

inline bool is_pure(const PerClass<double> &d) {
  return std::count_if(d.values.begin(), d.values.end(), [](double c) { return c > 0; }) <= 1;
}

// Rows sorted by one feature, with the label sequence, for threshold sweeps.
inline std::vector<std::pair<double, MaintenanceClass>> sorted_column(const TrainingMatrix &m,
                                                                     std::span<const std::size_t> rows,
                                                                     std::size_t f) {
  std::vector<std::pair<double, MaintenanceClass>> col;
  col.reserve(rows.size());
  for (auto r : rows)
    col.emplace_back(m.at(r, f), m.label(r));
  std::sort(col.begin(), col.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
  return col;
}

struct SplitChoice {
  std::int32_t feature = -1;
  double threshold = 0;
  double score = 0;    // criterion used to rank features
  double decrease = 0; // weighted impurity decrease
};

inline void partition_rows(const TrainingMatrix &m, std::span<const std::size_t> rows, const SplitChoice &s,
                           std::vector<std::size_t> &left, std::vector<std::size_t> &right) {
  for (auto r : rows)
    (m.at(r, static_cast<std::size_t>(s.feature)) <= s.threshold ? left : right).push_back(r);
}

// Rebuilds the subtree under `n` in preorder into `out`, dropping orphans.
inline std::int32_t compact_tree(const std::vector<TreeNode> &in, std::size_t n, std::vector<TreeNode> &out) {
  auto id = static_cast<std::int32_t>(out.size());
  out.push_back(in[n]);
  if (!in[n].is_leaf()) {
    auto l = compact_tree(in, static_cast<std::size_t>(in[n].left), out);
    auto r = compact_tree(in, static_cast<std::size_t>(in[n].right), out);
    out[static_cast<std::size_t>(id)].left = l;
    out[static_cast<std::size_t>(id)].right = r;
  }
  return id;
}

} // namespace detail

struct TreeParams {
  std::size_t min_leaf = 2;
  double cf = 0.25;
  bool prune = true;
  bool operator==(const TreeParams &) const = default;
};

inline void to_json(nlohmann::json &j, const TreeParams &p) {
  j = {{"min_leaf", p.min_leaf}, {"cf", p.cf}, {"prune", p.prune}};
}
inline void from_json(const nlohmann::json &j, TreeParams &p) {
  j.at("min_leaf").get_to(p.min_leaf);
  j.at("cf").get_to(p.cf);
  j.at("prune").get_to(p.prune);
}

// Upper confidence bound on a leaf's error rate (normal approximation to
// the binomial) times the leaf size: C4.5's pessimistic error estimate.
inline double pessimistic_errors(double n, double errors, double cf) {
  if (n <= 0)
    return 0;
  const double z = boost::math::quantile(boost::math::normal(), 1.0 - cf);
  const double f = errors / n;
  const double z2 = z * z;
  const double ub = (f + z2 / (2 * n) + z * std::sqrt(f / n - f * f / n + z2 / (4 * n * n))) / (1 + z2 / n);
  return n * ub;
}

// Gain ratio of a binary split given per-class counts of both sides.
inline double gain_ratio(const PerClass<double> &left, const PerClass<double> &right) {
  PerClass<double> all;
  double nl = 0, nr = 0;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    all.values[k] = left.values[k] + right.values[k];
    nl += left.values[k];
    nr += right.values[k];
  }
  const double n = nl + nr;
  if (nl == 0 || nr == 0)
    return 0;
  const double gain = detail::entropy(all, n) - nl / n * detail::entropy(left, nl) - nr / n * detail::entropy(right, nr);
  const double split_info = -(nl / n) * std::log2(nl / n) - (nr / n) * std::log2(nr / n);
  return gain / split_info;
}

namespace detail {

class C45Builder {
public:
  C45Builder(const TrainingMatrix &m, const TreeParams &p) : m_(m), p_(p) {}

  DecisionTree run() {
    std::vector<std::size_t> rows(m_.size());
    std::iota(rows.begin(), rows.end(), 0);
    grow(rows);
    if (p_.prune)
      prune(0);
    DecisionTree t;
    compact_tree(nodes_, 0, t.nodes);
    return t;
  }

private:
  const TrainingMatrix &m_;
  TreeParams p_;
  std::vector<TreeNode> nodes_;

  SplitChoice best_split(std::span<const std::size_t> rows, const PerClass<double> &dist) const {
    const double n = static_cast<double>(rows.size());
    const double h = entropy(dist, n);
    struct Cand {
      std::size_t feature;
      double threshold, gain, ratio;
    };
    std::vector<Cand> cands;
    for (std::size_t f = 0; f < m_.width(); ++f) {
      auto col = sorted_column(m_, rows, f);
      PerClass<double> left;
      Cand best{f, 0, 0, 0};
      bool found = false;
      for (std::size_t i = 0; i + 1 < col.size(); ++i) {
        left[col[i].second] += 1;
        if (col[i].first == col[i + 1].first)
          continue;
        const double nl = static_cast<double>(i + 1), nr = n - nl;
        if (nl < static_cast<double>(p_.min_leaf) || nr < static_cast<double>(p_.min_leaf))
          continue;
        PerClass<double> right;
        for (std::size_t k = 0; k < kNumClasses; ++k)
          right.values[k] = dist.values[k] - left.values[k];
        const double gain = h - nl / n * entropy(left, nl) - nr / n * entropy(right, nr);
        if (gain > best.gain + 1e-12) {
          best = {f, (col[i].first + col[i + 1].first) / 2, gain, gain_ratio(left, right)};
          found = true;
        }
      }
      if (found)
        cands.push_back(best);
    }
    SplitChoice out;
    if (cands.empty())
      return out;
    // Only splits with at least average gain compete on gain ratio.
    double avg = 0;
    for (const auto &c : cands)
      avg += c.gain;
    avg /= static_cast<double>(cands.size());
    const Cand *win = nullptr;
    for (const auto &c : cands)
      if (c.gain >= avg - 1e-12 && (!win || c.ratio > win->ratio + 1e-12))
        win = &c;
    out.feature = static_cast<std::int32_t>(win->feature);
    out.threshold = win->threshold;
    out.score = win->ratio;
    out.decrease = n * win->gain;
    return out;
  }

  std::size_t grow(std::span<const std::size_t> rows) {
    const std::size_t id = nodes_.size();
    nodes_.push_back({});
    nodes_[id].dist = count_rows(m_, rows);
    if (is_pure(nodes_[id].dist) || rows.size() < 2 * p_.min_leaf)
      return id;
    SplitChoice s = best_split(rows, nodes_[id].dist);
    if (s.feature < 0)
      return id;
    std::vector<std::size_t> left, right;
    partition_rows(m_, rows, s, left, right);
    nodes_[id].feature = s.feature;
    nodes_[id].threshold = s.threshold;
    nodes_[id].decrease = s.decrease;
    auto l = grow(left);
    auto r = grow(right);
    nodes_[id].left = static_cast<std::int32_t>(l);
    nodes_[id].right = static_cast<std::int32_t>(r);
    return id;
  }

  double leaf_estimate(const TreeNode &n) const {
    const double total = n.total();
    const double majority = *std::max_element(n.dist.values.begin(), n.dist.values.end());
    return pessimistic_errors(total, total - majority, p_.cf);
  }

  // Subtree replacement, bottom-up. Returns the estimated errors of the
  // (possibly pruned) subtree.
  double prune(std::size_t id) {
    TreeNode &n = nodes_[id];
    if (n.is_leaf())
      return leaf_estimate(n);
    const double sub = prune(static_cast<std::size_t>(n.left)) + prune(static_cast<std::size_t>(nodes_[id].right));
    TreeNode &node = nodes_[id];
    const double as_leaf = leaf_estimate(node);
    if (as_leaf <= sub + 0.1) {
      node.feature = -1;
      node.left = node.right = -1;
      node.threshold = 0;
      node.decrease = 0;
      return as_leaf;
    }
    return sub;
  }
};

} // namespace detail

struct TreeModel {
  DecisionTree tree;
  TreeParams params;
  ClassCounts class_counts;
  std::vector<std::string> feature_names;

  std::size_t width() const noexcept { return feature_names.size(); }
  bool operator==(const TreeModel &) const = default;
};

// C4.5-style tree: binary midpoint thresholds chosen by information gain per
// feature, features ranked by gain ratio among those with at least average
// gain, then pessimistic-error subtree replacement. Deterministic.
inline TreeModel train_tree(const TrainingMatrix &data, const TreeParams &params = {}) {
  data.require_trainable();
  if (params.min_leaf < 1)
    throw UsageError("min_leaf must be at least 1");
  if (!(params.cf > 0 && params.cf < 1))
    throw UsageError("pruning confidence must lie in (0, 1)");
  return {detail::C45Builder(data, params).run(), params, data.class_counts(), data.feature_names()};
}

inline MaintenanceClass leaf_class(const TreeNode &leaf, const ClassCounts &tie_counts) {
  return argmax_class(leaf.dist, tie_counts);
}

inline Prediction predict(const TreeModel &m, std::span<const double> x) {
  check_width(x, m.width());
  const TreeNode &leaf = m.tree.leaf_for(x);
  return {leaf_class(leaf, m.class_counts), normalized(leaf.dist)};
}

inline ImportanceList feature_importance(const TreeModel &m) {
  std::vector<double> raw(m.width(), 0.0);
  m.tree.add_importance(raw);
  return rank_importance(m.feature_names, std::move(raw));
}

// Text rendering, one node per line:
//
//   root
//   |   fix <= 0.5: perfective (10/3)
//   |   fix > 0.5
//   |   |   bug <= 0.5: adaptive (4/1)
//   |   |   bug > 0.5: corrective (50/5)
//
// Leaves read `class (rows/errors)`. A single-leaf tree is just its leaf.
inline std::string render_tree(const TreeModel &m) {
  std::ostringstream out;
  auto leaf_text = [&](const TreeNode &n) {
    auto cls = leaf_class(n, m.class_counts);
    return std::string(to_string(cls)) + " (" + format_number(n.total()) + "/" +
           format_number(n.total() - n.dist[cls]) + ")";
  };
  const auto &nodes = m.tree.nodes;
  if (nodes[0].is_leaf()) {
    out << leaf_text(nodes[0]) << '\n';
    return out.str();
  }
  auto walk = [&](auto &&self, std::size_t id, std::size_t depth) -> void {
    const TreeNode &n = nodes[id];
    const std::string &name = m.feature_names[static_cast<std::size_t>(n.feature)];
    std::string indent;
    for (std::size_t d = 0; d < depth; ++d)
      indent += "|   ";
    for (bool le : {true, false}) {
      const auto child = static_cast<std::size_t>(le ? n.left : n.right);
      out << indent << name << (le ? " <= " : " > ") << format_number(n.threshold);
      if (nodes[child].is_leaf()) {
        out << ": " << leaf_text(nodes[child]) << '\n';
      } else {
        out << '\n';
        self(self, child, depth + 1);
      }
    }
  };
  out << "root\n";
  walk(walk, 0, 1);
  return out.str();
}

namespace detail {

class TreeTextParser {
public:
  TreeTextParser(const std::string &text, const std::vector<std::string> &names) : names_(names) {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
      if (!line.empty())
        lines_.push_back(line);
  }

  DecisionTree run() {
    if (lines_.empty())
      throw ParseError(1, "empty tree text");
    DecisionTree t;
    if (lines_[0] != "root") {
      if (lines_.size() != 1)
        throw ParseError(2, "unexpected text after single leaf");
      t.nodes.push_back(parse_leaf(lines_[0], 1));
      return t;
    }
    pos_ = 1;
    parse_split(t, 1);
    if (pos_ != lines_.size())
      throw ParseError(pos_ + 1, "unexpected line");
    return t;
  }

private:
  const std::vector<std::string> &names_;
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;

  static TreeNode parse_leaf(std::string_view s, std::size_t line) {
    auto open = s.find(" (");
    auto slash = s.find('/', open);
    if (open == std::string_view::npos || slash == std::string_view::npos || s.back() != ')')
      throw ParseError(line, "malformed leaf '" + std::string(s) + "'");
    auto cls = try_parse_class(s.substr(0, open));
    if (!cls)
      throw ParseError(line, "unknown class in leaf '" + std::string(s) + "'");
    double n = parse_number(s.substr(open + 2, slash - open - 2));
    double errors = parse_number(s.substr(slash + 1, s.size() - slash - 2));
    TreeNode leaf;
    leaf.dist[*cls] = n - errors;
    // The text keeps only the error total; spread it over the other classes.
    for (auto c : kAllClasses)
      if (c != *cls)
        leaf.dist[c] = errors / (kNumClasses - 1);
    return leaf;
  }

  struct Edge {
    std::size_t feature;
    bool le;
    double threshold;
    std::optional<TreeNode> leaf;
  };

  Edge parse_edge(std::size_t depth) {
    if (pos_ >= lines_.size())
      throw ParseError(pos_ + 1, "tree text ends early");
    std::string_view s = lines_[pos_];
    const std::size_t line = pos_ + 1;
    ++pos_;
    for (std::size_t d = 0; d < depth; ++d) {
      if (!s.starts_with("|   "))
        throw ParseError(line, "wrong indentation");
      s.remove_prefix(4);
    }
    std::optional<TreeNode> leaf;
    if (auto colon = s.find(": "); colon != std::string_view::npos) {
      leaf = parse_leaf(s.substr(colon + 2), line);
      s = s.substr(0, colon);
    }
    bool le;
    std::size_t op;
    if ((op = s.rfind(" <= ")) != std::string_view::npos) {
      le = true;
    } else if ((op = s.rfind(" > ")) != std::string_view::npos) {
      le = false;
    } else {
      throw ParseError(line, "expected a comparison");
    }
    std::string name(s.substr(0, op));
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end())
      throw ParseError(line, "unknown feature '" + name + "'");
    double thr = parse_number(s.substr(op + (le ? 4 : 3)));
    return {static_cast<std::size_t>(it - names_.begin()), le, thr, leaf};
  }

  std::int32_t parse_split(DecisionTree &t, std::size_t depth) {
    const auto id = static_cast<std::int32_t>(t.nodes.size());
    t.nodes.emplace_back();
    const std::size_t line = pos_ + 1;
    Edge le = parse_edge(depth);
    auto left = le.leaf ? push(t, *le.leaf) : parse_split(t, depth + 1);
    Edge gt = parse_edge(depth);
    if (!le.le || gt.le || le.feature != gt.feature || le.threshold != gt.threshold)
      throw ParseError(line, "split lines do not pair up");
    auto right = gt.leaf ? push(t, *gt.leaf) : parse_split(t, depth + 1);
    TreeNode &n = t.nodes[static_cast<std::size_t>(id)];
    n.feature = static_cast<std::int32_t>(le.feature);
    n.threshold = le.threshold;
    n.left = left;
    n.right = right;
    for (std::size_t k = 0; k < kNumClasses; ++k)
      n.dist.values[k] = t.nodes[static_cast<std::size_t>(left)].dist.values[k] +
                         t.nodes[static_cast<std::size_t>(right)].dist.values[k];
    return id;
  }

  static std::int32_t push(DecisionTree &t, const TreeNode &leaf) {
    t.nodes.push_back(leaf);
    return static_cast<std::int32_t>(t.nodes.size() - 1);
  }
};

} // namespace detail

// Reads render_tree output back. Leaf distributions keep rows and errors.
inline DecisionTree parse_tree_text(const std::string &text, const std::vector<std::string> &feature_names) {
  return detail::TreeTextParser(text, feature_names).run();
}

// Same shape, splits, leaf classes, row and error counts.
inline bool same_structure(const DecisionTree &a, const DecisionTree &b, const ClassCounts &tie_counts) {
  auto eq = [&](auto &&self, std::size_t x, std::size_t y) -> bool {
    const auto &na = a.nodes[x], &nb = b.nodes[y];
    if (na.is_leaf() != nb.is_leaf())
      return false;
    if (na.is_leaf()) {
      auto ca = leaf_class(na, tie_counts), cb = leaf_class(nb, tie_counts);
      return ca == cb && std::abs(na.total() - nb.total()) < 1e-9 && std::abs(na.dist[ca] - nb.dist[cb]) < 1e-9;
    }
    return na.feature == nb.feature && na.threshold == nb.threshold &&
           self(self, static_cast<std::size_t>(na.left), static_cast<std::size_t>(nb.left)) &&
           self(self, static_cast<std::size_t>(na.right), static_cast<std::size_t>(nb.right));
  };
  return eq(eq, 0, 0);
}

// Gini tree grown to purity (CART style). With mtry < width only a random
// subset of features is searched per node; drawing continues past mtry until
// some feature can split the node. Ties between features go to the lower
// index, so mtry = width gives the same tree for any generator state.
struct GiniParams {
  std::size_t mtry = 0; // 0 means all features
  std::size_t min_leaf = 1;
};

namespace detail {

inline SplitChoice gini_split_on(const TrainingMatrix &m, std::span<const std::size_t> rows,
                                 const PerClass<double> &dist, std::size_t f, std::size_t min_leaf) {
  const double n = static_cast<double>(rows.size());
  const double parent = n * gini(dist, n);
  auto col = sorted_column(m, rows, f);
  PerClass<double> left;
  SplitChoice best;
  for (std::size_t i = 0; i + 1 < col.size(); ++i) {
    left[col[i].second] += 1;
    if (col[i].first == col[i + 1].first)
      continue;
    const double nl = static_cast<double>(i + 1), nr = n - nl;
    if (nl < static_cast<double>(min_leaf) || nr < static_cast<double>(min_leaf))
      continue;
    PerClass<double> right;
    for (std::size_t k = 0; k < kNumClasses; ++k)
      right.values[k] = dist.values[k] - left.values[k];
    const double dec = parent - nl * gini(left, nl) - nr * gini(right, nr);
    if (best.feature < 0 || dec > best.decrease + 1e-12) {
      best = {static_cast<std::int32_t>(f), (col[i].first + col[i + 1].first) / 2, dec, dec};
    }
  }
  return best;
}

class GiniBuilder {
public:
  GiniBuilder(const TrainingMatrix &m, const GiniParams &p, Rng &rng) : m_(m), p_(p), rng_(rng) {
    order_.resize(m.width());
  }

  DecisionTree run(std::span<const std::size_t> rows) {
    grow(rows);
    return {std::move(nodes_)};
  }

private:
  const TrainingMatrix &m_;
  GiniParams p_;
  Rng &rng_;
  std::vector<TreeNode> nodes_;
  std::vector<std::size_t> order_;

  SplitChoice choose(std::span<const std::size_t> rows, const PerClass<double> &dist) {
    const std::size_t w = m_.width();
    const std::size_t mtry = p_.mtry == 0 ? w : std::min(p_.mtry, w);
    std::iota(order_.begin(), order_.end(), 0);
    SplitChoice best;
    for (std::size_t k = 0; k < w; ++k) {
      if (mtry < w) {
        std::size_t j = k + static_cast<std::size_t>(rng_.below(w - k));
        std::swap(order_[k], order_[j]);
      }
      const std::size_t f = order_[k];
      SplitChoice s = gini_split_on(m_, rows, dist, f, p_.min_leaf);
      if (s.feature >= 0 && (best.feature < 0 || s.decrease > best.decrease + 1e-12 ||
                             (std::abs(s.decrease - best.decrease) <= 1e-12 && s.feature < best.feature)))
        best = s;
      if (k + 1 >= mtry && best.feature >= 0)
        break;
    }
    return best;
  }

  std::size_t grow(std::span<const std::size_t> rows) {
    const std::size_t id = nodes_.size();
    nodes_.push_back({});
    nodes_[id].dist = count_rows(m_, rows);
    if (is_pure(nodes_[id].dist) || rows.size() < 2 * p_.min_leaf)
      return id;
    SplitChoice s = choose(rows, nodes_[id].dist);
    if (s.feature < 0)
      return id;
    std::vector<std::size_t> left, right;
    partition_rows(m_, rows, s, left, right);
    nodes_[id].feature = s.feature;
    nodes_[id].threshold = s.threshold;
    nodes_[id].decrease = s.decrease;
    auto l = grow(left);
    auto r = grow(right);
    nodes_[id].left = static_cast<std::int32_t>(l);
    nodes_[id].right = static_cast<std::int32_t>(r);
    return id;
  }
};

} // namespace detail

inline DecisionTree grow_gini_tree(const TrainingMatrix &data, std::span<const std::size_t> rows,
                                   const GiniParams &params, Rng &rng) {
  return detail::GiniBuilder(data, params, rng).run(rows);
}

// Deterministic Gini tree over all rows and all features.
inline DecisionTree train_gini_tree(const TrainingMatrix &data, std::size_t min_leaf = 1) {
  data.require_trainable();
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  Rng rng(0);
  return grow_gini_tree(data, rows, {0, min_leaf}, rng);
}

} // namespace maintmine
