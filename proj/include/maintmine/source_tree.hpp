#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "maintmine/error.hpp"

namespace maintmine {

enum class NodeKind { compilation_unit, class_decl, method, statement, comment };

inline std::string_view to_string(NodeKind k) noexcept {
  switch (k) {
  case NodeKind::compilation_unit:
    return "compilation_unit";
  case NodeKind::class_decl:
    return "class";
  case NodeKind::method:
    return "method";
  case NodeKind::statement:
    return "statement";
  case NodeKind::comment:
    return "comment";
  }
  return "?";
}

inline NodeKind parse_node_kind(std::string_view s) {
  for (auto k : {NodeKind::compilation_unit, NodeKind::class_decl, NodeKind::method, NodeKind::statement,
                 NodeKind::comment})
    if (to_string(k) == s)
      return k;
  throw DataError("unknown node kind '" + std::string(s) + "'");
}

using NodeId = std::size_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct LineRange {
  std::size_t first = 0;
  std::size_t last = 0;
  bool operator==(const LineRange &) const = default;
};

struct SourceNode {
  NodeKind kind = NodeKind::statement;
  std::string value;
  LineRange range;
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
};

// Whitespace-insensitive form of a node value: whitespace is dropped except a
// single space between two identifier characters. Two values with equal
// compact forms differ only in layout.
inline std::string compact(std::string_view text) {
  auto word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; };
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space && word(out.back()) && word(c))
      out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

// Rooted ordered tree stored as an arena; ids are stable while nodes are
// added. Node 0 is the root.
class SourceTree {
public:
  SourceTree() { nodes_.push_back({NodeKind::compilation_unit, "", {1, 1}, kNoNode, {}}); }

  NodeId root() const noexcept { return 0; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const SourceNode &operator[](NodeId id) const { return nodes_.at(id); }
  SourceNode &operator[](NodeId id) { return nodes_.at(id); }

  NodeId add(NodeKind kind, std::string value, LineRange range, NodeId parent) {
    NodeId id = nodes_.size();
    nodes_.push_back({kind, std::move(value), range, parent, {}});
    nodes_.at(parent).children.push_back(id);
    return id;
  }

  // Node ids in preorder.
  std::vector<NodeId> preorder() const {
    std::vector<NodeId> out, stack = {root()};
    while (!stack.empty()) {
      NodeId n = stack.back();
      stack.pop_back();
      out.push_back(n);
      const auto &ch = nodes_[n].children;
      for (auto it = ch.rbegin(); it != ch.rend(); ++it)
        stack.push_back(*it);
    }
    return out;
  }

  std::vector<NodeId> postorder() const {
    std::vector<NodeId> out;
    post(root(), out);
    return out;
  }

  std::size_t count(NodeKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [&](const SourceNode &n) { return n.kind == kind; }));
  }

  // Empty when the range invariants hold: children nested in their parent,
  // siblings in non-decreasing line order.
  std::optional<std::string> check_ranges() const {
    for (NodeId id = 0; id < nodes_.size(); ++id) {
      const auto &n = nodes_[id];
      if (n.range.first > n.range.last)
        return "node " + std::to_string(id) + " has an inverted range";
      const SourceNode *prev = nullptr;
      for (NodeId c : n.children) {
        const auto &cn = nodes_[c];
        if (cn.range.first < n.range.first || cn.range.last > n.range.last)
          return "node " + std::to_string(c) + " is not nested in its parent";
        if (prev && prev->range.last > cn.range.first)
          return "node " + std::to_string(c) + " starts before its previous sibling ends";
        prev = &cn;
      }
    }
    return std::nullopt;
  }

  // Copy without comment nodes (and their subtrees), renumbered in preorder.
  SourceTree without_comments() const {
    SourceTree out;
    out.nodes_[0].kind = nodes_[0].kind;
    out.nodes_[0].value = nodes_[0].value;
    out.nodes_[0].range = nodes_[0].range;
    copy_children(root(), out, out.root(), true);
    return out;
  }

  // Subtree isomorphism on kind and compact value, ignoring ranges.
  static bool isomorphic(const SourceTree &a, NodeId x, const SourceTree &b, NodeId y) {
    const auto &na = a[x], &nb = b[y];
    if (na.kind != nb.kind || compact(na.value) != compact(nb.value) || na.children.size() != nb.children.size())
      return false;
    for (std::size_t i = 0; i < na.children.size(); ++i)
      if (!isomorphic(a, na.children[i], b, nb.children[i]))
        return false;
    return true;
  }

  friend bool isomorphic(const SourceTree &a, const SourceTree &b) { return isomorphic(a, a.root(), b, b.root()); }

  nlohmann::ordered_json to_json(NodeId id = 0) const {
    const auto &n = nodes_.at(id);
    nlohmann::ordered_json j;
    j["kind"] = std::string(to_string(n.kind));
    j["value"] = n.value;
    j["range"] = {n.range.first, n.range.last};
    j["children"] = nlohmann::ordered_json::array();
    for (NodeId c : n.children)
      j["children"].push_back(to_json(c));
    return j;
  }

  // Reads the tree interchange format:
  // {"kind": str, "value": str, "range": [first, last], "children": [...]}
  static SourceTree from_json(const nlohmann::json &j) {
    SourceTree t;
    try {
      t.nodes_[0].kind = parse_node_kind(j.at("kind").get<std::string>());
      t.nodes_[0].value = j.value("value", std::string{});
      t.nodes_[0].range = read_range(j);
      if (j.contains("children"))
        for (const auto &c : j.at("children"))
          t.read_node(c, 0);
    } catch (const nlohmann::json::exception &e) {
      throw DataError(std::string("invalid tree JSON: ") + e.what());
    }
    if (auto err = t.check_ranges())
      throw DataError("invalid tree JSON: " + *err);
    return t;
  }

private:
  std::vector<SourceNode> nodes_;

  void post(NodeId n, std::vector<NodeId> &out) const {
    for (NodeId c : nodes_[n].children)
      post(c, out);
    out.push_back(n);
  }

  void copy_children(NodeId from, SourceTree &out, NodeId to, bool skip_comments) const {
    for (NodeId c : nodes_[from].children) {
      const auto &n = nodes_[c];
      if (skip_comments && n.kind == NodeKind::comment)
        continue;
      NodeId id = out.add(n.kind, n.value, n.range, to);
      copy_children(c, out, id, skip_comments);
    }
  }

  static LineRange read_range(const nlohmann::json &j) {
    if (!j.contains("range"))
      return {};
    const auto &r = j.at("range");
    if (!r.is_array() || r.size() != 2)
      throw DataError("invalid tree JSON: range must be [first, last]");
    return {r[0].get<std::size_t>(), r[1].get<std::size_t>()};
  }

  void read_node(const nlohmann::json &j, NodeId parent) {
    NodeId id = add(parse_node_kind(j.at("kind").get<std::string>()), j.value("value", std::string{}), read_range(j),
                    parent);
    if (j.contains("children"))
      for (const auto &c : j.at("children"))
        read_node(c, id);
  }
};

namespace detail {

inline bool has_word(std::string_view text, std::string_view word) {
  auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; };
  for (std::size_t pos = text.find(word); pos != std::string_view::npos; pos = text.find(word, pos + 1)) {
    bool left = pos == 0 || !is_ident(text[pos - 1]);
    bool right = pos + word.size() == text.size() || !is_ident(text[pos + word.size()]);
    if (left && right)
      return true;
  }
  return false;
}

inline bool declares_type(std::string_view header) {
  return has_word(header, "class") || has_word(header, "interface") || has_word(header, "enum") ||
         has_word(header, "record");
}

inline std::string collapse_ws(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space)
      out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

// Class-level declaration ending in ';' that looks like a bodiless method:
// a '(' that is not preceded by '='.
inline bool is_method_declaration(std::string_view text) {
  auto paren = text.find('(');
  if (paren == std::string_view::npos)
    return false;
  auto eq = text.find('=');
  return eq == std::string_view::npos || eq > paren;
}

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  SourceTree run() {
    stack_.push_back({tree_.root(), Container::unit, 1});
    for (pos_ = 0; pos_ < text_.size(); ++pos_) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        seg_.push_back(' ');
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n')
          ++pos_;
        --pos_;
      } else if (c == '/' && peek(1) == '*') {
        pos_ += 2;
        while (pos_ < text_.size() && !(text_[pos_] == '*' && peek(1) == '/')) {
          if (text_[pos_] == '\n')
            ++line_;
          ++pos_;
        }
        if (pos_ >= text_.size())
          throw ParseError(line_, "unterminated comment");
        ++pos_;
        seg_.push_back(' ');
      } else if (c == '"' || c == '\'') {
        literal(c);
      } else if (c == '(') {
        ++parens_;
        append(c);
      } else if (c == ')') {
        if (parens_ > 0)
          --parens_;
        append(c);
      } else if (c == '{') {
        open_brace();
      } else if (c == '}') {
        close_brace();
      } else if (c == ';' && parens_ == 0 && inline_braces_ == 0) {
        append(c);
        end_statement();
      } else {
        append(c);
      }
    }
    if (inline_braces_ > 0)
      throw ParseError(inline_open_line_, "unbalanced '{'");
    if (stack_.size() > 1)
      throw ParseError(stack_.back().open_line, "unbalanced '{'");
    flush_trailing();
    tree_[tree_.root()].range = {1, std::max<std::size_t>(line_, 1)};
    return std::move(tree_);
  }

private:
  enum class Container { unit, type, method, block };
  struct Frame {
    NodeId node;
    Container kind;
    std::size_t open_line;
  };

  std::string_view text_;
  SourceTree tree_;
  std::vector<Frame> stack_;
  std::string seg_;
  std::size_t seg_line_ = 0; // line of the first non-blank character of seg_
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t parens_ = 0;
  std::size_t inline_braces_ = 0;
  std::size_t inline_open_line_ = 0;

  char peek(std::size_t ahead) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

  void append(char c) {
    if (seg_line_ == 0 && !std::isspace(static_cast<unsigned char>(c)))
      seg_line_ = line_;
    seg_.push_back(c);
  }

  void literal(char quote) {
    const bool text_block = quote == '"' && peek(1) == '"' && peek(2) == '"';
    const std::size_t start = line_;
    append(quote);
    if (text_block) {
      seg_ += "\"\"";
      pos_ += 3;
      for (; pos_ < text_.size(); ++pos_) {
        if (text_[pos_] == '"' && peek(1) == '"' && peek(2) == '"') {
          seg_ += "\"\"\"";
          pos_ += 2;
          return;
        }
        if (text_[pos_] == '\n')
          ++line_;
        seg_.push_back(text_[pos_]);
      }
      throw ParseError(start, "unterminated text block");
    }
    for (++pos_; pos_ < text_.size(); ++pos_) {
      char c = text_[pos_];
      if (c == '\n')
        throw ParseError(start, "unterminated literal");
      seg_.push_back(c);
      if (c == '\\') {
        if (++pos_ < text_.size())
          seg_.push_back(text_[pos_]);
        continue;
      }
      if (c == quote)
        return;
    }
    throw ParseError(start, "unterminated literal");
  }

  std::string take_segment() {
    std::string s = collapse_ws(seg_);
    seg_.clear();
    return s;
  }

  bool opens_inline_brace() const {
    if (parens_ > 0 || inline_braces_ > 0)
      return true;
    auto s = collapse_ws(seg_);
    if (s.empty())
      return false;
    return s.back() == '=' || s.back() == ',' || s.back() == ']' || s.ends_with("->") ||
           (s.back() == ')' && has_word(s, "new") && !declares_type(s)); // anonymous class body
  }

  void open_brace() {
    if (opens_inline_brace()) {
      if (inline_braces_ == 0)
        inline_open_line_ = line_;
      ++inline_braces_;
      append('{');
      return;
    }
    const std::size_t first = seg_line_ ? seg_line_ : line_;
    std::string header = take_segment();
    seg_line_ = 0;
    const Frame &top = stack_.back();
    NodeKind kind;
    Container container;
    if (declares_type(header)) {
      kind = NodeKind::class_decl;
      container = Container::type;
    } else if ((top.kind == Container::type || top.kind == Container::unit) && header.find('(') != std::string::npos) {
      kind = NodeKind::method;
      container = Container::method;
    } else {
      kind = NodeKind::statement;
      container = Container::block;
      if (header.empty())
        header = "{";
    }
    NodeId id = tree_.add(kind, std::move(header), {first, first}, top.node);
    stack_.push_back({id, container, line_});
  }

  void close_brace() {
    if (inline_braces_ > 0) {
      --inline_braces_;
      append('}');
      return;
    }
    flush_trailing();
    if (stack_.size() == 1)
      throw ParseError(line_, "unbalanced '}'");
    tree_[stack_.back().node].range.last = line_;
    stack_.pop_back();
  }

  void end_statement() {
    const std::size_t first = seg_line_ ? seg_line_ : line_;
    std::string text = take_segment();
    seg_line_ = 0;
    if (text == ";")
      return;
    const Frame &top = stack_.back();
    NodeKind kind = NodeKind::statement;
    if ((top.kind == Container::type) && is_method_declaration(text))
      kind = NodeKind::method;
    tree_.add(kind, std::move(text), {first, line_}, top.node);
  }

  // Text left before a closing brace or at end of input without a ';'
  // (enum constants, a final statement missing its terminator).
  void flush_trailing() {
    const std::size_t first = seg_line_ ? seg_line_ : line_;
    std::string text = take_segment();
    seg_line_ = 0;
    if (!text.empty())
      tree_.add(NodeKind::statement, std::move(text), {first, line_}, stack_.back().node);
  }
};

} // namespace detail

// Parses the supported curly-brace subset: type declarations (class,
// interface, enum, record), method declarations and statements delimited by
// ';' or by braces. Comments are dropped; values keep collapsed whitespace.
inline SourceTree parse_source(std::string_view text) { return detail::Parser(text).run(); }

// Name of a method or type from its declaration header.
inline std::string declared_name(NodeKind kind, std::string_view header) {
  auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; };
  if (kind == NodeKind::method) {
    auto paren = header.find('(');
    if (paren == std::string_view::npos)
      return {};
    std::size_t e = paren;
    while (e > 0 && std::isspace(static_cast<unsigned char>(header[e - 1])))
      --e;
    std::size_t b = e;
    while (b > 0 && is_ident(header[b - 1]))
      --b;
    return std::string(header.substr(b, e - b));
  }
  for (std::string_view kw : {"class", "interface", "enum", "record"}) {
    for (std::size_t pos = header.find(kw); pos != std::string_view::npos; pos = header.find(kw, pos + 1)) {
      bool left = pos == 0 || !is_ident(header[pos - 1]);
      std::size_t after = pos + kw.size();
      if (!left || after >= header.size() || is_ident(header[after]))
        continue;
      while (after < header.size() && std::isspace(static_cast<unsigned char>(header[after])))
        ++after;
      std::size_t e = after;
      while (e < header.size() && is_ident(header[e]))
        ++e;
      return std::string(header.substr(after, e - after));
    }
  }
  return {};
}

// Number of parameters in a method header: top-level commas inside the first
// parenthesis pair, ignoring commas nested in <>, () or [].
inline std::size_t parameter_count(std::string_view header) {
  auto open = header.find('(');
  if (open == std::string_view::npos)
    return 0;
  int depth = 0;
  std::size_t commas = 0;
  bool any = false;
  for (std::size_t i = open + 1; i < header.size(); ++i) {
    char c = header[i];
    if (c == ')' && depth == 0)
      break;
    if (c == '(' || c == '<' || c == '[')
      ++depth;
    else if (c == ')' || c == '>' || c == ']')
      --depth;
    else if (c == ',' && depth == 0)
      ++commas;
    if (!std::isspace(static_cast<unsigned char>(c)))
      any = true;
  }
  return any ? commas + 1 : 0;
}

} // namespace maintmine
