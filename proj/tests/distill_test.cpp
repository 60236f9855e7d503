#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "maintmine/distill.hpp"
#include "maintmine/rng.hpp"
#include "tree_fixtures.hpp"

using namespace maintmine;
using namespace maintmine::fixtures;

namespace {

std::vector<std::string> dump(const SourceTree &t) {
  std::vector<std::string> out;
  for (NodeId n : t.preorder()) {
    std::size_t depth = 0;
    for (NodeId p = t[n].parent; p != kNoNode; p = t[p].parent)
      ++depth;
    out.push_back(std::string(depth * 2, ' ') + std::string(to_string(t[n].kind)) + ":" + t[n].value);
  }
  return out;
}

std::size_t count_ops(const EditScript &s, EditKind k) {
  std::size_t n = 0;
  for (const auto &op : s)
    n += op.op == k;
  return n;
}

} // namespace

TEST(ParseSource, SingleStatementClass) {
  auto t = parse_source("class A { void f() { x = 1; } }");
  EXPECT_EQ(dump(t), (std::vector<std::string>{"compilation_unit:", "  class:class A", "    method:void f()",
                                               "      statement:x = 1;"}));
}

TEST(ParseSource, EmptyText) {
  auto t = parse_source("");
  EXPECT_EQ(t.size(), 1u);
  EXPECT_TRUE(t[t.root()].children.empty());
}

TEST(ParseSource, TwoMethodsThreeStatementsEach) {
  auto t = parse_source(R"(class A {
  int f(int a) {
    int b = a * 2;
    b += 1;
    return b;
  }
  void g() {
    System.out.println("x; y");
    call(1, 2);
    done = true;
  }
})");
  EXPECT_EQ(t.count(NodeKind::class_decl), 1u);
  EXPECT_EQ(t.count(NodeKind::method), 2u);
  EXPECT_EQ(t.count(NodeKind::statement), 6u);
  EXPECT_FALSE(t.check_ranges());
  const auto &g = t[t[t[0].children[0]].children[1]];
  EXPECT_EQ(g.range, (LineRange{7, 11}));
  EXPECT_EQ(t[g.children[0]].value, "System.out.println(\"x; y\");");
}

TEST(ParseSource, ControlBlocksNestStatements) {
  auto t = parse_source(R"(class A {
  void f() {
    for (int i = 0; i < n; i++) {
      if (i % 2 == 0) { even(i); } else { odd(i); }
    }
    int[] xs = {1, 2, 3};
    Runnable r = () -> { run(); };
    Object o = new Object() { public String toString() { return "o"; } };
  }
})");
  auto d = dump(t);
  std::vector<std::string> expected = {
      "compilation_unit:",
      "  class:class A",
      "    method:void f()",
      "      statement:for (int i = 0; i < n; i++)",
      "        statement:if (i % 2 == 0)",
      "          statement:even(i);",
      "        statement:else",
      "          statement:odd(i);",
      "      statement:int[] xs = {1, 2, 3};",
      "      statement:Runnable r = () -> { run(); };",
      "      statement:Object o = new Object() { public String toString() { return \"o\"; } };",
  };
  EXPECT_EQ(d, expected);
}

TEST(ParseSource, InterfaceDeclarationsAndFields) {
  auto t = parse_source(R"(
import java.util.List;
interface Shape {
  double area();
  int SIDES = 0;
}
enum Color { RED, GREEN }
)");
  EXPECT_EQ(dump(t), (std::vector<std::string>{"compilation_unit:", "  statement:import java.util.List;",
                                               "  class:interface Shape", "    method:double area();",
                                               "    statement:int SIDES = 0;", "  class:enum Color",
                                               "    statement:RED, GREEN"}));
}

TEST(ParseSource, CommentsAndLiteralsDoNotConfuseBraces) {
  auto t = parse_source("class A {\n  /* } */ // }\n  String s = \"{\";\n  char c = '}';\n}\n");
  EXPECT_EQ(t.count(NodeKind::statement), 2u);
}

TEST(ParseSource, UnbalancedBracesReportLine) {
  try {
    parse_source("class A {\n  void f() {\n    x();\n  }\n");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    parse_source("class A {\n}\n}\n");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(SourceTreeJson, RoundTrip) {
  auto t = parse_source(kAfter);
  auto back = SourceTree::from_json(nlohmann::json::parse(t.to_json().dump()));
  EXPECT_TRUE(isomorphic(t, back));
  EXPECT_EQ(back.to_json(), t.to_json());
}

TEST(SourceTreeJson, RejectsBadInput) {
  EXPECT_THROW(SourceTree::from_json(nlohmann::json::parse(R"({"kind":"widget"})")), DataError);
  EXPECT_THROW(SourceTree::from_json(nlohmann::json::parse(
                   R"({"kind":"compilation_unit","range":[1,2],"children":[{"kind":"statement","range":[1,5]}]})")),
               DataError);
}

TEST(DiffTrees, IdenticalTreesGiveEmptyScript) {
  auto t = parse_source(kBefore);
  EXPECT_TRUE(diff_trees(t, t).empty());
}

TEST(DiffTrees, LayoutAndCommentChangesGiveNoOps) {
  auto a = parse_source("class A { void f() { total = total + 1; } }");
  auto b = parse_source("class A {\n  // note\n  void f()   {\n    total=total+1;\n  }\n}\n");
  EXPECT_TRUE(diff_trees(a, b).empty());
}

TEST(DiffTrees, OneLineEditIsSingleUpdate) {
  auto a = parse_source("class A { void f() { count = count + 1; log(count); } }");
  auto b = parse_source("class A { void f() { count = count + 2; log(count); } }");
  auto s = diff_trees(a, b);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].op, EditKind::update);
  EXPECT_EQ(s[0].value, "count = count + 2;");
  EXPECT_TRUE(isomorphic(apply_script(a, s), b));
}

TEST(DiffTrees, AddedMethodWithTwoStatementsIsThreeInserts) {
  auto a = parse_source("class A { void f() { run(); } }");
  auto b = parse_source("class A { void f() { run(); } void g() { first(); second(); } }");
  auto s = diff_trees(a, b);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(count_ops(s, EditKind::insert), 3u);
  EXPECT_EQ(s[0].kind, NodeKind::method);
  EXPECT_TRUE(isomorphic(apply_script(a, s), b));
  auto v = classify_edits(s);
  EXPECT_EQ(v[change::additional_functionality], 1u);
  EXPECT_EQ(v[change::statement_insert], 2u);
}

TEST(DiffTrees, ReorderedMethodsBecomeMoves) {
  auto a = parse_source("class A { void f() { alpha(); } void g() { beta(); } void h() { gamma(); } }");
  auto b = parse_source("class A { void h() { gamma(); } void f() { alpha(); } void g() { beta(); } }");
  auto s = diff_trees(a, b);
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(count_ops(s, EditKind::move), 1u);
  EXPECT_TRUE(isomorphic(apply_script(a, s), b));
}

TEST(DiffTrees, SymmetricInsertDeleteCounts) {
  std::vector<std::pair<std::string, std::string>> fixtures = {
      {kBefore, kAfter},
      {"class A { void f() { run(); } }", "class A { void f() { run(); } void g() { first(); second(); } }"},
      {"class A { }", "class A { } class B { void f() { go(); } }"},
      {"class A { void f() { if (x) { y(); } } }", "class A { void f() { z(); } }"},
  };
  for (const auto &[x, y] : fixtures) {
    auto a = parse_source(x), b = parse_source(y);
    auto ab = diff_trees(a, b), ba = diff_trees(b, a);
    EXPECT_EQ(count_ops(ab, EditKind::insert), count_ops(ba, EditKind::remove));
    EXPECT_EQ(count_ops(ab, EditKind::remove), count_ops(ba, EditKind::insert));
  }
}

TEST(DiffTrees, ApplyRejectsForeignScript) {
  auto a = parse_source("class A { }");
  EditScript s = {{EditKind::remove, 42, NodeKind::statement, "", "", kNoNode, 0}};
  EXPECT_THROW(apply_script(a, s), DataError);
}

TEST(BigramSimilarity, KnownValues) {
  EXPECT_DOUBLE_EQ(bigram_similarity("night", "nacht"), 0.25);
  EXPECT_DOUBLE_EQ(bigram_similarity("abc", "abc"), 1.0);
  EXPECT_DOUBLE_EQ(bigram_similarity("a", "b"), 0.0);
  EXPECT_DOUBLE_EQ(bigram_similarity("aaaa", "aa"), 0.5);
}

TEST(ClassifyEdits, SignatureUpdates) {
  auto upd = [](NodeKind k, std::string from, std::string to) {
    return classify_edit({EditKind::update, 1, k, std::move(to), std::move(from), kNoNode, 0});
  };
  EXPECT_EQ(upd(NodeKind::method, "void load(String p)", "void read(String p)"), change::method_renaming);
  EXPECT_EQ(upd(NodeKind::method, "void load(String p)", "void load(String p, Map<String, Integer> o)"),
            change::parameter_insert);
  EXPECT_EQ(upd(NodeKind::method, "void load(String p, int n)", "void load()"), change::parameter_delete);
  EXPECT_EQ(upd(NodeKind::method, "void load(String p)", "public void load(String p)"), change::unknown);
  EXPECT_EQ(upd(NodeKind::class_decl, "class Foo", "class Bar extends Foo"), change::class_renaming);
  EXPECT_EQ(upd(NodeKind::class_decl, "class Foo", "final class Foo"), change::unknown);
  EXPECT_EQ(classify_edit({EditKind::move, 1, NodeKind::statement, "", "", 0, 0}), change::unknown);
  EXPECT_EQ(classify_edit({EditKind::insert, 1, NodeKind::class_decl, "class B", "", 0, 0}),
            change::additional_class);
  EXPECT_EQ(classify_edit({EditKind::remove, 1, NodeKind::method, "", "void f()", 0, 0}),
            change::removed_functionality);
}

TEST(ParameterCount, Headers) {
  EXPECT_EQ(parameter_count("void f()"), 0u);
  EXPECT_EQ(parameter_count("void f( )"), 0u);
  EXPECT_EQ(parameter_count("void f(int a)"), 1u);
  EXPECT_EQ(parameter_count("void f(Map<K, V> m, int[] xs, @Ann(x = 1, y = 2) String s)"), 3u);
  EXPECT_EQ(declared_name(NodeKind::method, "public static <T> List<T> of(T x)"), "of");
  EXPECT_EQ(declared_name(NodeKind::class_decl, "public final class Foo<T> implements Bar"), "Foo");
}

TEST(DistillCommit, WorkedExample) {
  std::vector<RevisionPair> pairs = {{"src/Counter.java", kBefore, kAfter, 2}};
  auto r = distill_commit(pairs);
  EXPECT_TRUE(r.skipped.empty());
  ChangeVector expected;
  expected[change::additional_functionality] = 2;
  expected[change::statement_update] = 1;
  EXPECT_EQ(r.changes, expected);
}

TEST(DistillCommit, SkipsUnparseablePairs) {
  std::vector<RevisionPair> pairs = {{"a.java", "class A {", "class A { }", 3}, {"b.java", "", "class B { }", 3}};
  auto r = distill_commit(pairs);
  ASSERT_EQ(r.skipped.size(), 1u);
  EXPECT_EQ(r.skipped[0].path, "a.java");
  EXPECT_EQ(r.changes[change::additional_class], 1u);
  EXPECT_EQ(r.changes.total(), 1u);
}

TEST(DistillCommit, AdditiveOverPartitions) {
  std::vector<RevisionPair> p1 = {{"Counter.java", kBefore, kAfter, 2}};
  std::vector<RevisionPair> p2 = {
      {"A.java", "class A { void f() { run(); } }", "class A { void g() { run(); stop(); } }", 2},
      {"B.java", "class B { }", "", 2}};
  auto all = p1;
  all.insert(all.end(), p2.begin(), p2.end());
  EXPECT_EQ(distill_commit(all).changes, distill_commit(p1).changes + distill_commit(p2).changes);
}


TEST(DiffTrees, RandomMutationsRoundTrip) {
  Rng rng(20260501);
  for (int trial = 0; trial < 1000; ++trial) {
    Node root{NodeKind::compilation_unit, "", {}};
    for (std::size_t i = 0, n = 1 + rng.below(3); i < n; ++i)
      root.kids.push_back(random_subtree(rng, NodeKind::class_decl, 3));
    Node changed = root;
    for (std::size_t i = 0, n = 1 + rng.below(6); i < n; ++i)
      mutate(changed, rng);
    auto a = to_tree(root), b = to_tree(changed);
    auto script = diff_trees(a, b);
    auto applied = apply_script(a, script);
    ASSERT_TRUE(isomorphic(applied, b)) << "trial " << trial;
    ASSERT_EQ(classify_edits(script).total(), script.size()) << "trial " << trial;
    if (isomorphic(a, b)) {
      ASSERT_TRUE(script.empty()) << "trial " << trial;
    }
  }
}

TEST(DiffTrees, TinyBodiesKeepTheirPartners) {
  auto a = parse_source("class A { void f() { total = total + 1; } }");
  auto b = parse_source("class A { void f() { total = total + 2; } void g() { } }");
  auto v = classify_edits(diff_trees(a, b));
  EXPECT_EQ(v[change::statement_update], 1u);
  EXPECT_EQ(v[change::additional_functionality], 1u);
  EXPECT_EQ(v.total(), 2u);
}
