#pragma once

#include <string>
#include <vector>

#include "maintmine/patch.hpp"
#include "maintmine/source_tree.hpp"
#include "maintmine/taxonomy.hpp"
#include "maintmine/tree_diff.hpp"

namespace maintmine {

// Change type index for one edit op. Signature updates of methods and types
// are split by name and parameter count; everything the built-in frontend
// cannot name (moves, other header edits) is "unknown".
inline std::size_t classify_edit(const EditOp &op) {
  switch (op.kind) {
  case NodeKind::statement:
    switch (op.op) {
    case EditKind::insert:
      return change::statement_insert;
    case EditKind::remove:
      return change::statement_delete;
    case EditKind::update:
      return change::statement_update;
    case EditKind::move:
      return change::unknown;
    }
    break;
  case NodeKind::method:
    switch (op.op) {
    case EditKind::insert:
      return change::additional_functionality;
    case EditKind::remove:
      return change::removed_functionality;
    case EditKind::update: {
      if (declared_name(op.kind, op.old_value) != declared_name(op.kind, op.value))
        return change::method_renaming;
      auto before = parameter_count(op.old_value), after = parameter_count(op.value);
      if (after > before)
        return change::parameter_insert;
      if (after < before)
        return change::parameter_delete;
      return change::unknown;
    }
    case EditKind::move:
      return change::unknown;
    }
    break;
  case NodeKind::class_decl:
    switch (op.op) {
    case EditKind::insert:
      return change::additional_class;
    case EditKind::remove:
      return change::removed_class;
    case EditKind::update:
      return declared_name(op.kind, op.old_value) != declared_name(op.kind, op.value) ? change::class_renaming
                                                                                      : change::unknown;
    case EditKind::move:
      return change::unknown;
    }
    break;
  case NodeKind::compilation_unit:
  case NodeKind::comment:
    break;
  }
  return change::unknown;
}

inline ChangeVector classify_edits(const EditScript &script) {
  ChangeVector v;
  for (const auto &op : script)
    ++v.counts[classify_edit(op)];
  return v;
}

struct SkippedPair {
  std::string path;
  std::size_t revision = 0;
  std::string reason;
};

struct DistillResult {
  ChangeVector changes;
  std::vector<SkippedPair> skipped;
};

inline ChangeVector distill_pair(const RevisionPair &pair) {
  return classify_edits(diff_trees(parse_source(pair.before), parse_source(pair.after)));
}

// Sum of classified edits over all pairs of one commit. Pairs that fail to
// parse are skipped and reported.
inline DistillResult distill_commit(const std::vector<RevisionPair> &pairs) {
  DistillResult r;
  for (const auto &p : pairs) {
    try {
      r.changes += distill_pair(p);
    } catch (const DataError &e) {
      r.skipped.push_back({p.path, p.revision, e.what()});
    }
  }
  return r;
}

} // namespace maintmine
