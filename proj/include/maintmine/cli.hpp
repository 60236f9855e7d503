#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <unistd.h>

#include "maintmine/compound.hpp"
#include "maintmine/corpus.hpp"
#include "maintmine/distill.hpp"
#include "maintmine/metrics.hpp"
#include "maintmine/model_file.hpp"
#include "maintmine/patch.hpp"
#include "maintmine/synth.hpp"
#include "maintmine/textnorm.hpp"

namespace maintmine::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

inline constexpr int kManifestVersion = 1;

// write-temp-then-rename
inline void write_atomic(const fs::path &path, const std::string &content) {
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out)
      throw DataError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out)
      throw DataError("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

inline std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Taxonomy active_taxonomy() {
  if (const char *p = std::getenv("MAINTMINE_TAXONOMY"); p && *p)
    return Taxonomy::from_file(p);
  return {};
}

// Everything a subcommand parsed, plus where its artifacts go.
struct RunConfig {
  std::string command;
  std::string dataset;
  std::string format = "csv";
  std::string model;
  std::string patches;
  std::string messages;
  std::string before;
  std::string after;
  std::string manifest;
  std::string spec = "keywords+combined";
  std::string alg = "forest";
  std::string vocab = "builtin";
  std::string component = "kw";
  std::string out;
  std::string extensions = ".java";
  double test_fraction = 0.15;
  double cf = 0.25;
  double shrinkage = 0.1;
  double subsample = 1.0;
  std::uint64_t seed = 1;
  std::uint64_t synth_seed = SynthParams{}.seed;
  std::size_t repeats = 5;
  std::size_t folds = 10;
  std::size_t top = 10;
  std::size_t trees = 500;
  std::size_t mtry = 0;
  std::size_t min_leaf = 2;
  std::size_t stages = 150;
  std::size_t depth = 3;
  std::size_t threads = 0;
  std::size_t tree_index = 0;
  bool partition_train = false;
  bool pair_creations = false;
  bool tune = false;
};

// Output sink of one run: artifacts under --out plus the manifest.
class Run {
public:
  Run(const CLI::App &sub, const RunConfig &cfg, std::ostream &out) : cfg_(cfg), out_(out) {
    options_ = ojson::object();
    for (const CLI::Option *o : sub.get_options()) {
      const std::string name = o->get_single_name();
      if (name.empty() || name == "help" || name == "out" || name == "manifest")
        continue;
      if (o->get_expected_min() == 0)
        options_[name] = o->count() > 0;
      else if (o->count() > 0)
        options_[name] = o->as<std::string>();
      else if (!o->get_default_str().empty())
        options_[name] = o->get_default_str();
    }
  }

  const fs::path dir() const { return cfg_.out; }

  void input(const std::string &role, const std::string &path) {
    inputs_[role] = {{"path", path}, {"crc32", crc32_hex(slurp(path))}};
  }

  void artifact(const std::string &name, const std::string &content) {
    if (cfg_.out.empty()) {
      out_ << content;
      return;
    }
    write_atomic(fs::path(cfg_.out) / name, content);
    artifacts_.push_back(name);
  }

  void finish() {
    if (cfg_.out.empty())
      return;
    ojson m;
    m["maintmine_manifest"] = kManifestVersion;
    m["command"] = cfg_.command;
    m["options"] = options_;
    m["inputs"] = inputs_;
    m["artifacts"] = artifacts_;
    if (const char *p = std::getenv("MAINTMINE_TAXONOMY"); p && *p)
      m["taxonomy"] = p;
    write_atomic(fs::path(cfg_.out) / "manifest.json", m.dump(2) + "\n");
  }

private:
  const RunConfig &cfg_;
  std::ostream &out_;
  ojson options_;
  ojson inputs_ = ojson::object();
  std::vector<std::string> artifacts_;
};

inline CompoundSpec spec_from(const RunConfig &c) {
  CompoundSpec s;
  std::tie(s.kw, s.nokw) = parse_spec_types(c.spec);
  s.algorithm = parse_algorithm(c.alg);
  s.seed = c.seed;
  s.partition_train = c.partition_train;
  s.tree.cf = c.cf;
  s.tree.min_leaf = c.min_leaf;
  s.forest.trees = c.trees;
  s.forest.mtry = c.mtry;
  s.forest.threads = c.threads;
  s.boost.stages = c.stages;
  s.boost.depth = c.depth;
  s.boost.shrinkage = c.shrinkage;
  s.boost.subsample = c.subsample;
  return s;
}

inline LabeledDataset load_labeled(const RunConfig &c, const Taxonomy &tax, Run &run, std::ostream &err) {
  if (c.dataset.empty())
    throw UsageError("--dataset is required");
  std::vector<std::string> warnings;
  auto ds = import_dataset(c.dataset, parse_format(c.format), tax, &warnings);
  for (const auto &w : warnings)
    err << "warning: " << w << "\n";
  run.input("dataset", c.dataset);
  return ds;
}

inline Vocabulary vocabulary_for(const RunConfig &c, const LabeledDataset &train, const StopwordConfig &cfg) {
  if (c.vocab == "builtin")
    return Vocabulary::builtin();
  if (c.vocab == "derived")
    return derive_vocabulary(train, c.top, cfg);
  auto words = read_word_list(c.vocab);
  Vocabulary v;
  v.words.assign(words.begin(), words.end());
  if (v.words.empty())
    throw DataError("vocabulary file '" + c.vocab + "' is empty");
  return v;
}

inline std::string dataset_csv(const std::vector<Commit> &commits, const Taxonomy &tax) {
  std::ostringstream s;
  write_commits(s, commits, DatasetFormat::csv, tax);
  return s.str();
}

inline std::vector<MaintenanceClass> truth_of(const LabeledDataset &ds) {
  std::vector<MaintenanceClass> t;
  for (const auto &c : ds.commits())
    t.push_back(*c.label);
  return t;
}

inline std::string importance_text(const ImportanceList &list, std::size_t limit) {
  std::ostringstream s;
  char buf[128];
  for (std::size_t i = 0; i < list.size() && i < limit; ++i) {
    std::snprintf(buf, sizeof buf, "%-36s %.4f\n", list[i].first.c_str(), list[i].second);
    s << buf;
  }
  return s.str();
}

// Subcommands -----------------------------------------------------------

inline void cmd_import(const RunConfig &c, Run &run, std::ostream &out, std::ostream &err) {
  const auto tax = active_taxonomy();
  if (c.dataset.empty())
    throw UsageError("--dataset is required");
  std::vector<std::string> warnings;
  auto commits = import_commits(c.dataset, parse_format(c.format), tax, &warnings);
  run.input("dataset", c.dataset);
  std::string w;
  for (const auto &s : warnings) {
    err << "warning: " << s << "\n";
    w += s + "\n";
  }
  run.artifact("dataset.csv", dataset_csv(commits, tax));
  if (!c.out.empty())
    run.artifact("warnings.txt", w);
  std::size_t unlabeled = 0;
  ClassCounts counts;
  for (const auto &cm : commits)
    cm.label ? ++counts[*cm.label] : ++unlabeled;
  out << "commits: " << commits.size() << " (corrective " << counts[MaintenanceClass::corrective] << ", perfective "
      << counts[MaintenanceClass::perfective] << ", adaptive " << counts[MaintenanceClass::adaptive]
      << ", unlabeled " << unlabeled << ")\n";
}

inline std::string change_vector_line(const ChangeVector &v, const Taxonomy &tax) {
  ojson j = ojson::object();
  for (std::size_t i = 0; i < kNumChangeTypes; ++i)
    if (v[i])
      j[tax.label(i)] = v[i];
  return j.dump();
}

// Either one file pair (--before/--after) or a whole patch series
// (--patches, one commit per patch). With --messages the series becomes a
// labeled dataset: CSV `revision,id,message,label`.
inline void cmd_distill(const RunConfig &c, Run &run, std::ostream &out, std::ostream &err) {
  const auto tax = active_taxonomy();
  if (!c.before.empty() || !c.after.empty()) {
    if (c.before.empty() || c.after.empty())
      throw UsageError("--before and --after go together");
    run.input("before", c.before);
    run.input("after", c.after);
    auto before = parse_source(slurp(c.before)), after = parse_source(slurp(c.after));
    auto script = diff_trees(before, after);
    ojson ops = ojson::array();
    for (const auto &op : script) {
      auto j = to_json(op);
      j["change_type"] = tax.label(classify_edit(op));
      ops.push_back(j);
    }
    run.artifact("script.json", ops.dump(2) + "\n");
    run.artifact("changes.json", change_vector_line(classify_edits(script), tax) + "\n");
    return;
  }
  if (c.patches.empty())
    throw UsageError("distill needs --patches <dir> or --before/--after");
  auto series = load_patch_series(c.patches);
  ReplayOptions opts;
  opts.pair_creations = c.pair_creations;
  opts.extensions.clear();
  std::stringstream exts(c.extensions);
  for (std::string e; std::getline(exts, e, ',');)
    if (!e.empty())
      opts.extensions.push_back(e);

  PatchReplayer replayer(opts);
  std::vector<ChangeVector> per_revision;
  std::string skipped;
  for (const auto &patch : series.patches) {
    auto r = distill_commit(replayer.apply(patch));
    for (const auto &s : r.skipped) {
      err << "skipped " << s.path << " at revision " << s.revision << ": " << s.reason << "\n";
      skipped += std::to_string(s.revision) + "\t" + s.path + "\t" + s.reason + "\n";
    }
    per_revision.push_back(r.changes);
  }
  run.input("patches", c.patches);

  std::ostringstream table;
  std::vector<std::string> header = {"revision"};
  header.insert(header.end(), tax.labels().begin(), tax.labels().end());
  csv::write_row(table, header);
  for (std::size_t i = 0; i < per_revision.size(); ++i) {
    std::vector<std::string> row = {std::to_string(i + 1)};
    for (auto n : per_revision[i].counts)
      row.push_back(std::to_string(n));
    csv::write_row(table, row);
  }
  run.artifact("changes.csv", table.str());
  if (!c.out.empty())
    run.artifact("skipped.tsv", skipped);

  if (!c.messages.empty()) {
    run.input("messages", c.messages);
    std::ifstream in(c.messages, std::ios::binary);
    if (!in)
      throw DataError("cannot open '" + c.messages + "'");
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header || header->fields != std::vector<std::string>{"revision", "id", "message", "label"})
      throw ParseError(1, "messages file must have header revision,id,message,label");
    std::vector<Commit> commits;
    while (auto rec = reader.next()) {
      const auto &f = rec->fields;
      if (f.size() != 4)
        throw ParseError(rec->line, "expected 4 fields");
      const auto rev = maintmine::detail::parse_count(f[0], rec->line, "revision");
      if (rev < 1 || rev > per_revision.size())
        throw ParseError(rec->line, "revision " + f[0] + " outside the patch series");
      Commit cm;
      cm.id = f[1];
      cm.project = series.repository;
      cm.message = f[2];
      cm.label = maintmine::detail::parse_label_field(f[3], rec->line);
      cm.changes = per_revision[rev - 1];
      commits.push_back(std::move(cm));
    }
    run.artifact("dataset.csv", dataset_csv(commits, tax));
  }
  out << "revisions: " << per_revision.size() << "\n";
}

inline void cmd_vocab(const RunConfig &c, Run &run, std::ostream &out, std::ostream &err) {
  const auto cfg = StopwordConfig::defaults();
  Vocabulary v;
  if (c.dataset.empty()) {
    v = Vocabulary::builtin();
  } else {
    auto ds = load_labeled(c, active_taxonomy(), run, err);
    v = derive_vocabulary(ds, c.top, cfg);
  }
  std::string text;
  for (const auto &w : v.words)
    text += w + "\n";
  run.artifact("vocabulary.txt", text);
  if (!c.out.empty())
    out << v.size() << " keywords\n";
}

inline void cmd_freq(const RunConfig &c, Run &run, std::ostream &, std::ostream &err) {
  const auto tax = active_taxonomy();
  auto ds = load_labeled(c, tax, run, err);
  std::ostringstream words;
  write_frequency_csv(words, ds, StopwordConfig::defaults());
  run.artifact("word_frequencies.csv", words.str());

  std::ostringstream changes;
  csv::write_row(changes, {"change_type", "count", "class"});
  for (auto cls : kAllClasses) {
    ChangeVector sum;
    for (const auto &cm : ds.commits())
      if (*cm.label == cls)
        sum += cm.changes;
    std::vector<std::size_t> order(kNumChangeTypes);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return sum[a] > sum[b]; });
    for (auto t : order)
      if (sum[t])
        csv::write_row(changes, {tax.label(t), std::to_string(sum[t]), std::string(to_string(cls))});
  }
  run.artifact("change_frequencies.csv", changes.str());
}

inline void cmd_synth(const RunConfig &c, Run &run, std::ostream &out, std::ostream &) {
  SynthParams p;
  p.seed = c.synth_seed;
  auto ds = synthesize_corpus(p);
  run.artifact("synthetic_corpus.csv", dataset_csv(ds.commits(), Taxonomy{}));
  if (!c.out.empty())
    out << ds.size() << " synthetic commits\n";
}

inline void cmd_train(const RunConfig &c, Run &run, std::ostream &out, std::ostream &err) {
  if (c.out.empty())
    throw UsageError("train needs --out <dir>");
  const auto tax = active_taxonomy();
  const auto cfg = StopwordConfig::defaults();
  auto ds = load_labeled(c, tax, run, err);
  auto spec = spec_from(c);

  LabeledDataset train = ds;
  if (c.test_fraction > 0) {
    auto split = split_holdout(ds, c.test_fraction, c.seed);
    train = std::move(split.train);
    run.artifact("train.csv", dataset_csv(train.commits(), tax));
    run.artifact("test.csv", dataset_csv(split.test.commits(), tax));
  }
  const auto vocab = vocabulary_for(c, train, cfg);

  std::string tuning_text;
  if (c.tune) {
    auto t = tune_spec(train, spec, vocab, cfg, tax.labels(), c.repeats, c.folds, c.seed);
    ojson cand = ojson::array();
    for (const auto &[s, summary] : t.candidates) {
      ojson j;
      j["spec"] = nlohmann::json(s);
      j["cv"] = resamples_to_json(summary);
      cand.push_back(std::move(j));
      tuning_text += nlohmann::json(s).dump() + "\n" + render_resamples(summary) + "\n";
    }
    spec = t.best;
    spec.forest.threads = c.threads;
    run.artifact("tuning.json", cand.dump(2) + "\n");
    run.artifact("tuning.txt", tuning_text);
  }

  const auto model = train_compound(train, spec, vocab, cfg, tax.labels());
  run.artifact("model.mmcm", serialize_model(model));

  std::vector<MaintenanceClass> pred;
  std::size_t nokw = 0;
  for (const auto &r : classify_all(model, train)) {
    pred.push_back(r.label);
    nokw += r.path == DispatchPath::nokw;
  }
  const auto report = evaluate(confusion(pred, truth_of(train)));
  std::ostringstream text;
  text << "spec: " << spec_types_string(spec) << " " << to_string(spec.algorithm) << " seed " << spec.seed << "\n";
  text << "training commits: " << train.size() << " (" << nokw << " without keywords)\n\n";
  text << render_report(report);
  ojson j;
  j["spec"] = nlohmann::json(spec);
  j["training"] = report_to_json(report);
  j["nokw_commits"] = nokw;
  for (auto [name, m] : {std::pair{"kw", &model.kw_model}, std::pair{"nokw", &model.nokw_model}}) {
    if (!*m)
      continue;
    auto imp = feature_importance(**m);
    text << "\nfeature importance (" << name << " component)\n" << importance_text(imp, 15);
    ojson list = ojson::array();
    for (const auto &[f, v] : imp)
      list.push_back({f, v});
    j["importance"][name] = std::move(list);
  }
  run.artifact("training_report.txt", text.str());
  run.artifact("training_report.json", j.dump(2) + "\n");
  out << "training accuracy " << format_percent(report.accuracy) << ", kappa " << format_percent(report.kappa)
      << "\n";
}

inline void cmd_classify(const RunConfig &c, Run &run, std::ostream &, std::ostream &err) {
  if (c.model.empty())
    throw UsageError("--model is required");
  const auto tax = active_taxonomy();
  auto model = load_model(c.model);
  run.input("model", c.model);
  if (c.dataset.empty())
    throw UsageError("--dataset is required");
  std::vector<std::string> warnings;
  auto commits = import_commits(c.dataset, parse_format(c.format), tax, &warnings);
  for (const auto &w : warnings)
    err << "warning: " << w << "\n";
  run.input("dataset", c.dataset);
  std::ostringstream s;
  csv::write_row(s, {"id", "predicted", "path", "score_adaptive", "score_corrective", "score_perfective"});
  for (const auto &cm : commits) {
    auto r = classify_commit(model, cm);
    csv::write_row(s, {cm.id, std::string(to_string(r.label)), std::string(to_string(r.path)),
                       format_number(r.scores[MaintenanceClass::adaptive]),
                       format_number(r.scores[MaintenanceClass::corrective]),
                       format_number(r.scores[MaintenanceClass::perfective])});
  }
  run.artifact("predictions.csv", s.str());
}

inline void cmd_evaluate(const RunConfig &c, Run &run, std::ostream &out, std::ostream &err) {
  if (c.model.empty())
    throw UsageError("--model is required");
  auto model = load_model(c.model);
  run.input("model", c.model);
  auto ds = load_labeled(c, active_taxonomy(), run, err);
  std::vector<MaintenanceClass> pred;
  for (const auto &r : classify_all(model, ds))
    pred.push_back(r.label);
  const auto report = evaluate(confusion(pred, truth_of(ds)));
  const auto text = render_report(report);
  run.artifact("report.txt", text);
  if (!c.out.empty()) {
    run.artifact("report.json", report_to_json(report).dump(2) + "\n");
    out << text;
  }
}

inline void cmd_cv(const RunConfig &c, Run &run, std::ostream &out, std::ostream &err) {
  const auto tax = active_taxonomy();
  const auto cfg = StopwordConfig::defaults();
  auto ds = load_labeled(c, tax, run, err);
  const auto vocab = vocabulary_for(c, ds, cfg);
  auto summary = repeated_cv(ds, spec_from(c), vocab, cfg, tax.labels(), c.repeats, c.folds, c.seed);
  const auto text = render_resamples(summary);
  run.artifact("cv.txt", text);
  if (!c.out.empty()) {
    run.artifact("cv.json", resamples_to_json(summary).dump(2) + "\n");
    out << text;
  }
}

inline void cmd_render_tree(const RunConfig &c, Run &run, std::ostream &, std::ostream &) {
  if (c.model.empty())
    throw UsageError("--model is required");
  auto model = load_model(c.model);
  run.input("model", c.model);
  if (c.component != "kw" && c.component != "nokw")
    throw UsageError("--component must be kw or nokw");
  const auto &slot = c.component == "nokw" && model.nokw_model ? model.nokw_model : model.kw_model;
  if (!slot)
    throw DataError("the model has no decision-tree component");
  std::string text;
  if (auto *t = std::get_if<TreeModel>(&*slot)) {
    text = render_tree(*t);
  } else if (auto *f = std::get_if<ForestModel>(&*slot)) {
    if (c.tree_index >= f->trees.size())
      throw UsageError("--tree-index out of range (forest has " + std::to_string(f->trees.size()) + " trees)");
    TreeModel view{f->trees[c.tree_index], {}, f->class_counts, f->feature_names};
    text = render_tree(view);
  } else {
    throw DataError("boosted models have no single tree to render");
  }
  run.artifact("tree.txt", text);
}

// Re-runs a recorded manifest into a new output directory.
inline std::vector<std::string> replay_args(const std::string &manifest_path, const std::string &out_dir) {
  ojson m;
  try {
    m = ojson::parse(slurp(manifest_path));
  } catch (const nlohmann::json::exception &e) {
    throw DataError("malformed manifest: " + std::string(e.what()));
  }
  if (m.value("maintmine_manifest", 0) != kManifestVersion)
    throw DataError("unsupported manifest version");
  std::vector<std::string> args = {m.at("command").get<std::string>()};
  for (const auto &[k, v] : m.at("options").items()) {
    if (v.is_boolean()) {
      if (v.get<bool>())
        args.push_back("--" + k);
    } else {
      args.push_back("--" + k);
      args.push_back(v.get<std::string>());
    }
  }
  args.push_back("--out");
  args.push_back(out_dir);
  return args;
}

int run(std::vector<std::string> args, std::ostream &out = std::cout, std::ostream &err = std::cerr);

namespace detail {

inline void add_common(CLI::App *s, RunConfig &c) {
  s->add_option("--out", c.out, "output directory");
  s->add_option("--seed", c.seed, "random seed")->capture_default_str();
}

inline void add_dataset(CLI::App *s, RunConfig &c) {
  s->add_option("--dataset", c.dataset, "labeled dataset file");
  s->add_option("--format", c.format, "csv or jsonl")->capture_default_str()->check(CLI::IsMember({"csv", "jsonl"}));
}

inline void add_model_params(CLI::App *s, RunConfig &c) {
  s->add_option("--spec", c.spec, "<kw-type>+<nokw-type>")->capture_default_str();
  s->add_option("--alg", c.alg, "tree, forest, boost or naive")
      ->capture_default_str()
      ->check(CLI::IsMember({"tree", "forest", "boost", "naive"}));
  s->add_option("--vocab", c.vocab, "builtin, derived or a word-list file")->capture_default_str();
  s->add_option("--top", c.top, "keywords per class for a derived vocabulary")->capture_default_str();
  s->add_option("--trees", c.trees, "forest size")->capture_default_str();
  s->add_option("--mtry", c.mtry, "features tried per split (0 = sqrt)")->capture_default_str();
  s->add_option("--cf", c.cf, "C4.5 pruning confidence")->capture_default_str();
  s->add_option("--min-leaf", c.min_leaf, "C4.5 minimum leaf size")->capture_default_str();
  s->add_option("--stages", c.stages, "boosting stages")->capture_default_str();
  s->add_option("--depth", c.depth, "boosting tree depth")->capture_default_str();
  s->add_option("--shrinkage", c.shrinkage, "boosting learning rate")->capture_default_str();
  s->add_option("--subsample", c.subsample, "boosting row fraction")->capture_default_str();
  s->add_option("--threads", c.threads, "worker threads (0 = all cores)")->capture_default_str();
  s->add_flag("--partition-train", c.partition_train, "train each component on its own commits only");
}

inline int dispatch(const std::string &name, const CLI::App &sub, const RunConfig &c, std::ostream &out,
                    std::ostream &err) {
  Run r(sub, c, out);
  if (name == "import")
    cmd_import(c, r, out, err);
  else if (name == "distill")
    cmd_distill(c, r, out, err);
  else if (name == "vocab")
    cmd_vocab(c, r, out, err);
  else if (name == "train")
    cmd_train(c, r, out, err);
  else if (name == "classify")
    cmd_classify(c, r, out, err);
  else if (name == "evaluate")
    cmd_evaluate(c, r, out, err);
  else if (name == "cv")
    cmd_cv(c, r, out, err);
  else if (name == "render-tree")
    cmd_render_tree(c, r, out, err);
  else if (name == "freq")
    cmd_freq(c, r, out, err);
  else if (name == "synth")
    cmd_synth(c, r, out, err);
  r.finish();
  return 0;
}

} // namespace detail

// Exit codes: 0 success, 1 usage error, 2 data error.
inline int run(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
  RunConfig c;
  CLI::App app{"maintmine: classify commits into maintenance activities", "maintmine"};
  app.require_subcommand(1);

  auto *import = app.add_subcommand("import", "validate a dataset and write it in canonical CSV");
  detail::add_dataset(import, c);
  import->add_option("--out", c.out, "output directory");

  auto *distill = app.add_subcommand("distill", "extract change-type counts from source revisions");
  distill->add_option("--patches", c.patches, "patch series directory (000001.patch, ...)");
  distill->add_option("--messages", c.messages, "CSV revision,id,message,label to build a dataset");
  distill->add_option("--before", c.before, "older revision of one file");
  distill->add_option("--after", c.after, "newer revision of one file");
  distill->add_option("--extensions", c.extensions, "comma-separated source extensions")->capture_default_str();
  distill->add_flag("--pair-creations", c.pair_creations, "distill created and deleted files too");
  distill->add_option("--out", c.out, "output directory");

  auto *vocab = app.add_subcommand("vocab", "print the built-in or a derived keyword vocabulary");
  detail::add_dataset(vocab, c);
  vocab->add_option("--top", c.top, "keywords per class")->capture_default_str();
  vocab->add_option("--out", c.out, "output directory");

  auto *train = app.add_subcommand("train", "train a compound model");
  detail::add_dataset(train, c);
  detail::add_common(train, c);
  detail::add_model_params(train, c);
  train->add_option("--test-fraction", c.test_fraction, "held-out share (0 = train on everything)")
      ->capture_default_str();
  train->add_flag("--tune", c.tune, "pick parameters by repeated cross-validation");
  train->add_option("--repeats", c.repeats, "tuning repeats")->capture_default_str();
  train->add_option("--folds", c.folds, "tuning folds")->capture_default_str();

  auto *classify = app.add_subcommand("classify", "label commits with a trained model");
  detail::add_dataset(classify, c);
  classify->add_option("--model", c.model, "model file");
  classify->add_option("--out", c.out, "output directory");

  auto *evaluate = app.add_subcommand("evaluate", "confusion matrix and statistics of a model on a dataset");
  detail::add_dataset(evaluate, c);
  evaluate->add_option("--model", c.model, "model file");
  evaluate->add_option("--out", c.out, "output directory");

  auto *cv = app.add_subcommand("cv", "repeated stratified cross-validation");
  detail::add_dataset(cv, c);
  detail::add_common(cv, c);
  detail::add_model_params(cv, c);
  cv->add_option("--repeats", c.repeats, "repeats")->capture_default_str();
  cv->add_option("--folds", c.folds, "folds per repeat")->capture_default_str();

  auto *render = app.add_subcommand("render-tree", "print a decision tree of a model");
  render->add_option("--model", c.model, "model file");
  render->add_option("--component", c.component, "kw or nokw")->capture_default_str();
  render->add_option("--tree-index", c.tree_index, "tree of a forest")->capture_default_str();
  render->add_option("--out", c.out, "output directory");

  auto *freq = app.add_subcommand("freq", "word and change-type frequency tables per class");
  detail::add_dataset(freq, c);
  freq->add_option("--out", c.out, "output directory");

  auto *synth = app.add_subcommand("synth", "write the synthetic benchmark corpus");
  synth->add_option("--seed", c.synth_seed, "generator seed")->capture_default_str();
  synth->add_option("--out", c.out, "output directory");

  auto *replay = app.add_subcommand("replay", "re-run a recorded manifest");
  replay->add_option("--manifest", c.manifest, "manifest.json of an earlier run")->required();
  replay->add_option("--out", c.out, "output directory")->required();

  if (args.empty()) {
    err << app.help();
    return 1;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands()[0]->help());
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  const CLI::App *sub = app.get_subcommands().at(0);
  const std::string name = sub->get_name();
  c.command = name;
  try {
    if (name == "replay")
      return run(replay_args(c.manifest, c.out), out, err);
    return detail::dispatch(name, *sub, c, out, err);
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n\n" << sub->help();
    return 1;
  } catch (const DataError &e) {
    err << "error: " << e.what() << "\nrun 'maintmine " << name << " --help' for usage\n";
    return 2;
  } catch (const fs::filesystem_error &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

} // namespace maintmine::cli
