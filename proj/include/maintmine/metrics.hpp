#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "maintmine/compound.hpp"
#include "maintmine/corpus.hpp"
#include "maintmine/error.hpp"
#include "maintmine/rng.hpp"

namespace maintmine {

// 3x3 counts, rows = classified as, columns = true class.
struct ConfusionMatrix {
  PerClass<PerClass<std::size_t>> cells; // cells[pred][truth]

  std::size_t &at(MaintenanceClass pred, MaintenanceClass truth) { return cells[pred][truth]; }
  std::size_t at(MaintenanceClass pred, MaintenanceClass truth) const { return cells[pred][truth]; }

  // Rows and columns in report order (adaptive, corrective, perfective).
  static ConfusionMatrix from_rows(const std::array<std::array<std::size_t, 3>, 3> &rows) {
    ConfusionMatrix m;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        m.at(kReportOrder[i], kReportOrder[j]) = rows[i][j];
    return m;
  }

  std::size_t row_sum(MaintenanceClass pred) const {
    std::size_t s = 0;
    for (auto t : kAllClasses)
      s += at(pred, t);
    return s;
  }
  std::size_t col_sum(MaintenanceClass truth) const {
    std::size_t s = 0;
    for (auto p : kAllClasses)
      s += at(p, truth);
    return s;
  }
  std::size_t trace() const {
    std::size_t s = 0;
    for (auto c : kAllClasses)
      s += at(c, c);
    return s;
  }
  std::size_t total() const {
    std::size_t s = 0;
    for (auto c : kAllClasses)
      s += row_sum(c);
    return s;
  }

  bool operator==(const ConfusionMatrix &) const = default;
};

inline ConfusionMatrix confusion(std::span<const MaintenanceClass> pred, std::span<const MaintenanceClass> truth) {
  if (pred.size() != truth.size())
    throw DataError("prediction and truth lists differ in length (" + std::to_string(pred.size()) + " vs " +
                    std::to_string(truth.size()) + ")");
  if (pred.empty())
    throw DataError("confusion matrix of zero commits");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < pred.size(); ++i)
    ++m.at(pred[i], truth[i]);
  return m;
}

// P(X >= successes) for X ~ Binomial(n, p0), summed exactly in log space.
inline double binomial_test_greater(std::size_t successes, std::size_t n, double p0) {
  if (successes > n)
    throw DataError("binomial test: successes exceed trials");
  if (!(p0 > 0.0 && p0 < 1.0))
    throw DataError("binomial test: p0 must lie in (0,1)");
  if (successes == 0)
    return 1.0;
  const double lp = std::log(p0), lq = std::log1p(-p0), nn = static_cast<double>(n);
  const double lfn = std::lgamma(nn + 1);
  std::vector<double> terms;
  terms.reserve(n - successes + 1);
  for (std::size_t k = successes; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    terms.push_back(lfn - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1) + kk * lp + (nn - kk) * lq);
  }
  const double top = *std::max_element(terms.begin(), terms.end());
  double sum = 0;
  for (double t : terms)
    sum += std::exp(t - top);
  return std::min(1.0, std::exp(top + std::log(sum)));
}

struct EvaluationReport {
  ConfusionMatrix matrix;
  std::size_t n = 0;
  PerClass<std::optional<double>> precision; // absent when nothing was classified as the class
  PerClass<std::optional<double>> recall;    // absent when the class does not occur
  double accuracy = 0;
  double kappa = 0;
  double nir = 0;
  double p_value = 1; // accuracy > NIR
};

inline EvaluationReport evaluate(const ConfusionMatrix &cm) {
  EvaluationReport r;
  r.matrix = cm;
  r.n = cm.total();
  if (r.n == 0)
    throw DataError("cannot evaluate an empty confusion matrix");
  const double n = static_cast<double>(r.n);
  double pe = 0;
  std::size_t max_col = 0;
  for (auto c : kAllClasses) {
    const auto rs = cm.row_sum(c), cs = cm.col_sum(c);
    if (rs)
      r.precision[c] = static_cast<double>(cm.at(c, c)) / static_cast<double>(rs);
    if (cs)
      r.recall[c] = static_cast<double>(cm.at(c, c)) / static_cast<double>(cs);
    pe += static_cast<double>(rs) * static_cast<double>(cs) / (n * n);
    max_col = std::max(max_col, cs);
  }
  r.accuracy = static_cast<double>(cm.trace()) / n;
  // p_e = 1 only when predictions and truth are one and the same class.
  r.kappa = pe >= 1.0 ? 1.0 : (r.accuracy - pe) / (1.0 - pe);
  r.nir = static_cast<double>(max_col) / n;
  r.p_value = r.nir >= 1.0 ? 1.0 : binomial_test_greater(cm.trace(), r.n, r.nir);
  return r;
}

struct AgreementInterval {
  double estimate = 0; // rates, rounded to 0.1 percentage point
  double margin = 0;
  double lower = 0;
  double upper = 0;
};

inline double round_to_permille(double rate) { return std::round(rate * 1000.0) / 1000.0; }

// Normal-approximation 95% interval for an observed agreement share.
// Estimate and margin are rounded to one decimal percentage point before
// the interval is formed.
inline AgreementInterval proportion_agreement_ci(std::size_t agree, std::size_t n) {
  if (n == 0)
    throw DataError("agreement interval of zero items");
  if (agree > n)
    throw DataError("agreement count exceeds item count");
  const double p = static_cast<double>(agree) / static_cast<double>(n);
  AgreementInterval ci;
  ci.estimate = round_to_permille(p);
  ci.margin = round_to_permille(1.96 * std::sqrt(p * (1 - p) / static_cast<double>(n)));
  ci.lower = round_to_permille(ci.estimate - ci.margin);
  ci.upper = round_to_permille(ci.estimate + ci.margin);
  return ci;
}

struct SixNumberSummary {
  double min = 0, q1 = 0, median = 0, mean = 0, q3 = 0, max = 0;
  bool operator==(const SixNumberSummary &) const = default;
};

// Quantile by linear interpolation between order statistics:
// h = (n - 1) p, Q = x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h]).
inline double quantile_linear(std::span<const double> sorted, double p) {
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline SixNumberSummary summarize_resamples(std::vector<double> xs) {
  if (xs.empty())
    throw DataError("cannot summarize an empty resample list");
  std::sort(xs.begin(), xs.end());
  SixNumberSummary s;
  s.min = xs.front();
  s.max = xs.back();
  s.q1 = quantile_linear(xs, 0.25);
  s.median = quantile_linear(xs, 0.5);
  s.q3 = quantile_linear(xs, 0.75);
  double sum = 0;
  for (double x : xs)
    sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  return s;
}

struct Resample {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  double accuracy = 0;
  double kappa = 0;
  std::vector<std::size_t> test_rows;
};

struct ResampleSummary {
  std::vector<Resample> resamples; // repeat-major, fold-minor
  SixNumberSummary accuracy;
  SixNumberSummary kappa;
};

// Fold index of each row: every class is shuffled and dealt round-robin,
// the deal continuing where the previous class stopped.
inline std::vector<std::size_t> stratified_folds(const LabeledDataset &ds, std::size_t folds, Rng &rng) {
  std::vector<std::size_t> fold_of(ds.size());
  std::size_t next = 0;
  for (auto cls : kAllClasses) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < ds.size(); ++i)
      if (*ds[i].label == cls)
        members.push_back(i);
    rng.shuffle(std::span<std::size_t>(members));
    for (auto i : members) {
      fold_of[i] = next;
      next = (next + 1) % folds;
    }
  }
  return fold_of;
}

using FitPredict =
    std::function<std::vector<MaintenanceClass>(const LabeledDataset &train, const LabeledDataset &test)>;

// Repeated stratified k-fold cross-validation around any train/predict
// routine. Repeat r shuffles with Rng(seed + r). Every class needs at least
// `folds` members, except for leave-one-out (folds == size).
inline ResampleSummary cross_validate(const LabeledDataset &ds, std::size_t repeats, std::size_t folds,
                                      std::uint64_t seed, const FitPredict &fit_predict) {
  if (repeats == 0)
    throw UsageError("cross-validation needs at least one repeat");
  if (folds < 2 || folds > ds.size())
    throw UsageError("fold count must lie in [2, " + std::to_string(ds.size()) + "]");
  if (folds != ds.size())
    for (auto c : kAllClasses)
      if (ds.class_counts()[c] < folds)
        throw DataError("class '" + std::string(to_string(c)) + "' has " +
                        std::to_string(ds.class_counts()[c]) + " commits, fewer than " + std::to_string(folds) +
                        " folds");
  ResampleSummary out;
  std::vector<double> acc, kap;
  for (std::size_t r = 0; r < repeats; ++r) {
    Rng rng(seed + r);
    const auto fold_of = stratified_folds(ds, folds, rng);
    for (std::size_t f = 0; f < folds; ++f) {
      std::vector<std::size_t> train_rows, test_rows;
      for (std::size_t i = 0; i < ds.size(); ++i)
        (fold_of[i] == f ? test_rows : train_rows).push_back(i);
      const auto test = ds.subset(test_rows);
      const auto pred = fit_predict(ds.subset(train_rows), test);
      std::vector<MaintenanceClass> truth;
      for (const auto &c : test.commits())
        truth.push_back(*c.label);
      const auto rep = evaluate(confusion(pred, truth));
      out.resamples.push_back({r, f, rep.accuracy, rep.kappa, std::move(test_rows)});
      acc.push_back(rep.accuracy);
      kap.push_back(rep.kappa);
    }
  }
  out.accuracy = summarize_resamples(acc);
  out.kappa = summarize_resamples(kap);
  return out;
}

inline FitPredict compound_fit_predict(const CompoundSpec &spec, const Vocabulary &vocab, const StopwordConfig &cfg,
                                       const std::vector<std::string> &labels) {
  return [=](const LabeledDataset &train, const LabeledDataset &test) {
    const auto m = train_compound(train, spec, vocab, cfg, labels);
    std::vector<MaintenanceClass> pred;
    for (const auto &c : classify_all(m, test))
      pred.push_back(c.label);
    return pred;
  };
}

inline ResampleSummary repeated_cv(const LabeledDataset &ds, const CompoundSpec &spec, const Vocabulary &vocab,
                                   const StopwordConfig &cfg, const std::vector<std::string> &labels,
                                   std::size_t repeats = 5, std::size_t folds = 10, std::uint64_t seed = 1) {
  return cross_validate(ds, repeats, folds, seed, compound_fit_predict(spec, vocab, cfg, labels));
}

// Candidate settings for tuning: forest mtry over {2, half, all} of the
// wider component's features; boosting stages {50, 100, 150} x depth
// {1, 2, 3}; C4.5 confidence {0.1, 0.25, 0.5}.
inline std::vector<CompoundSpec> tuning_grid(const CompoundSpec &base, std::size_t vocab_size) {
  std::vector<CompoundSpec> grid;
  const auto width = std::max(feature_width(base.kw, vocab_size), feature_width(base.nokw, vocab_size));
  switch (base.algorithm) {
  case Algorithm::forest: {
    std::vector<std::size_t> mtry = {2, std::max<std::size_t>(2, width / 2), width};
    mtry.erase(std::unique(mtry.begin(), mtry.end()), mtry.end());
    for (auto v : mtry) {
      auto s = base;
      s.forest.mtry = v;
      grid.push_back(s);
    }
    break;
  }
  case Algorithm::boost:
    for (std::size_t depth : {1, 2, 3})
      for (std::size_t stages : {50, 100, 150}) {
        auto s = base;
        s.boost.depth = depth;
        s.boost.stages = stages;
        grid.push_back(s);
      }
    break;
  case Algorithm::tree:
    for (double cf : {0.1, 0.25, 0.5}) {
      auto s = base;
      s.tree.cf = cf;
      grid.push_back(s);
    }
    break;
  case Algorithm::naive:
    grid.push_back(base);
    break;
  }
  return grid;
}

struct TuningResult {
  CompoundSpec best;
  std::vector<std::pair<CompoundSpec, ResampleSummary>> candidates;
};

// Picks the candidate with the highest mean CV accuracy; earlier candidates
// win ties.
inline TuningResult tune_spec(const LabeledDataset &ds, const CompoundSpec &base, const Vocabulary &vocab,
                              const StopwordConfig &cfg, const std::vector<std::string> &labels,
                              std::size_t repeats = 5, std::size_t folds = 10, std::uint64_t seed = 1) {
  TuningResult out;
  double best = -1;
  for (const auto &spec : tuning_grid(base, vocab.size())) {
    auto summary = repeated_cv(ds, spec, vocab, cfg, labels, repeats, folds, seed);
    if (summary.accuracy.mean > best) {
      best = summary.accuracy.mean;
      out.best = spec;
    }
    out.candidates.emplace_back(spec, std::move(summary));
  }
  return out;
}

// Reports ---------------------------------------------------------------

inline std::string format_percent(std::optional<double> rate) {
  if (!rate)
    return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", *rate * 100.0);
  return buf;
}

inline std::string format_p_value(double p) {
  if (p < 2.2e-16)
    return "<2.2e-16";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", p);
  return buf;
}

// Text table in the layout of a classified-as / true-class matrix.
inline std::string render_report(const EvaluationReport &r) {
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-22s%12s%12s%12s\n", "classified as \\ true", "adaptive", "corrective",
                "perfective");
  out << buf;
  for (auto p : kReportOrder) {
    std::snprintf(buf, sizeof buf, "%-22s%12zu%12zu%12zu\n", std::string(to_string(p)).c_str(),
                  r.matrix.at(p, kReportOrder[0]), r.matrix.at(p, kReportOrder[1]), r.matrix.at(p, kReportOrder[2]));
    out << buf;
  }
  auto rates = [&](const char *name, const PerClass<std::optional<double>> &v) {
    std::snprintf(buf, sizeof buf, "%-22s%12s%12s%12s\n", name, format_percent(v[kReportOrder[0]]).c_str(),
                  format_percent(v[kReportOrder[1]]).c_str(), format_percent(v[kReportOrder[2]]).c_str());
    out << buf;
  };
  rates("Recall", r.recall);
  rates("Precision", r.precision);
  out << "Accuracy: " << format_percent(r.accuracy) << "\n";
  out << "Kappa: " << format_percent(r.kappa) << "\n";
  out << "No Information Rate: " << format_percent(r.nir) << "\n";
  out << "P-Value [Accuracy > NIR]: " << format_p_value(r.p_value) << "\n";
  out << "Commits: " << r.n << "\n";
  return out.str();
}

inline nlohmann::ordered_json report_to_json(const EvaluationReport &r) {
  nlohmann::ordered_json j;
  j["class_order"] = {"adaptive", "corrective", "perfective"};
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (auto p : kReportOrder) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (auto t : kReportOrder)
      row.push_back(r.matrix.at(p, t));
    rows.push_back(row);
  }
  j["confusion"] = {{"rows", "classified_as"}, {"columns", "true_class"}, {"counts", rows}};
  auto rates = [](const PerClass<std::optional<double>> &v) {
    nlohmann::ordered_json o;
    for (auto c : kReportOrder)
      o[std::string(to_string(c))] = v[c] ? nlohmann::ordered_json(*v[c]) : nlohmann::ordered_json(nullptr);
    return o;
  };
  j["precision"] = rates(r.precision);
  j["recall"] = rates(r.recall);
  j["accuracy"] = r.accuracy;
  j["kappa"] = r.kappa;
  j["nir"] = r.nir;
  j["p_value_accuracy_gt_nir"] = r.p_value;
  j["n"] = r.n;
  return j;
}

inline nlohmann::ordered_json summary_to_json(const SixNumberSummary &s) {
  return {{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"mean", s.mean}, {"q3", s.q3}, {"max", s.max}};
}

inline nlohmann::ordered_json resamples_to_json(const ResampleSummary &s) {
  nlohmann::ordered_json j;
  j["quantiles"] = "linear interpolation between order statistics";
  j["accuracy"] = summary_to_json(s.accuracy);
  j["kappa"] = summary_to_json(s.kappa);
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto &r : s.resamples)
    list.push_back({{"repeat", r.repeat}, {"fold", r.fold}, {"accuracy", r.accuracy}, {"kappa", r.kappa},
                    {"test_size", r.test_rows.size()}});
  j["resamples"] = std::move(list);
  return j;
}

inline std::string render_resamples(const ResampleSummary &s) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s%9s%9s%9s%9s%9s%9s\n", "", "Min", "1st Qu.", "Median", "Mean", "3rd Qu.",
                "Max");
  out << buf;
  for (auto [name, v] : {std::pair{"Accuracy", &s.accuracy}, std::pair{"Kappa", &s.kappa}}) {
    std::snprintf(buf, sizeof buf, "%-10s%9.4f%9.4f%9.4f%9.4f%9.4f%9.4f\n", name, v->min, v->q1, v->median, v->mean,
                  v->q3, v->max);
    out << buf;
  }
  out << "Resamples: " << s.resamples.size() << "\n";
  return out.str();
}

} // namespace maintmine
