#include "itca/criteria.hpp"

#include <array>
#include <cmath>
#include <nlohmann/json.hpp>

#include "itca/errors.hpp"
#include "itca/gmm.hpp"
#include "itca/rng.hpp"

namespace itca {

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::itca: return "itca";
    case Criterion::itca_alt: return "itca_alt";
    case Criterion::acc: return "acc";
    case Criterion::mi: return "mi";
    case Criterion::aac_proportion: return "aac_proportion";
    case Criterion::aac_cardinality: return "aac_cardinality";
    case Criterion::ckl: return "ckl";
    case Criterion::pe: return "pe";
  }
  throw ConfigError("unknown criterion");
}

Criterion criterion_from_string(const std::string& name) {
  if (name == "itca") return Criterion::itca;
  if (name == "itca_alt") return Criterion::itca_alt;
  if (name == "acc") return Criterion::acc;
  if (name == "mi") return Criterion::mi;
  if (name == "aac_proportion" || name == "aac") return Criterion::aac_proportion;
  if (name == "aac_cardinality") return Criterion::aac_cardinality;
  if (name == "ckl") return Criterion::ckl;
  if (name == "pe") return Criterion::pe;
  throw ConfigError("unknown criterion: " + name);
}

std::span<const Criterion> all_criteria() {
  static constexpr std::array<Criterion, 8> all = {
      Criterion::itca,           Criterion::itca_alt, Criterion::acc,
      Criterion::mi,             Criterion::aac_proportion,
      Criterion::aac_cardinality, Criterion::ckl,     Criterion::pe,
  };
  return all;
}

nlohmann::json CriterionReport::to_json() const {
  return nlohmann::json{
      {"name", name}, {"per_fold", per_fold}, {"mean", mean}, {"stderr", stderr_}};
}

CriterionReport CriterionReport::from_json(const nlohmann::json& j) {
  CriterionReport r;
  r.name = j.at("name").get<std::string>();
  r.per_fold = j.at("per_fold").get<std::vector<double>>();
  r.mean = j.at("mean").get<double>();
  r.stderr_ = j.at("stderr").get<double>();
  return r;
}

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Combined-class proportions q_k = sum of phat over the class members,
// clamped to one (summing exact count/n quotients can overshoot by an ulp,
// which would flip the sign of the entropy weight).
std::vector<double> combined_proportions(const Partition& p, std::span<const double> phat) {
  std::vector<double> q(static_cast<std::size_t>(p.k()), 0.0);
  for (int k0 = 1; k0 <= p.k0(); ++k0) {
    q[static_cast<std::size_t>(p.apply(k0) - 1)] += phat[static_cast<std::size_t>(k0 - 1)];
  }
  for (auto& v : q) v = std::min(v, 1.0);
  return q;
}

struct ClassTallies {
  std::vector<int> correct;  // per combined class
  std::vector<int> total;
};

ClassTallies tally(const EvalFrame& f) {
  ClassTallies t;
  t.correct.assign(static_cast<std::size_t>(f.partition.k()), 0);
  t.total.assign(static_cast<std::size_t>(f.partition.k()), 0);
  for (std::size_t i = 0; i < f.eval_labels.size(); ++i) {
    const int truth = f.partition.apply(f.eval_labels[i]);
    ++t.total[static_cast<std::size_t>(truth - 1)];
    if (f.predicted[i] == truth) ++t.correct[static_cast<std::size_t>(truth - 1)];
  }
  return t;
}

}  // namespace

double itca_value(const EvalFrame& f) {
  const auto q = combined_proportions(f.partition, f.phat);
  const auto t = tally(f);
  double value = 0.0;
  for (int k = 0; k < f.partition.k(); ++k) {
    const double weight = -xlogx(q[static_cast<std::size_t>(k)]);
    const double denom = std::max(1, t.total[static_cast<std::size_t>(k)]);
    value += weight * static_cast<double>(t.correct[static_cast<std::size_t>(k)]) / denom;
  }
  return value;
}

double itca_alt_value(const EvalFrame& f) {
  // Per-point weight -log(combined-class proportion), averaged over the fold.
  const auto q = combined_proportions(f.partition, f.phat);
  double sum = 0.0;
  for (std::size_t i = 0; i < f.eval_labels.size(); ++i) {
    const int truth = f.partition.apply(f.eval_labels[i]);
    if (f.predicted[i] != truth) continue;
    sum += -std::log(q[static_cast<std::size_t>(truth - 1)]);
  }
  return sum / static_cast<double>(f.eval_labels.size());
}

double acc_value(const EvalFrame& f) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < f.eval_labels.size(); ++i) {
    if (f.predicted[i] == f.partition.apply(f.eval_labels[i])) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(f.eval_labels.size());
}

double mi_value(const EvalFrame& f) {
  // Plug-in mutual information between predicted combined labels and the
  // original labels, on the evaluation fold.
  const int k0 = f.partition.k0();
  const int k = f.partition.k();
  const double n = static_cast<double>(f.eval_labels.size());
  std::vector<int> joint(static_cast<std::size_t>(k0 * k), 0);
  std::vector<int> margin_y(static_cast<std::size_t>(k0), 0);
  std::vector<int> margin_pred(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < f.eval_labels.size(); ++i) {
    const int y = f.eval_labels[i];
    const int pred = f.predicted[i];
    ++joint[static_cast<std::size_t>((y - 1) * k + (pred - 1))];
    ++margin_y[static_cast<std::size_t>(y - 1)];
    ++margin_pred[static_cast<std::size_t>(pred - 1)];
  }
  double mi = 0.0;
  for (int y = 0; y < k0; ++y) {
    for (int c = 0; c < k; ++c) {
      const int pxy = joint[static_cast<std::size_t>(y * k + c)];
      if (pxy <= 0) continue;
      mi += (pxy / n) * std::log(n * pxy /
                                 (static_cast<double>(margin_y[static_cast<std::size_t>(y)]) *
                                  margin_pred[static_cast<std::size_t>(c)]));
    }
  }
  return mi;
}

double aac_value(const EvalFrame& f, AacVariant variant) {
  const auto q = combined_proportions(f.partition, f.phat);
  const auto groups = f.partition.groups();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.eval_labels.size(); ++i) {
    const int truth = f.partition.apply(f.eval_labels[i]);
    if (f.predicted[i] != truth) continue;
    if (variant == AacVariant::proportion) {
      sum += 1.0 / q[static_cast<std::size_t>(truth - 1)];
    } else {
      sum += 1.0 / static_cast<double>(groups[static_cast<std::size_t>(truth - 1)].size());
    }
  }
  return sum / static_cast<double>(f.eval_labels.size());
}

double pe_value(const EvalFrame& f) {
  // q_k = fraction of fold points both predicted and actually in class k.
  // Integer counts divided once keep q_k <= 1 exactly.
  std::vector<int> both(static_cast<std::size_t>(f.partition.k()), 0);
  const double n = static_cast<double>(f.eval_labels.size());
  for (std::size_t i = 0; i < f.eval_labels.size(); ++i) {
    const int truth = f.partition.apply(f.eval_labels[i]);
    if (f.predicted[i] == truth) ++both[static_cast<std::size_t>(truth - 1)];
  }
  double value = 0.0;
  for (int count : both) value += -xlogx(count / n);
  return value;
}

double ckl_value(const EvalFrame& f, const Eigen::MatrixXd& eval_features, double shrinkage) {
  const int k0 = f.partition.k0();
  const int k = f.partition.k();
  std::vector<int> original(f.eval_labels.begin(), f.eval_labels.end());
  std::vector<int> combined(f.eval_labels.size());
  for (std::size_t i = 0; i < f.eval_labels.size(); ++i) {
    combined[i] = f.partition.apply(f.eval_labels[i]);
  }
  std::vector<int> predicted(f.predicted.begin(), f.predicted.end());

  const GaussianMixture mix_original = fit_mixture(eval_features, original, k0, shrinkage);
  const GaussianMixture mix_combined = fit_mixture(eval_features, combined, k, shrinkage);
  const GaussianMixture mix_predicted = fit_mixture(eval_features, predicted, k, shrinkage);

  return gmm_kl_approx(mix_combined, mix_original) +
         gmm_kl_approx(mix_predicted, mix_combined);
}

namespace {

std::vector<double> proportions_for(const Dataset& train, const Dataset& eval,
                                    const SplitOptions& opts) {
  if (opts.proportions == ProportionSource::eval_fold) return class_proportions(eval);
  if (opts.phat_full.has_value()) return *opts.phat_full;
  // phat over train + eval.
  std::vector<double> p(static_cast<std::size_t>(std::max(train.k0, eval.k0)), 0.0);
  for (int y : train.labels) p[static_cast<std::size_t>(y - 1)] += 1.0;
  for (int y : eval.labels) p[static_cast<std::size_t>(y - 1)] += 1.0;
  const double n = static_cast<double>(train.n() + eval.n());
  for (auto& v : p) v /= n;
  return p;
}

struct SplitPrediction {
  std::vector<int> predicted;
  std::vector<double> phat;
};

SplitPrediction run_split(const Dataset& train, const Dataset& eval, const Partition& p,
                          const ClassifierSpec& spec, const SplitOptions& opts) {
  std::vector<int> combined_train(train.labels.size());
  for (std::size_t i = 0; i < train.labels.size(); ++i) {
    combined_train[i] = p.apply(train.labels[i]);
  }
  const TrainedClassifier clf =
      fit(spec, train.features, combined_train, p.k(), opts.eval_seed);
  PredictContext ctx;
  ctx.seed = mix_seed(opts.eval_seed != 0 ? opts.eval_seed : spec.seed, 0x7072656443ULL);
  ctx.original_labels = eval.labels;
  ctx.partition = &p;
  return SplitPrediction{clf.predict(eval.features, ctx), proportions_for(train, eval, opts)};
}

}  // namespace

double itca_split(const Dataset& train, const Dataset& eval, const Partition& p,
                  const ClassifierSpec& spec, const SplitOptions& opts) {
  const auto sp = run_split(train, eval, p, spec, opts);
  return itca_value(EvalFrame{p, sp.predicted, eval.labels, sp.phat});
}

double itca_alt_split(const Dataset& train, const Dataset& eval, const Partition& p,
                      const ClassifierSpec& spec, const SplitOptions& opts) {
  SplitOptions alt = opts;
  if (!alt.phat_full.has_value()) alt.proportions = ProportionSource::eval_fold;
  const auto sp = run_split(train, eval, p, spec, alt);
  return itca_alt_value(EvalFrame{p, sp.predicted, eval.labels, sp.phat});
}

double acc_split(const Dataset& train, const Dataset& eval, const Partition& p,
                 const ClassifierSpec& spec, const SplitOptions& opts) {
  const auto sp = run_split(train, eval, p, spec, opts);
  return acc_value(EvalFrame{p, sp.predicted, eval.labels, sp.phat});
}

double mi_split(const Dataset& train, const Dataset& eval, const Partition& p,
                const ClassifierSpec& spec, const SplitOptions& opts) {
  const auto sp = run_split(train, eval, p, spec, opts);
  return mi_value(EvalFrame{p, sp.predicted, eval.labels, sp.phat});
}

double aac_split(const Dataset& train, const Dataset& eval, const Partition& p,
                 const ClassifierSpec& spec, AacVariant variant, const SplitOptions& opts) {
  const auto sp = run_split(train, eval, p, spec, opts);
  return aac_value(EvalFrame{p, sp.predicted, eval.labels, sp.phat}, variant);
}

double ckl_split(const Dataset& train, const Dataset& eval, const Partition& p,
                 const ClassifierSpec& spec, const SplitOptions& opts) {
  const auto sp = run_split(train, eval, p, spec, opts);
  return ckl_value(EvalFrame{p, sp.predicted, eval.labels, sp.phat}, eval.features,
                   spec.params.shrinkage);
}

double pe_split(const Dataset& train, const Dataset& eval, const Partition& p,
                const ClassifierSpec& spec, const SplitOptions& opts) {
  const auto sp = run_split(train, eval, p, spec, opts);
  return pe_value(EvalFrame{p, sp.predicted, eval.labels, sp.phat});
}

PartitionEvaluation evaluate_partition(const Dataset& ds, const Partition& p,
                                       const ClassifierSpec& spec, const FoldPlan& folds,
                                       std::span<const Criterion> criteria,
                                       const CvOptions& opts) {
  if (folds.assignment.size() != static_cast<std::size_t>(ds.n())) {
    throw ConfigError("evaluate_partition: fold plan does not match dataset");
  }
  if (p.k0() != ds.k0) {
    throw ConfigError("evaluate_partition: partition over " + std::to_string(p.k0()) +
                      " classes, dataset has " + std::to_string(ds.k0));
  }

  const std::vector<double> phat_full = class_proportions(ds);
  const std::string text = p.text();

  PartitionEvaluation out;
  out.reports.resize(criteria.size());
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    out.reports[c].name = to_string(criteria[c]);
    out.reports[c].per_fold.resize(static_cast<std::size_t>(folds.r));
  }
  out.cond_acc.accuracy.assign(static_cast<std::size_t>(p.k()), 0.0);
  out.cond_acc.proportion = combined_proportions(p, phat_full);
  std::vector<double> pooled_correct(static_cast<std::size_t>(p.k()), 0.0);
  std::vector<double> pooled_total(static_cast<std::size_t>(p.k()), 0.0);

  for (int r = 0; r < folds.r; ++r) {
    const Dataset train = subset(ds, folds.train_indices(r));
    const Dataset eval = subset(ds, folds.eval_indices(r));
    if (eval.n() == 0) {
      throw ComputeError("fold " + std::to_string(r) + ": empty evaluation fold");
    }

    SplitOptions so;
    so.proportions = opts.proportions;
    if (opts.proportions == ProportionSource::full_dataset) so.phat_full = phat_full;
    so.eval_seed = mix_seed(mix_seed(mix_seed(opts.base_seed, spec.seed), text),
                            static_cast<std::uint64_t>(r));

    SplitPrediction sp;
    try {
      sp = run_split(train, eval, p, spec, so);
    } catch (const Error& e) {
      throw ComputeError("fold " + std::to_string(r) + ": " + e.what());
    }
    const EvalFrame frame{p, sp.predicted, eval.labels, sp.phat};

    for (std::size_t c = 0; c < criteria.size(); ++c) {
      double v = 0.0;
      switch (criteria[c]) {
        case Criterion::itca: v = itca_value(frame); break;
        case Criterion::itca_alt: {
          // The alternative form always reads proportions off the fold.
          const auto phat_eval = class_proportions(eval);
          v = itca_alt_value(EvalFrame{p, sp.predicted, eval.labels, phat_eval});
          break;
        }
        case Criterion::acc: v = acc_value(frame); break;
        case Criterion::mi: v = mi_value(frame); break;
        case Criterion::aac_proportion: v = aac_value(frame, AacVariant::proportion); break;
        case Criterion::aac_cardinality: v = aac_value(frame, AacVariant::cardinality); break;
        case Criterion::ckl:
          v = ckl_value(frame, eval.features, spec.params.shrinkage);
          break;
        case Criterion::pe: v = pe_value(frame); break;
      }
      out.reports[c].per_fold[static_cast<std::size_t>(r)] = v;
    }

    for (std::size_t i = 0; i < sp.predicted.size(); ++i) {
      const int truth = p.apply(eval.labels[i]);
      pooled_total[static_cast<std::size_t>(truth - 1)] += 1.0;
      if (sp.predicted[i] == truth) pooled_correct[static_cast<std::size_t>(truth - 1)] += 1.0;
    }
  }

  for (int k = 0; k < p.k(); ++k) {
    out.cond_acc.accuracy[static_cast<std::size_t>(k)] =
        pooled_total[static_cast<std::size_t>(k)] > 0.0
            ? pooled_correct[static_cast<std::size_t>(k)] / pooled_total[static_cast<std::size_t>(k)]
            : 0.0;
  }

  for (auto& report : out.reports) {
    double mean = 0.0;
    for (double v : report.per_fold) mean += v;
    mean /= static_cast<double>(report.per_fold.size());
    double var = 0.0;
    for (double v : report.per_fold) var += (v - mean) * (v - mean);
    if (report.per_fold.size() > 1) var /= static_cast<double>(report.per_fold.size() - 1);
    report.mean = mean;
    report.stderr_ = std::sqrt(var / static_cast<double>(report.per_fold.size()));
  }
  return out;
}

CriterionReport cv(Criterion criterion, const Dataset& ds, const Partition& p,
                   const ClassifierSpec& spec, const FoldPlan& folds, const CvOptions& opts) {
  const std::array<Criterion, 1> one = {criterion};
  return evaluate_partition(ds, p, spec, folds, one, opts).reports.front();
}

double p_itca(std::span<const double> class_probs,
              std::span<const double> conditional_accuracies) {
  if (class_probs.size() != conditional_accuracies.size()) {
    throw ConfigError("p_itca: mismatched lengths");
  }
  double value = 0.0;
  for (std::size_t k = 0; k < class_probs.size(); ++k) {
    value += -xlogx(class_probs[k]) * conditional_accuracies[k];
  }
  return value;
}

double p_pe(std::span<const double> joint_correct_probs) {
  double value = 0.0;
  for (double c : joint_correct_probs) value += -xlogx(c);
  return value;
}

}  // namespace itca
