#include "qaida/metrics.hpp"

#include "qaida/error.hpp"

namespace qaida {

ConfusionMatrix::ConfusionMatrix(int num_classes) : n_(num_classes) {
  if (num_classes < 1) throw Error(Errc::InvalidArgument, "confusion matrix needs at least one class");
  counts_.assign(std::size_t(n_) * n_, 0);
}

ConfusionMatrix ConfusionMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  ConfusionMatrix cm(int(rows.size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (rows[t].size() != rows.size()) throw Error(Errc::InvalidArgument, "confusion matrix must be square");
    for (std::size_t p = 0; p < rows.size(); ++p) cm.add(int(t), int(p), rows[t][p]);
  }
  return cm;
}

void ConfusionMatrix::add(int truth, int predicted, std::int64_t count) {
  if (truth < 0 || truth >= n_ || predicted < 0 || predicted >= n_) {
    throw Error(Errc::InvalidArgument, "class index out of range");
  }
  if (count < 0) throw Error(Errc::InvalidArgument, "negative count");
  counts_[std::size_t(truth) * n_ + predicted] += count;
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t s = 0;
  for (auto c : counts_) s += c;
  return s;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t s = 0;
  for (int i = 0; i < n_; ++i) s += at(i, i);
  return s;
}

std::int64_t ConfusionMatrix::row_sum(int truth) const {
  std::int64_t s = 0;
  for (int p = 0; p < n_; ++p) s += at(truth, p);
  return s;
}

std::int64_t ConfusionMatrix::col_sum(int predicted) const {
  std::int64_t s = 0;
  for (int t = 0; t < n_; ++t) s += at(t, predicted);
  return s;
}

double f1_score(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0 ? 2 * precision * recall / denom : 0.0;
}

EvalReport evaluate_confusion(const ConfusionMatrix& cm, std::string split) {
  EvalReport r;
  r.split = std::move(split);
  r.total = cm.total();
  if (r.total == 0) throw Error(Errc::EmptySplit, "no examples in split '" + r.split + "'");
  r.correct = cm.trace();
  r.accuracy = double(r.correct) / double(r.total);
  r.per_class.resize(cm.num_classes());
  double f1_sum = 0;
  int present = 0;
  for (int c = 0; c < cm.num_classes(); ++c) {
    ClassMetrics& m = r.per_class[c];
    const std::int64_t tp = cm.at(c, c);
    m.support = cm.row_sum(c);
    m.predicted = cm.col_sum(c);
    m.precision = m.predicted > 0 ? double(tp) / double(m.predicted) : 0.0;
    m.recall = m.support > 0 ? double(tp) / double(m.support) : 0.0;
    m.f1 = f1_score(m.precision, m.recall);
    if (m.support > 0 || m.predicted > 0) {
      f1_sum += m.f1;
      ++present;
    }
  }
  r.macro_f1 = present > 0 ? f1_sum / present : 0.0;
  return r;
}

EvalReport evaluate_predictions(std::span<const int> truth, std::span<const int> predicted, int num_classes,
                                std::string split) {
  if (truth.size() != predicted.size()) throw Error(Errc::InvalidArgument, "truth and prediction lengths differ");
  ConfusionMatrix cm(num_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
  return evaluate_confusion(cm, std::move(split));
}

nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["split"] = report.split;
  j["total"] = report.total;
  j["correct"] = report.correct;
  j["accuracy"] = report.accuracy;
  j["macro_f1"] = report.macro_f1;
  auto classes = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& m = report.per_class[c];
    classes.push_back({{"class_id", c},
                       {"precision", m.precision},
                       {"recall", m.recall},
                       {"f1", m.f1},
                       {"support", m.support},
                       {"predicted", m.predicted}});
  }
  j["per_class"] = std::move(classes);
  return j;
}

}  // namespace qaida
