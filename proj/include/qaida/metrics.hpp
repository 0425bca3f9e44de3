#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace qaida {

/// Rows are true classes, columns are predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes);
  /// Row-major counts; throws Error{InvalidArgument} unless rows are square.
  static ConfusionMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  void add(int truth, int predicted, std::int64_t count = 1);

  int num_classes() const { return n_; }
  std::int64_t at(int truth, int predicted) const { return counts_[std::size_t(truth) * n_ + predicted]; }
  std::int64_t total() const;
  std::int64_t trace() const;
  std::int64_t row_sum(int truth) const;
  std::int64_t col_sum(int predicted) const;

 private:
  int n_;
  std::vector<std::int64_t> counts_;
};

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::int64_t support = 0;    // true examples of the class
  std::int64_t predicted = 0;  // examples predicted as the class
};

struct EvalReport {
  std::string split;
  std::int64_t total = 0;
  std::int64_t correct = 0;
  double accuracy = 0;
  double macro_f1 = 0;  // mean over classes with support or predictions
  std::vector<ClassMetrics> per_class;
};

/// Harmonic mean, defined as 0 when precision + recall = 0.
double f1_score(double precision, double recall);

/// Throws Error{EmptySplit} when the matrix holds no examples.
EvalReport evaluate_confusion(const ConfusionMatrix& cm, std::string split);
EvalReport evaluate_predictions(std::span<const int> truth, std::span<const int> predicted, int num_classes,
                                std::string split);

nlohmann::ordered_json to_json(const EvalReport& report);

}  // namespace qaida
