#pragma once

// Tabular ingestion with temporal environment tags and train-set
// standardization. Rows with missing cells are dropped and counted;
// malformed cells are hard errors that name the row and column.

#include <string>
#include <vector>

#include <Eigen/Core>

namespace rgauge {

enum class Env { A, B, C };
const char* to_string(Env env);
Env env_from_string(const std::string& tag);

struct TabularDataset {
  Eigen::MatrixXd features;               // n x p
  std::vector<int> labels;                // n, values in {0,1}
  std::vector<Env> env;                   // n
  std::vector<std::string> feature_names; // p

  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index cols() const { return features.cols(); }

  std::vector<Eigen::Index> env_rows(Env which) const;
  Eigen::MatrixXd env_features(Env which) const;
  std::vector<int> env_labels(Env which) const;

  /// Column index for a feature name; throws when absent.
  Eigen::Index feature_index(const std::string& name) const;
};

struct LoadReport {
  TabularDataset data;
  std::size_t dropped_rows = 0;  // rows removed for missing cells
};

/// Reads a headed CSV with a binary label column and an environment column
/// (values A/B/C); every other column is a numeric feature.
LoadReport load_csv(const std::string& path, const std::string& label_column,
                    const std::string& env_column);

/// Numeric matrix CSV (header + all-numeric columns), for estimator inputs.
std::pair<Eigen::MatrixXd, std::vector<std::string>> load_matrix_csv(const std::string& path);

struct Standardizer {
  Eigen::VectorXd means;
  Eigen::VectorXd scales;                // population sd; 1 for constant columns
  std::vector<bool> constant_columns;
  Env fitted_on = Env::A;

  Eigen::MatrixXd transform(const Eigen::MatrixXd& features) const;
};

/// Per-column mean and population (divide-by-n) standard deviation over the
/// rows of one environment only. Throws when the environment is empty.
Standardizer fit_standardizer(const TabularDataset& data, Env env);

}  // namespace rgauge
