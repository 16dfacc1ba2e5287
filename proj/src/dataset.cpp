#include "rgauge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rgauge {

const char* to_string(Env env) {
  switch (env) {
    case Env::A: return "A";
    case Env::B: return "B";
    case Env::C: return "C";
  }
  return "?";
}

Env env_from_string(const std::string& tag) {
  if (tag == "A") return Env::A;
  if (tag == "B") return Env::B;
  if (tag == "C") return Env::C;
  throw std::invalid_argument("environment tag must be A, B or C, got '" + tag + "'");
}

std::vector<Eigen::Index> TabularDataset::env_rows(Env which) const {
  std::vector<Eigen::Index> idx;
  for (std::size_t i = 0; i < env.size(); ++i) {
    if (env[i] == which) idx.push_back(static_cast<Eigen::Index>(i));
  }
  return idx;
}

Eigen::MatrixXd TabularDataset::env_features(Env which) const {
  const auto idx = env_rows(which);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), features.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = features.row(idx[i]);
  return out;
}

std::vector<int> TabularDataset::env_labels(Env which) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < env.size(); ++i) {
    if (env[i] == which) out.push_back(labels[i]);
  }
  return out;
}

Eigen::Index TabularDataset::feature_index(const std::string& name) const {
  for (std::size_t j = 0; j < feature_names.size(); ++j) {
    if (feature_names[j] == name) return static_cast<Eigen::Index>(j);
  }
  throw std::invalid_argument("unknown feature column: '" + name + "'");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_numeric(const std::string& cell, std::size_t row, const std::string& column) {
  std::size_t consumed = 0;
  double value;
  try {
    value = std::stod(cell, &consumed);
  } catch (const std::exception&) {
    throw std::invalid_argument("row " + std::to_string(row) + ", column '" + column +
                                "': cannot parse '" + cell + "' as a number");
  }
  if (consumed != cell.size() || !std::isfinite(value)) {
    throw std::invalid_argument("row " + std::to_string(row) + ", column '" + column +
                                "': cannot parse '" + cell + "' as a number");
  }
  return value;
}

}  // namespace

LoadReport load_csv(const std::string& path, const std::string& label_column,
                    const std::string& env_column) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(file, line)) throw std::runtime_error("'" + path + "' is empty");

  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trim(h);
  long long label_idx = -1, env_idx = -1;
  std::vector<std::size_t> feature_idx;
  std::vector<std::string> feature_names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == label_column) {
      label_idx = static_cast<long long>(j);
    } else if (header[j] == env_column) {
      env_idx = static_cast<long long>(j);
    } else {
      feature_idx.push_back(j);
      feature_names.push_back(header[j]);
    }
  }
  if (label_idx < 0) throw std::invalid_argument("label column '" + label_column + "' not found");
  if (env_idx < 0) throw std::invalid_argument("env column '" + env_column + "' not found");
  if (feature_idx.empty()) throw std::invalid_argument("no feature columns in '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::vector<Env> envs;
  std::size_t dropped = 0;
  std::size_t row_number = 1;  // 1-based data rows, header excluded
  while (std::getline(file, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw std::invalid_argument("row " + std::to_string(row_number) + ": expected " +
                                  std::to_string(header.size()) + " cells, got " +
                                  std::to_string(cells.size()));
    }
    for (auto& c : cells) c = trim(c);
    bool missing = false;
    for (const auto& c : cells) {
      if (c.empty()) {
        missing = true;
        break;
      }
    }
    if (missing) {
      ++dropped;
      ++row_number;
      continue;
    }
    const double label_value =
        parse_numeric(cells[static_cast<std::size_t>(label_idx)], row_number, label_column);
    if (label_value != 0.0 && label_value != 1.0) {
      throw std::invalid_argument("row " + std::to_string(row_number) +
                                  ": label must be 0 or 1, got '" +
                                  cells[static_cast<std::size_t>(label_idx)] + "'");
    }
    Env env;
    try {
      env = env_from_string(cells[static_cast<std::size_t>(env_idx)]);
    } catch (const std::invalid_argument& err) {
      throw std::invalid_argument("row " + std::to_string(row_number) + ": " + err.what());
    }
    std::vector<double> feats;
    feats.reserve(feature_idx.size());
    for (std::size_t k = 0; k < feature_idx.size(); ++k) {
      feats.push_back(parse_numeric(cells[feature_idx[k]], row_number, feature_names[k]));
    }
    rows.push_back(std::move(feats));
    labels.push_back(static_cast<int>(label_value));
    envs.push_back(env);
    ++row_number;
  }

  LoadReport report;
  report.dropped_rows = dropped;
  report.data.feature_names = std::move(feature_names);
  report.data.labels = std::move(labels);
  report.data.env = std::move(envs);
  report.data.features.resize(static_cast<Eigen::Index>(rows.size()),
                              static_cast<Eigen::Index>(feature_idx.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      report.data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return report;
}

std::pair<Eigen::MatrixXd, std::vector<std::string>> load_matrix_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(file, line)) throw std::runtime_error("'" + path + "' is empty");
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trim(h);

  std::vector<std::vector<double>> rows;
  std::size_t row_number = 1;
  while (std::getline(file, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw std::invalid_argument("row " + std::to_string(row_number) + ": expected " +
                                  std::to_string(header.size()) + " cells");
    }
    std::vector<double> vals;
    vals.reserve(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      vals.push_back(parse_numeric(trim(cells[j]), row_number, header[j]));
    }
    rows.push_back(std::move(vals));
    ++row_number;
  }
  if (rows.empty()) throw std::invalid_argument("'" + path + "' has no data rows");
  Eigen::MatrixXd matrix(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(header.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return {std::move(matrix), std::move(header)};
}

Eigen::MatrixXd Standardizer::transform(const Eigen::MatrixXd& features) const {
  if (features.cols() != means.size()) {
    throw std::invalid_argument("standardizer: feature count mismatch");
  }
  Eigen::MatrixXd out = features.rowwise() - means.transpose();
  out.array().rowwise() /= scales.transpose().array();
  return out;
}

Standardizer fit_standardizer(const TabularDataset& data, Env env) {
  const Eigen::MatrixXd rows = data.env_features(env);
  if (rows.rows() == 0) {
    throw std::invalid_argument(std::string("environment ") + to_string(env) + " is empty");
  }
  Standardizer st;
  st.fitted_on = env;
  st.means = rows.colwise().mean();
  st.scales.resize(rows.cols());
  st.constant_columns.assign(static_cast<std::size_t>(rows.cols()), false);
  const double n = static_cast<double>(rows.rows());
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    const double var = (rows.col(j).array() - st.means(j)).square().sum() / n;
    const double sd = std::sqrt(var);
    if (sd > 0.0) {
      st.scales(j) = sd;
    } else {
      st.scales(j) = 1.0;
      st.constant_columns[static_cast<std::size_t>(j)] = true;
    }
  }
  return st;
}

}  // namespace rgauge
