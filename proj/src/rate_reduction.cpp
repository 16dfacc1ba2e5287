#include "rgauge/rate_reduction.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>

#include "rgauge/rng.hpp"

namespace rgauge {

void Representation::validate() const {
  if (z.rows() < 1 || z.cols() < 1) throw std::invalid_argument("representation: Z must be non-empty");
  if (static_cast<Eigen::Index>(class_partition.size()) != z.cols()) {
    throw std::invalid_argument("representation: every sample needs exactly one class");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("representation: epsilon must be > 0");
  if (lambda < 0.0) throw std::invalid_argument("representation: lambda must be >= 0");
  if (!z.allFinite()) throw std::invalid_argument("representation: non-finite entries");
}

namespace {

// logdet(I + c * M M') via the smaller Gram side (same nonzero spectrum).
double logdet_gram(const Eigen::MatrixXd& m, double c) {
  const Eigen::MatrixXd gram = m.rows() <= m.cols()
                                   ? Eigen::MatrixXd(m * m.transpose())
                                   : Eigen::MatrixXd(m.transpose() * m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("rate reduction: eigendecomposition failed");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    sum += std::log1p(c * std::max(0.0, solver.eigenvalues()(i)));
  }
  return sum;
}

std::map<int, std::vector<Eigen::Index>> group_by_class(const std::vector<int>& partition) {
  std::map<int, std::vector<Eigen::Index>> groups;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    groups[partition[i]].push_back(static_cast<Eigen::Index>(i));
  }
  return groups;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& z, const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(z.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = z.col(cols[j]);
  return out;
}

}  // namespace

double rate_reduction(const Representation& rep) {
  rep.validate();
  const double d = static_cast<double>(rep.z.rows());
  const double n = static_cast<double>(rep.z.cols());
  double value = logdet_gram(rep.z, d / (n * rep.epsilon));
  for (const auto& [cls, cols] : group_by_class(rep.class_partition)) {
    const double nk = static_cast<double>(cols.size());
    const Eigen::MatrixXd zk = select_columns(rep.z, cols);
    value -= (nk / n) * logdet_gram(zk, d / (nk * rep.epsilon));
  }
  return value;
}

double sparse_rr_loss(const Representation& rep) {
  return rate_reduction(rep) - rep.lambda * rep.z.cwiseAbs().sum();
}

Eigen::MatrixXd rr_gradient(const Representation& rep) {
  rep.validate();
  const double d = static_cast<double>(rep.z.rows());
  const double n = static_cast<double>(rep.z.cols());
  const double c0 = d / (n * rep.epsilon);
  const double prefactor = 2.0 * c0;

  const Eigen::Index dim = rep.z.rows();
  Eigen::MatrixXd total = Eigen::MatrixXd::Identity(dim, dim) + c0 * (rep.z * rep.z.transpose());
  Eigen::LDLT<Eigen::MatrixXd> total_solver(total);
  if (total_solver.info() != Eigen::Success) {
    throw std::runtime_error("rate reduction gradient: factorization failed");
  }
  Eigen::MatrixXd grad = prefactor * total_solver.solve(rep.z);

  // The class weight n_k/n cancels against the per-class coefficient's 1/n_k,
  // leaving the same 2d/(n eps) prefactor on every class block.
  for (const auto& [cls, cols] : group_by_class(rep.class_partition)) {
    const double nk = static_cast<double>(cols.size());
    const double ck = d / (nk * rep.epsilon);
    const Eigen::MatrixXd zk = select_columns(rep.z, cols);
    Eigen::MatrixXd mk = Eigen::MatrixXd::Identity(dim, dim) + ck * (zk * zk.transpose());
    Eigen::LDLT<Eigen::MatrixXd> solver(mk);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("rate reduction gradient: class factorization failed");
    }
    const Eigen::MatrixXd class_grad = prefactor * solver.solve(zk);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      grad.col(cols[j]) -= class_grad.col(static_cast<Eigen::Index>(j));
    }
  }
  return grad;
}

int adaptivity_active_count(double rho, int seed_index, const AdaptivityConfig& config) {
  SimConfig sim = config.sim;
  sim.rho = rho;
  sim.seed = derive_seed(config.sim.seed, static_cast<std::uint64_t>(seed_index));
  TabularDataset pooled = generate_pooled(sim, sim.max_spurious, 0);

  // Standardize pooled features, then learn per-direction gains.
  TabularDataset tmp = pooled;
  tmp.env.assign(pooled.env.size(), Env::A);
  const Standardizer st = fit_standardizer(tmp, Env::A);
  const Eigen::MatrixXd x = st.transform(pooled.features);
  const Eigen::Index p = x.cols();
  const double epsilon = config.epsilon_scale * static_cast<double>(p);

  Eigen::VectorXd column_l1(p);
  for (Eigen::Index j = 0; j < p; ++j) column_l1(j) = x.col(j).cwiseAbs().sum();

  Representation rep;
  rep.class_partition = pooled.labels;
  rep.epsilon = epsilon;
  rep.lambda = config.lambda;

  Eigen::VectorXd gains = Eigen::VectorXd::Ones(p);
  const double radius = std::sqrt(static_cast<double>(p));
  for (int step = 0; step < config.steps; ++step) {
    rep.z = gains.asDiagonal() * x.transpose();
    const Eigen::MatrixXd grad_z = rr_gradient(rep);
    // Diagonal of grad_z * X: the ascent direction for each gain.
    Eigen::VectorXd pull(p);
    for (Eigen::Index j = 0; j < p; ++j) pull(j) = grad_z.row(j).dot(x.col(j));
    Eigen::VectorXd proposed = gains + config.step_size * pull;
    // Proximal soft-threshold for lambda * ||Z||_1 (separable in the gains).
    for (Eigen::Index j = 0; j < p; ++j) {
      const double threshold = config.step_size * config.lambda * column_l1(j);
      const double magnitude = std::fabs(proposed(j)) - threshold;
      proposed(j) = magnitude > 0.0 ? (proposed(j) > 0.0 ? magnitude : -magnitude) : 0.0;
    }
    const double norm = proposed.norm();
    if (norm > radius) proposed *= radius / norm;
    gains = proposed;
  }

  const double largest = gains.cwiseAbs().maxCoeff();
  if (largest < 1e-8) return 0;
  int active = 0;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (std::fabs(gains(j)) > config.active_threshold * largest) ++active;
  }
  return active;
}

std::vector<AdaptivityRow> regime_adaptivity_demo(const std::vector<double>& rho_values,
                                                  const AdaptivityConfig& config) {
  if (rho_values.empty()) throw std::invalid_argument("adaptivity demo: empty rho grid");
  std::vector<AdaptivityRow> rows;
  for (double rho : rho_values) {
    AdaptivityRow row;
    row.rho = rho;
    std::vector<double> counts;
    for (int seed = 0; seed < config.seeds; ++seed) {
      try {
        counts.push_back(static_cast<double>(adaptivity_active_count(rho, seed, config)));
      } catch (const std::exception& err) {
        row.errors.push_back("seed " + std::to_string(seed) + ": " + err.what());
      }
    }
    if (!counts.empty()) {
      double mean = 0.0;
      for (double c : counts) mean += c;
      mean /= static_cast<double>(counts.size());
      double var = 0.0;
      for (double c : counts) var += (c - mean) * (c - mean);
      var /= static_cast<double>(counts.size());
      row.active_mean = mean;
      row.active_sd = std::sqrt(var);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rgauge
