#include "reachopt/promp.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "reachopt/csv.hpp"
#include "reachopt/errors.hpp"

namespace reachopt {

namespace {

constexpr double kNoiseFloor = 1e-10;  // variance floor for zero-noise conditioning

double phase_of(const BasisConfig& config, int t_index) {
  return static_cast<double>(t_index) / (config.steps - 1);
}

}  // namespace

void BasisConfig::validate() const {
  if (psi < 2) throw std::invalid_argument("BasisConfig: psi must be >= 2");
  if (!(h > 0.0)) throw std::invalid_argument("BasisConfig: h must be > 0");
  if (steps < 2) throw std::invalid_argument("BasisConfig: steps must be >= 2");
}

void PrompModel::validate() const {
  basis.validate();
  if (mu_w.empty()) throw std::invalid_argument("PrompModel: no joints");
  for (int d = 0; d < dof(); ++d) {
    if (mu_w[d].size() != basis.psi || sigma_w[d].rows() != basis.psi ||
        sigma_w[d].cols() != basis.psi) {
      throw ShapeError("PrompModel: weight dimensions do not match basis");
    }
    if (!mu_w[d].allFinite()) throw std::invalid_argument("PrompModel: non-finite mean weights");
    if ((sigma_w[d] - sigma_w[d].transpose()).cwiseAbs().maxCoeff() > 1e-9) {
      throw std::invalid_argument("PrompModel: sigma_w not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<MatX> eig(sigma_w[d]);
    if (eig.eigenvalues().minCoeff() < -1e-9) {
      throw std::invalid_argument("PrompModel: sigma_w not positive semi-definite");
    }
  }
}

VecX rbf_basis(const BasisConfig& config, int t_index) {
  config.validate();
  if (t_index < 0 || t_index >= config.steps) {
    throw IndexError("rbf_basis: t_index " + std::to_string(t_index) + " outside [0, " +
                     std::to_string(config.steps - 1) + "]");
  }
  const double z = phase_of(config, t_index);
  VecX activations(config.psi);
  for (int i = 0; i < config.psi; ++i) {
    const double center = static_cast<double>(i) / (config.psi - 1);
    const double scaled = (z - center) * config.psi;  // distance in units of ~basis spacing
    activations[i] = std::exp(-0.5 * scaled * scaled / config.h);
  }
  return activations / activations.sum();
}

MatX rbf_basis_matrix(const BasisConfig& config) {
  config.validate();
  MatX phi(config.steps, config.psi);
  for (int t = 0; t < config.steps; ++t) phi.row(t) = rbf_basis(config, t).transpose();
  return phi;
}

PrompModel learn_promp(const std::vector<JointTrajectory>& demos, const BasisConfig& config,
                       double ridge) {
  config.validate();
  if (ridge < 0.0) throw std::invalid_argument("learn_promp: ridge must be >= 0");
  if (demos.size() < 2) {
    throw InsufficientDataError("learn_promp: need at least 2 demonstrations, got " +
                                std::to_string(demos.size()));
  }
  const int dof = demos.front().dof();
  for (const auto& demo : demos) {
    if (demo.steps() != config.steps || demo.dof() != dof) {
      throw ShapeError("learn_promp: demonstrations must share steps and dof");
    }
  }

  const MatX phi = rbf_basis_matrix(config);
  MatX gram = phi.transpose() * phi;
  gram.diagonal().array() += std::max(ridge, 1e-12);
  const auto solver = gram.ldlt();

  const int count = static_cast<int>(demos.size());
  PrompModel model;
  model.basis = config;
  model.mu_w.resize(dof);
  model.sigma_w.resize(dof);

  for (int d = 0; d < dof; ++d) {
    MatX weights(config.psi, count);  // one fitted weight vector per demo
    for (int k = 0; k < count; ++k) {
      weights.col(k) = solver.solve(phi.transpose() * demos[k].q.col(d));
    }
    const VecX mean = weights.rowwise().mean();
    MatX centered = weights.colwise() - mean;
    MatX cov = centered * centered.transpose() / (count - 1);
    cov.diagonal().array() += ridge;
    model.mu_w[d] = mean;
    model.sigma_w[d] = 0.5 * (cov + cov.transpose());
  }
  return model;
}

PrompModel condition(const PrompModel& model, const ViaPoint& via) {
  if (via.t_index < 0 || via.t_index >= model.basis.steps) {
    throw IndexError("condition: via t_index outside trajectory");
  }
  if (via.value.size() != model.dof()) {
    throw ShapeError("condition: via value length does not match dof");
  }
  if (via.noise < 0.0) throw std::invalid_argument("condition: noise must be >= 0");

  const VecX phi = rbf_basis(model.basis, via.t_index);
  const double variance = std::max(via.noise, kNoiseFloor);

  PrompModel out = model;
  for (int d = 0; d < model.dof(); ++d) {
    const VecX k = model.sigma_w[d] * phi;   // cross-covariance with the observation
    const double s = phi.dot(k) + variance;  // marginal observation variance
    const double innovation = via.value[d] - phi.dot(model.mu_w[d]);
    out.mu_w[d] = model.mu_w[d] + k * (innovation / s);
    MatX sigma = model.sigma_w[d] - (k * k.transpose()) / s;
    out.sigma_w[d] = 0.5 * (sigma + sigma.transpose());
  }
  return out;
}

JointTrajectory mean_trajectory(const PrompModel& model) {
  const MatX phi = rbf_basis_matrix(model.basis);
  JointTrajectory traj = JointTrajectory::zeros(model.basis.steps, model.dof());
  for (int d = 0; d < model.dof(); ++d) traj.q.col(d) = phi * model.mu_w[d];
  return traj;
}

VecX via_residual(const PrompModel& model, const ViaPoint& via) {
  if (via.t_index < 0 || via.t_index >= model.basis.steps) {
    throw IndexError("via_residual: via t_index outside trajectory");
  }
  const VecX phi = rbf_basis(model.basis, via.t_index);
  VecX residual(model.dof());
  for (int d = 0; d < model.dof(); ++d) residual[d] = std::abs(phi.dot(model.mu_w[d]) - via.value[d]);
  return residual;
}

std::vector<JointTrajectory> synthesize_demos(const VecX& q_start, const VecX& q_goal, int steps,
                                              int count, double jitter, std::uint32_t seed) {
  if (q_start.size() != q_goal.size()) {
    throw ShapeError("synthesize_demos: start and goal dof differ");
  }
  if (steps < 2 || count < 1) throw std::invalid_argument("synthesize_demos: bad steps/count");

  std::mt19937 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const int dof = static_cast<int>(q_start.size());

  std::vector<JointTrajectory> demos;
  demos.reserve(count);
  for (int k = 0; k < count; ++k) {
    VecX a = q_start;
    VecX b = q_goal;
    for (int d = 0; d < dof; ++d) {
      a[d] += jitter * noise(rng);
      b[d] += jitter * noise(rng);
    }
    JointTrajectory demo = JointTrajectory::zeros(steps, dof);
    for (int t = 0; t < steps; ++t) {
      const double s = static_cast<double>(t) / (steps - 1);
      const double blend = s * s * s * (10.0 + s * (-15.0 + 6.0 * s));  // minimum jerk
      demo.q.row(t) = (a + (b - a) * blend).transpose();
    }
    demos.push_back(std::move(demo));
  }
  return demos;
}

JointTrajectory read_demo_csv(const std::filesystem::path& path) {
  const csv::Table table = csv::read(path);
  if (table.header.empty() || table.rows.size() < 2) {
    throw ParseError("demo file " + path.string() + ": need a header row and >= 2 steps");
  }
  const int dof = static_cast<int>(table.header.size());
  JointTrajectory demo = JointTrajectory::zeros(static_cast<int>(table.rows.size()), dof);
  for (int t = 0; t < demo.steps(); ++t) {
    for (int d = 0; d < dof; ++d) demo.q(t, d) = table.rows[t][d];
  }
  return demo;
}

void write_demo_csv(const std::filesystem::path& path, const JointTrajectory& demo,
                    const std::vector<std::string>& joint_names) {
  std::vector<std::string> header = joint_names;
  if (header.empty()) {
    for (int d = 0; d < demo.dof(); ++d) header.push_back("q" + std::to_string(d + 1));
  }
  if (static_cast<int>(header.size()) != demo.dof()) {
    throw ShapeError("write_demo_csv: joint name count does not match dof");
  }
  std::vector<std::vector<double>> rows(demo.steps());
  for (int t = 0; t < demo.steps(); ++t) {
    rows[t].resize(demo.dof());
    for (int d = 0; d < demo.dof(); ++d) rows[t][d] = demo.q(t, d);
  }
  csv::write(path, header, rows);
}

}  // namespace reachopt
