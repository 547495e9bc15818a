#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "lsb/models.hpp"

namespace lsb {

/// Collision-resistant mixing of (master seed, replication index):
/// a splitmix-style finalizer of master + (replication+1) * golden gamma.
/// Injective in the replication index for a fixed master.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication);

/// Counter-based standard-normal stream: value i is a pure function of
/// (seed, i), so draws are reproducible across platforms and threads.
/// Normals come from the inverse CDF of a 53-bit uniform in (0,1).
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : seed_(seed) {}
    double uniform(std::uint64_t i) const;
    double normal(std::uint64_t i) const;

  private:
    std::uint64_t seed_;
};

enum class SimPath { RecursiveAr, DenseGaussian };

struct SimConfig {
    int length = 0;
    std::uint64_t seed = 0;
    int replication = 0;  // folded into the seed via derive_seed
    /// Default: RecursiveAr for WhiteNoise/Ar, DenseGaussian otherwise.
    std::optional<SimPath> path;
    int dense_limit = 4096;
};

/// Reusable sampler: the dense path factors the model covariance once and
/// draws replications with one triangular multiply each.
class Simulator {
  public:
    Simulator(const LsbModelSpec& model, int length, std::optional<SimPath> path = {},
              int dense_limit = 4096);

    SimPath path() const { return path_; }
    Eigen::VectorXd draw(std::uint64_t seed, int replication = 0) const;

  private:
    LsbModelSpec model_;
    int length_;
    SimPath path_;
    Eigen::MatrixXd chol_;  // lower factor, dense path only
};

/// One realization of the process.
Eigen::VectorXd simulate(const LsbModelSpec& model, const SimConfig& cfg);

}  // namespace lsb
