#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>

#include "drsm/optimizer_types.hpp"
#include "drsm/problems.hpp"

namespace drsm {

// Inlier/outlier mixture spanning a (d-r)-dimensional subspace.
struct DpcpSpec {
  int d = 30;
  int r = 5;
  int m1 = 180;  // inliers
  int m2 = 420;  // outliers
  int n = 6;     // agents
  std::uint64_t seed = 0;
};

// Observations Y = A S with Bernoulli-Gaussian S.
struct OdlSpec {
  int d = 16;
  int m = 640;
  double theta = 0.3;
  int n = 8;
  std::uint64_t seed = 0;
};

// Returns the per-agent data blocks and Xtrue spanning the complement S_perp.
// Inliers are uniform on the unit sphere of S, outliers uniform on the unit
// sphere of R^d; all m columns are permuted uniformly and split into n blocks.
std::pair<DpcpData, StiefelPoint> generate_dpcp(const DpcpSpec& spec);

// Returns the per-agent observation blocks and the dictionary A.
std::pair<OdlData, StiefelPoint> generate_odl(const OdlSpec& spec);

// One Haar-random Stiefel point copied to all n agents (consensual start).
NetworkState initial_state(int d, int r, int n, std::uint64_t seed);

// Binary dataset container: header (magic, version, d, r-or-0 with 0 marking
// a dictionary ground truth, n, N, dtype = f64 little-endian), column-major
// data payload in agent order, then the ground-truth matrix.
struct Dataset {
  std::vector<Eigen::MatrixXd> blocks;
  Eigen::MatrixXd truth;
  bool is_dictionary = false;  // truth is d x d (ODL) rather than d x r (DPCP)
};

void write_dataset(const std::filesystem::path& path, const Dataset& ds);
Dataset read_dataset(const std::filesystem::path& path);

}  // namespace drsm
