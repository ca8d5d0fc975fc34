#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "drsm/errors.hpp"

namespace drsm {

enum class TopologyKind { complete, ring, erdos_renyi };

// Connected undirected communication graph (no self-loops stored).
struct Topology {
  int n = 0;
  TopologyKind kind = TopologyKind::complete;
  std::vector<std::pair<int, int>> edges;  // u < v
  double p = 0.0;                          // ER edge probability
  std::uint64_t seed = 0;                  // ER seed actually used

  std::vector<int> degrees() const;

  // "n\nu v\n..." reproducibility snapshot.
  std::string to_edge_list() const;
  static Topology from_edge_list(const std::string& text);
};

bool is_connected(const Topology& g);

// Builds a connected topology. ER graphs are resampled with seed+1, seed+2, ...
// until connected (at most 1000 attempts).
Topology build_topology(TopologyKind kind, int n, double p = 0.0,
                        std::uint64_t seed = 0);

// Symmetric doubly stochastic weights with cached spectral data.
// sigma2 = max(|lambda_2|, |lambda_n|), the second-largest singular value.
struct MixingMatrix {
  Eigen::MatrixXd W;
  double sigma2 = 0.0;
  double lambda2 = 0.0;
  double lambda_n = 0.0;

  int n() const { return static_cast<int>(W.rows()); }
};

// Wraps a symmetric doubly stochastic matrix, computing spectral data.
MixingMatrix make_mixing_matrix(Eigen::MatrixXd W);

// Metropolis-Hastings rule: W_ij = 1/(1 + max(deg_i, deg_j)) on edges,
// the diagonal absorbs the remainder.
MixingMatrix metropolis_weights(const Topology& g);

// W = (1/n) 11^T; requires a complete graph.
MixingMatrix uniform_weights(const Topology& g);

// Uniform weights for complete graphs, Metropolis otherwise.
MixingMatrix default_weights(const Topology& g);

// W^t, recomputing the spectral data of the power.
MixingMatrix matrix_power(const MixingMatrix& w, int t);

// Smallest integer t with sigma2^t <= 1/(2 sqrt(n)); 1 when sigma2 == 0.
int min_consensus_rounds(double sigma2, int n);

}  // namespace drsm
