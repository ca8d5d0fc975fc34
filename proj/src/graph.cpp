#include "drsm/graph.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "drsm/rng.hpp"

namespace drsm {

std::vector<int> Topology::degrees() const {
  std::vector<int> deg(n, 0);
  for (const auto& [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

std::string Topology::to_edge_list() const {
  std::ostringstream os;
  os << n << "\n";
  for (const auto& [u, v] : edges) os << u << " " << v << "\n";
  return os.str();
}

Topology Topology::from_edge_list(const std::string& text) {
  std::istringstream is(text);
  Topology g;
  if (!(is >> g.n) || g.n < 2) throw ConfigError("edge list: bad agent count");
  int u, v;
  while (is >> u >> v) {
    if (u < 0 || v < 0 || u >= g.n || v >= g.n || u == v) {
      throw ConfigError("edge list: bad edge");
    }
    g.edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  g.kind = TopologyKind::erdos_renyi;  // unknown provenance; treated as generic
  return g;
}

bool is_connected(const Topology& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (const auto& [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == g.n;
}

Topology build_topology(TopologyKind kind, int n, double p, std::uint64_t seed) {
  if (n < 2) throw PreconditionError("build_topology: need n >= 2");
  Topology g;
  g.n = n;
  g.kind = kind;
  switch (kind) {
    case TopologyKind::complete:
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) g.edges.emplace_back(u, v);
      }
      return g;
    case TopologyKind::ring:
      for (int u = 0; u + 1 < n; ++u) g.edges.emplace_back(u, u + 1);
      if (n > 2) g.edges.emplace_back(0, n - 1);
      return g;
    case TopologyKind::erdos_renyi: {
      if (!(p > 0.0 && p <= 1.0)) {
        throw PreconditionError("build_topology: ER needs p in (0,1]");
      }
      g.p = p;
      for (int attempt = 0; attempt < 1000; ++attempt) {
        g.seed = seed + static_cast<std::uint64_t>(attempt);
        g.edges.clear();
        Rng rng(g.seed);
        for (int u = 0; u < n; ++u) {
          for (int v = u + 1; v < n; ++v) {
            if (rng.uniform() < p) g.edges.emplace_back(u, v);
          }
        }
        if (is_connected(g)) return g;
      }
      throw Error("build_topology: no connected ER graph in 1000 attempts");
    }
  }
  throw Error("build_topology: unreachable");
}

MixingMatrix make_mixing_matrix(Eigen::MatrixXd W) {
  MixingMatrix m;
  m.W = std::move(W);
  const Eigen::Index n = m.W.rows();
  if (n == 1) {
    // Trivial network: the spectrum below the Perron eigenvalue is empty.
    m.lambda2 = m.lambda_n = 1.0;
    m.sigma2 = 0.0;
    return m;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.W, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();  // ascending
  m.lambda_n = ev(0);
  m.lambda2 = ev(n - 2);
  m.sigma2 = std::max(std::abs(m.lambda2), std::abs(m.lambda_n));
  return m;
}

MixingMatrix metropolis_weights(const Topology& g) {
  if (!is_connected(g)) throw PreconditionError("metropolis_weights: graph not connected");
  const auto deg = g.degrees();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(g.n, g.n);
  for (const auto& [u, v] : g.edges) {
    const double w = 1.0 / (1.0 + std::max(deg[u], deg[v]));
    W(u, v) = w;
    W(v, u) = w;
  }
  for (int i = 0; i < g.n; ++i) W(i, i) = 1.0 - W.row(i).sum();
  return make_mixing_matrix(std::move(W));
}

MixingMatrix uniform_weights(const Topology& g) {
  const auto deg = g.degrees();
  for (int d : deg) {
    if (d != g.n - 1) throw PreconditionError("uniform_weights: graph must be complete");
  }
  return make_mixing_matrix(Eigen::MatrixXd::Constant(g.n, g.n, 1.0 / g.n));
}

MixingMatrix default_weights(const Topology& g) {
  if (g.kind == TopologyKind::complete) return uniform_weights(g);
  return metropolis_weights(g);
}

MixingMatrix matrix_power(const MixingMatrix& w, int t) {
  if (t < 1) throw PreconditionError("matrix_power: need t >= 1");
  if (t == 1) return w;
  // Square-and-multiply keeps the error of high powers small.
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(w.W.rows(), w.W.cols());
  Eigen::MatrixXd base = w.W;
  int e = t;
  while (e > 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  // Symmetrize away the last bits of rounding noise.
  result = 0.5 * (result + result.transpose());
  return make_mixing_matrix(std::move(result));
}

int min_consensus_rounds(double sigma2, int n) {
  if (n < 2) throw PreconditionError("min_consensus_rounds: need n >= 2");
  if (!(sigma2 >= 0.0 && sigma2 < 1.0)) {
    throw PreconditionError("min_consensus_rounds: need sigma2 in [0,1)");
  }
  if (sigma2 == 0.0) return 1;
  const double target = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
  int t = 1;
  double pow_t = sigma2;
  while (pow_t > target) {
    ++t;
    pow_t *= sigma2;
  }
  return t;
}

}  // namespace drsm
