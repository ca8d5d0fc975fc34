#include "drsm/datagen.hpp"

#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "drsm/rng.hpp"

namespace drsm {

namespace {

std::vector<Eigen::MatrixXd> split_columns(const Eigen::MatrixXd& cols, int n) {
  const Eigen::Index per = cols.cols() / n;
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(n);
  for (int i = 0; i < n; ++i) blocks.push_back(cols.middleCols(i * per, per));
  return blocks;
}

}  // namespace

std::pair<DpcpData, StiefelPoint> generate_dpcp(const DpcpSpec& spec) {
  if (spec.r >= spec.d || spec.r < 1) {
    throw PreconditionError("generate_dpcp: need 1 <= r < d");
  }
  if (spec.n < 1 || (spec.m1 + spec.m2) % spec.n != 0) {
    throw PreconditionError("generate_dpcp: m1 + m2 must be divisible by n");
  }
  Rng rng(spec.seed);
  // Haar orthogonal frame: first d-r columns span S, the rest span S_perp.
  const StiefelPoint q = random_stiefel(spec.d, spec.d, rng);
  const Eigen::MatrixXd basis_s = q.matrix().leftCols(spec.d - spec.r);
  const StiefelPoint xtrue =
      StiefelPoint::from_orthonormal(q.matrix().rightCols(spec.r));

  const int m = spec.m1 + spec.m2;
  Eigen::MatrixXd cols(spec.d, m);
  for (int j = 0; j < spec.m1; ++j) {
    const Eigen::VectorXd g = rng.gaussian_matrix(spec.d - spec.r, 1);
    cols.col(j) = basis_s * (g / g.norm());
  }
  for (int j = spec.m1; j < m; ++j) {
    const Eigen::VectorXd g = rng.gaussian_matrix(spec.d, 1);
    cols.col(j) = g / g.norm();
  }
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  Eigen::MatrixXd shuffled(spec.d, m);
  for (int j = 0; j < m; ++j) shuffled.col(j) = cols.col(perm[j]);

  return {DpcpData{split_columns(shuffled, spec.n)}, xtrue};
}

std::pair<OdlData, StiefelPoint> generate_odl(const OdlSpec& spec) {
  if (!(spec.theta > 0.0 && spec.theta < 1.0)) {
    throw PreconditionError("generate_odl: need theta in (0,1)");
  }
  if (spec.n < 1 || spec.m % spec.n != 0) {
    throw PreconditionError("generate_odl: m must be divisible by n");
  }
  Rng rng(spec.seed);
  const StiefelPoint a = random_stiefel(spec.d, spec.d, rng);
  Eigen::MatrixXd s(spec.d, spec.m);
  for (Eigen::Index j = 0; j < spec.m; ++j) {
    for (Eigen::Index i = 0; i < spec.d; ++i) {
      s(i, j) = rng.uniform() < spec.theta ? rng.gaussian() : 0.0;
    }
  }
  const Eigen::MatrixXd y = a.matrix() * s;
  return {OdlData{split_columns(y, spec.n)}, a};
}

NetworkState initial_state(int d, int r, int n, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("initial_state: need n >= 1");
  Rng rng(seed);
  const StiefelPoint x = random_stiefel(d, r, rng);
  NetworkState state;
  state.points.assign(n, x);
  return state;
}

namespace {

constexpr char kMagic[8] = {'D', 'R', 'S', 'M', 'D', 'A', 'T', 'A'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kDtypeF64LE = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

void put_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  // Eigen's default storage is column-major.
  os.write(reinterpret_cast<const char*>(m.data()),
           static_cast<std::streamsize>(sizeof(double) * m.size()));
}

Eigen::MatrixXd get_matrix(std::istream& is, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  is.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * m.size()));
  return m;
}

}  // namespace

void write_dataset(const std::filesystem::path& path, const Dataset& ds) {
  if (ds.blocks.empty()) throw PreconditionError("write_dataset: no blocks");
  const Eigen::Index d = ds.blocks[0].rows();
  const Eigen::Index per = ds.blocks[0].cols();
  for (const auto& b : ds.blocks) {
    if (b.rows() != d || b.cols() != per) {
      throw PreconditionError("write_dataset: ragged blocks");
    }
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("write_dataset: cannot open " + path.string());
  os.write(kMagic, sizeof kMagic);
  put_u32(os, kVersion);
  put_u32(os, static_cast<std::uint32_t>(d));
  put_u32(os, ds.is_dictionary ? 0u : static_cast<std::uint32_t>(ds.truth.cols()));
  put_u32(os, static_cast<std::uint32_t>(ds.blocks.size()));
  put_u32(os, static_cast<std::uint32_t>(per));
  put_u32(os, kDtypeF64LE);
  for (const auto& b : ds.blocks) put_matrix(os, b);
  put_matrix(os, ds.truth);
  if (!os) throw ConfigError("write_dataset: write failed for " + path.string());
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("read_dataset: cannot open " + path.string());
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw ConfigError("read_dataset: bad magic in " + path.string());
  }
  if (get_u32(is) != kVersion) throw ConfigError("read_dataset: unsupported version");
  const std::uint32_t d = get_u32(is);
  const std::uint32_t r = get_u32(is);
  const std::uint32_t n = get_u32(is);
  const std::uint32_t per = get_u32(is);
  if (get_u32(is) != kDtypeF64LE) throw ConfigError("read_dataset: unsupported dtype");
  Dataset ds;
  ds.is_dictionary = r == 0;
  ds.blocks.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) ds.blocks.push_back(get_matrix(is, d, per));
  ds.truth = get_matrix(is, d, ds.is_dictionary ? d : r);
  if (!is) throw ConfigError("read_dataset: truncated file " + path.string());
  return ds;
}

}  // namespace drsm
