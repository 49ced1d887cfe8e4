#include "rim/brane.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "rim/errors.hpp"

namespace rim {

int component_count(int target_dim, int brane_dim) {
  if (brane_dim < 1 || brane_dim > target_dim) {
    throw Error(Errc::OutOfDomain, "brane dimension " + std::to_string(brane_dim) +
                                       " outside [1, " + std::to_string(target_dim) + "]");
  }
  long long c = 1;
  for (int i = 1; i <= brane_dim; ++i) c = c * (target_dim - brane_dim + i) / i;
  return static_cast<int>(c);
}

std::vector<MultiIndex> increasing_multi_indices(int target_dim, int brane_dim) {
  component_count(target_dim, brane_dim);
  std::vector<MultiIndex> out;
  MultiIndex idx(static_cast<std::size_t>(brane_dim));
  for (int i = 0; i < brane_dim; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(idx);
    int pos = brane_dim - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == target_dim - brane_dim + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < brane_dim; ++i) {
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return out;
}

// --- BraneEmbedding ---------------------------------------------------------

BraneEmbedding::BraneEmbedding(int brane_dim, int target_dim, std::vector<Interval> box,
                               std::vector<int> points)
    : brane_dim_(brane_dim), target_dim_(target_dim), box_(std::move(box)), points_(std::move(points)) {
  component_count(target_dim_, brane_dim_);
  require_dim(static_cast<long>(box_.size()), brane_dim_, "parameter box");
  require_dim(static_cast<long>(points_.size()), brane_dim_, "grid resolution");
  for (int d = 0; d < brane_dim_; ++d) {
    const auto& iv = box_[static_cast<std::size_t>(d)];
    if (!(iv.hi > iv.lo)) throw Error(Errc::OutOfDomain, "empty parameter interval");
    if (points_[static_cast<std::size_t>(d)] < 2) {
      throw Error(Errc::OutOfDomain, "grid needs at least 2 points per axis");
    }
  }
}

BraneEmbedding BraneEmbedding::analytic(int brane_dim, int target_dim, std::vector<Interval> box,
                                        std::vector<int> points, Map map, JacobianFn jac) {
  BraneEmbedding emb(brane_dim, target_dim, std::move(box), std::move(points));
  if (!jac) {
    jac = [brane_dim, target_dim, map](const Vector& z) {
      Matrix j(target_dim, brane_dim);
      for (int d = 0; d < brane_dim; ++d) {
        const double h = 1e-6 * std::max(1.0, std::abs(z(d)));
        Vector zp = z, zm = z;
        zp(d) += h;
        zm(d) -= h;
        j.col(d) = (map(zp) - map(zm)) / (2.0 * h);
      }
      return j;
    };
  }
  emb.map_ = std::move(map);
  emb.jac_ = std::move(jac);
  return emb;
}

BraneEmbedding BraneEmbedding::gridded(int brane_dim, int target_dim, std::vector<Interval> box,
                                       std::vector<int> points, Matrix nodes) {
  BraneEmbedding emb(brane_dim, target_dim, std::move(box), std::move(points));
  long expected = 1;
  for (int p : emb.points_) expected *= p;
  require_dim(nodes.rows(), expected, "grid node count");
  require_dim(nodes.cols(), target_dim, "grid node coordinates");
  emb.nodes_ = std::move(nodes);
  return emb;
}

BraneEmbedding BraneEmbedding::from_rows(int brane_dim, int target_dim, const Matrix& rows) {
  require_dim(rows.cols(), brane_dim + target_dim, "grid row width");
  std::vector<Interval> box;
  std::vector<int> points;
  std::vector<std::vector<double>> axes;
  for (int d = 0; d < brane_dim; ++d) {
    std::vector<double> vals(rows.col(d).data(), rows.col(d).data() + rows.rows());
    std::sort(vals.begin(), vals.end());
    std::vector<double> uniq;
    for (double v : vals) {
      if (uniq.empty() || std::abs(v - uniq.back()) > 1e-12 * std::max(1.0, std::abs(v))) {
        uniq.push_back(v);
      }
    }
    if (uniq.size() < 2) throw Error(Errc::OutOfDomain, "grid needs at least 2 points per axis");
    const double step = (uniq.back() - uniq.front()) / static_cast<double>(uniq.size() - 1);
    for (std::size_t i = 0; i < uniq.size(); ++i) {
      if (std::abs(uniq[i] - (uniq.front() + step * static_cast<double>(i))) > 1e-9 * std::max(1.0, std::abs(step))) {
        throw Error(Errc::OutOfDomain, "grid axis " + std::to_string(d) + " is not regular");
      }
    }
    box.push_back({uniq.front(), uniq.back()});
    points.push_back(static_cast<int>(uniq.size()));
    axes.push_back(std::move(uniq));
  }
  long total = 1;
  for (int p : points) total *= p;
  if (rows.rows() != total) {
    throw Error(Errc::OutOfDomain, "grid rows do not form a full tensor grid: " +
                                       std::to_string(rows.rows()) + " rows, expected " +
                                       std::to_string(total));
  }
  Matrix nodes(total, target_dim);
  std::vector<bool> seen(static_cast<std::size_t>(total), false);
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    long flat = 0;
    long stride = 1;
    for (int d = 0; d < brane_dim; ++d) {
      const auto& ax = axes[static_cast<std::size_t>(d)];
      const double step = (ax.back() - ax.front()) / static_cast<double>(ax.size() - 1);
      const long i = std::lround((rows(r, d) - ax.front()) / step);
      flat += i * stride;
      stride *= static_cast<long>(ax.size());
    }
    if (seen[static_cast<std::size_t>(flat)]) throw Error(Errc::OutOfDomain, "duplicate grid node");
    seen[static_cast<std::size_t>(flat)] = true;
    nodes.row(flat) = rows.block(r, brane_dim, 1, target_dim);
  }
  return gridded(brane_dim, target_dim, std::move(box), std::move(points), std::move(nodes));
}

double BraneEmbedding::spacing(int axis) const {
  const auto& iv = box_[static_cast<std::size_t>(axis)];
  return (iv.hi - iv.lo) / static_cast<double>(points_[static_cast<std::size_t>(axis)] - 1);
}

int BraneEmbedding::node_index(const std::vector<int>& idx) const {
  int flat = 0;
  int stride = 1;
  for (int d = 0; d < brane_dim_; ++d) {
    flat += idx[static_cast<std::size_t>(d)] * stride;
    stride *= points_[static_cast<std::size_t>(d)];
  }
  return flat;
}

bool BraneEmbedding::contains(const Vector& z) const {
  if (z.size() != brane_dim_) return false;
  for (int d = 0; d < brane_dim_; ++d) {
    const auto& iv = box_[static_cast<std::size_t>(d)];
    const double slack = 1e-12 * (iv.hi - iv.lo);
    if (z(d) < iv.lo - slack || z(d) > iv.hi + slack) return false;
  }
  return true;
}

namespace {

// Cell containing z and local coordinates t in [0,1]^D.
void locate(const BraneEmbedding& emb, const Vector& z, std::vector<int>& cell, Vector& t) {
  const int dd = emb.brane_dim();
  cell.assign(static_cast<std::size_t>(dd), 0);
  t.resize(dd);
  for (int d = 0; d < dd; ++d) {
    const auto& iv = emb.box()[static_cast<std::size_t>(d)];
    const int cells = emb.points()[static_cast<std::size_t>(d)] - 1;
    const double h = (iv.hi - iv.lo) / cells;
    int i = static_cast<int>(std::floor((z(d) - iv.lo) / h));
    i = std::clamp(i, 0, cells - 1);
    cell[static_cast<std::size_t>(d)] = i;
    t(d) = (z(d) - (iv.lo + i * h)) / h;
  }
}

}  // namespace

Vector BraneEmbedding::position(const Vector& z) const {
  if (!contains(z)) throw Error(Errc::OutOfDomain, "parameter point outside the box");
  if (!is_gridded()) {
    Vector x = map_(z);
    require_dim(x.size(), target_dim_, "embedding value");
    return x;
  }
  std::vector<int> cell;
  Vector t;
  locate(*this, z, cell, t);
  Vector x = Vector::Zero(target_dim_);
  std::vector<int> idx(static_cast<std::size_t>(brane_dim_));
  for (int corner = 0; corner < (1 << brane_dim_); ++corner) {
    double w = 1.0;
    for (int d = 0; d < brane_dim_; ++d) {
      const int bit = (corner >> d) & 1;
      idx[static_cast<std::size_t>(d)] = cell[static_cast<std::size_t>(d)] + bit;
      w *= bit ? t(d) : 1.0 - t(d);
    }
    x += w * nodes_.row(node_index(idx)).transpose();
  }
  return x;
}

Matrix BraneEmbedding::jacobian(const Vector& z) const {
  if (!contains(z)) throw Error(Errc::OutOfDomain, "parameter point outside the box");
  if (!is_gridded()) {
    Matrix j = jac_(z);
    require_dim(j.rows(), target_dim_, "embedding Jacobian rows");
    require_dim(j.cols(), brane_dim_, "embedding Jacobian columns");
    return j;
  }
  std::vector<int> cell;
  Vector t;
  locate(*this, z, cell, t);
  Matrix j = Matrix::Zero(target_dim_, brane_dim_);
  std::vector<int> idx(static_cast<std::size_t>(brane_dim_));
  for (int corner = 0; corner < (1 << brane_dim_); ++corner) {
    for (int d = 0; d < brane_dim_; ++d) idx[static_cast<std::size_t>(d)] = cell[static_cast<std::size_t>(d)] + ((corner >> d) & 1);
    const Vector xc = nodes_.row(node_index(idx)).transpose();
    for (int axis = 0; axis < brane_dim_; ++axis) {
      double w = 1.0;
      for (int d = 0; d < brane_dim_; ++d) {
        const int bit = (corner >> d) & 1;
        if (d == axis) {
          w *= (bit ? 1.0 : -1.0) / spacing(d);
        } else {
          w *= bit ? t(d) : 1.0 - t(d);
        }
      }
      j.col(axis) += w * xc;
    }
  }
  return j;
}

int BraneEmbedding::cell_count() const {
  int total = 1;
  for (int p : points_) total *= p - 1;
  return total;
}

std::vector<int> BraneEmbedding::cell_multi_index(int cell) const {
  if (cell < 0 || cell >= cell_count()) {
    throw Error(Errc::OutOfDomain, "cell index " + std::to_string(cell) + " out of range");
  }
  std::vector<int> idx(static_cast<std::size_t>(brane_dim_));
  for (int d = 0; d < brane_dim_; ++d) {
    const int cells = points_[static_cast<std::size_t>(d)] - 1;
    idx[static_cast<std::size_t>(d)] = cell % cells;
    cell /= cells;
  }
  return idx;
}

Vector BraneEmbedding::cell_center(int cell) const {
  const std::vector<int> idx = cell_multi_index(cell);
  Vector z(brane_dim_);
  for (int d = 0; d < brane_dim_; ++d) {
    z(d) = box_[static_cast<std::size_t>(d)].lo + (idx[static_cast<std::size_t>(d)] + 0.5) * spacing(d);
  }
  return z;
}

double BraneEmbedding::cell_volume() const {
  double vol = 1.0;
  for (int d = 0; d < brane_dim_; ++d) vol *= spacing(d);
  return vol;
}

// --- minors and metric ------------------------------------------------------

Vector jacobian_minors(const Matrix& jac) {
  const int target = static_cast<int>(jac.rows());
  const int dd = static_cast<int>(jac.cols());
  const auto indices = increasing_multi_indices(target, dd);
  Vector out(static_cast<Eigen::Index>(indices.size()));
  Matrix sub(dd, dd);
  for (std::size_t g = 0; g < indices.size(); ++g) {
    for (int i = 0; i < dd; ++i) sub.row(i) = jac.row(indices[g][static_cast<std::size_t>(i)]);
    out(static_cast<Eigen::Index>(g)) = sub.determinant();
  }
  return out;
}

GeneralizedVelocity generalized_velocity(const BraneEmbedding& emb, const Vector& z) {
  GeneralizedVelocity w;
  w.indices = increasing_multi_indices(emb.target_dim(), emb.brane_dim());
  w.components = jacobian_minors(emb.jacobian(z));
  w.z = z;
  return w;
}

double multivector_metric(const Matrix& g, const MultiIndex& gamma1, const MultiIndex& gamma2) {
  require_dim(static_cast<long>(gamma2.size()), static_cast<long>(gamma1.size()), "multi-index");
  const int dd = static_cast<int>(gamma1.size());
  Matrix sub(dd, dd);
  for (int i = 0; i < dd; ++i)
    for (int j = 0; j < dd; ++j) sub(i, j) = g(gamma1[static_cast<std::size_t>(i)], gamma2[static_cast<std::size_t>(j)]);
  return sub.determinant();
}

Matrix multivector_metric_matrix(const Matrix& g, int brane_dim) {
  const auto indices = increasing_multi_indices(static_cast<int>(g.rows()), brane_dim);
  const auto c = static_cast<Eigen::Index>(indices.size());
  Matrix out(c, c);
  for (Eigen::Index a = 0; a < c; ++a) {
    for (Eigen::Index b = a; b < c; ++b) {
      out(a, b) = multivector_metric(g, indices[static_cast<std::size_t>(a)], indices[static_cast<std::size_t>(b)]);
      out(b, a) = out(a, b);
    }
  }
  return out;
}

// --- BranePotential / BraneSpec --------------------------------------------

BranePotential BranePotential::zero(int components) {
  return BranePotential(components, [components](const Vector&) { return Vector::Zero(components); });
}

BranePotential BranePotential::constant(const Vector& a) {
  return BranePotential(static_cast<int>(a.size()), [a](const Vector&) { return a; });
}

BranePotential BranePotential::user(int components, Evaluator eval) {
  return BranePotential(components, std::move(eval));
}

Vector BranePotential::at(const Vector& x) const {
  Vector a = eval_(x);
  require_dim(a.size(), components_, "brane potential");
  return a;
}

BraneSpec::BraneSpec(MetricField g, int d)
    : brane_dim(d),
      metric(std::move(g)),
      potential(BranePotential::zero(component_count(metric.dim(), d))) {}

int BraneSpec::components() const { return component_count(metric.dim(), brane_dim); }

namespace {

struct DensityParts {
  double potential;
  double radicand;
  double extra;
};

DensityParts density_parts(const BraneSpec& spec, const Vector& x, const Vector& omega,
                           const Matrix& gram) {
  DensityParts out{spec.charge * spec.potential.at(x).dot(omega), omega.dot(gram * omega), 0.0};
  for (const auto& term : spec.extras) {
    const int n = term.tensor.rank();
    const double t = term.tensor.eval(x, omega);
    if (n % 2 == 0 && t < 0.0) {
      throw Error(Errc::NegativeEvenRadicand,
                  "brane S_" + std::to_string(n) + "(w,...,w) = " + std::to_string(t) + " < 0");
    }
    out.extra += term.coupling * signed_root(t, n);
  }
  return out;
}

}  // namespace

double brane_density(const BraneSpec& spec, const Vector& x, const Vector& omega) {
  require_dim(omega.size(), spec.components(), "generalized velocity");
  const Matrix gram = multivector_metric_matrix(spec.metric.at(x), spec.brane_dim);
  const DensityParts parts = density_parts(spec, x, omega, gram);
  if (spec.tension > 0.0 && parts.radicand < 0.0) {
    throw Error(Errc::NegativeRadicand, "g(w,w) = " + std::to_string(parts.radicand) + " < 0");
  }
  return parts.potential + spec.tension * std::sqrt(std::max(parts.radicand, 0.0)) + parts.extra;
}

double brane_action(const BraneSpec& spec, const BraneEmbedding& emb) {
  require_dim(emb.target_dim(), spec.metric.dim(), "embedding target");
  require_dim(emb.brane_dim(), spec.brane_dim, "embedding brane dimension");
  const bool constant_metric = spec.metric.is_constant();
  Matrix gram;
  if (constant_metric) {
    gram = multivector_metric_matrix(spec.metric.at(Vector::Zero(emb.target_dim())), spec.brane_dim);
  }
  double total = 0.0;
  for (int cell = 0; cell < emb.cell_count(); ++cell) {
    const Vector z = emb.cell_center(cell);
    const Vector x = emb.position(z);
    const Vector omega = jacobian_minors(emb.jacobian(z));
    if (!constant_metric) gram = multivector_metric_matrix(spec.metric.at(x), spec.brane_dim);
    const DensityParts parts = density_parts(spec, x, omega, gram);
    if (spec.tension > 0.0 && parts.radicand < 0.0) {
      throw Error(Errc::NegativeRadicand, "g(w,w) = " + std::to_string(parts.radicand) +
                                              " < 0 in cell " + std::to_string(cell));
    }
    total += parts.potential + spec.tension * std::sqrt(std::max(parts.radicand, 0.0)) + parts.extra;
  }
  return total * emb.cell_volume();
}

double integral_gauge_check(const BraneEmbedding& emb) {
  double worst = 0.0;
  Matrix internal(emb.brane_dim(), emb.brane_dim());
  for (int cell = 0; cell < emb.cell_count(); ++cell) {
    const Matrix j = emb.jacobian(emb.cell_center(cell));
    internal = j.topRows(emb.brane_dim());
    worst = std::max(worst, std::abs(internal.determinant() - 1.0));
  }
  return worst;
}

BraneExpansion nonrel_brane_expand(const BraneSpec& spec, const BraneEmbedding& emb, int cell) {
  require_dim(emb.target_dim(), spec.metric.dim(), "embedding target");
  const Vector z = emb.cell_center(cell);
  const Vector x = emb.position(z);
  const Vector omega = jacobian_minors(emb.jacobian(z));
  if (std::abs(omega(0) - 1.0) > 1e-10) {
    throw Error(Errc::GaugeViolation, "internal minor is " + std::to_string(omega(0)) +
                                          " in cell " + std::to_string(cell) + ", expected 1");
  }
  const Matrix gram = multivector_metric_matrix(spec.metric.at(x), spec.brane_dim);
  const Eigen::Index c = gram.rows();
  if (std::abs(gram(0, 0) - 1.0) > 1e-12) {
    throw Error(Errc::NotOneTime, "internal multivector metric component is not 1");
  }
  if (c > 1) {
    if (gram.row(0).tail(c - 1).cwiseAbs().maxCoeff() > 1e-12) {
      throw Error(Errc::NotOneTime, "internal direction mixes with the external minors");
    }
    const Matrix spatial = gram.bottomRightCorner(c - 1, c - 1);
    const Vector eig = Eigen::SelfAdjointEigenSolver<Matrix>(spatial, Eigen::EigenvaluesOnly).eigenvalues();
    if (!(eig.maxCoeff() < 0.0)) {
      throw Error(Errc::NotOneTime, "multivector metric has more than one time direction");
    }
  }

  const DensityParts parts = density_parts(spec, x, omega, gram);
  BraneExpansion out{};
  out.exact = brane_density(spec, x, omega);
  const Vector ws = omega.tail(c - 1);
  const double kinetic = c > 1 ? ws.dot(gram.bottomRightCorner(c - 1, c - 1) * ws) : 0.0;
  out.quadratic = parts.potential + spec.tension * (1.0 + 0.5 * kinetic) + parts.extra;
  out.spatial_norm = ws.norm();
  return out;
}

}  // namespace rim
