#include "crlab/cr_dim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "crlab/errors.hpp"
#include "crlab/parallel.hpp"

namespace crlab {

std::string ColumnKey::name() const {
  std::ostringstream s;
  s << (imag ? "Im " : "Re ") << (field == PolyVectorField::Component::h1 ? 'a' : 'b') << '_' << j
    << k;
  return s.str();
}

std::vector<ColumnKey> column_layout(int degree) {
  if (degree < 1) throw PreconditionError("collocation degree must be >= 1");
  std::vector<ColumnKey> out;
  for (auto comp : {PolyVectorField::Component::h1, PolyVectorField::Component::h2})
    for (int d = 1; d <= degree; ++d)
      for (int j = d; j >= 0; --j)
        for (bool im : {false, true}) out.push_back({comp, j, d - j, im});
  return out;
}

std::vector<double> symmetric_t_values(int count, double t_max) {
  if (count < 1) throw PreconditionError("need at least one t value");
  if (count == 1) return {0.0};
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = -t_max + 2.0 * t_max * i / (count - 1);
  if (count % 2 == 1) out[static_cast<std::size_t>(count / 2)] = 0.0;
  return out;
}

CollocationGrid CollocationGrid::standard(const HypersurfaceModel& model, int degree, int n_radii,
                                          int n_angles) {
  CollocationGrid g;
  if (n_angles == 0) n_angles = std::max(16, 2 * degree + 2);
  g.annulus = default_annulus(model, n_radii, n_angles);
  g.t_values = symmetric_t_values(2 * degree + 1, std::min(0.1, 0.5 * model.delta0()));
  return g;
}

namespace {

void fill_row(const HypersurfaceModel& model, const SurfacePoint& pt,
              const std::vector<ColumnKey>& cols, int degree, Eigen::MatrixXd& M, Eigen::Index r) {
  const RhoGradient g = model.rho_gradient(pt.z1, pt.z2);
  std::vector<cplx> p1(static_cast<std::size_t>(degree + 1)), p2(p1.size());
  p1[0] = p2[0] = 1.0;
  for (std::size_t i = 1; i < p1.size(); ++i) {
    p1[i] = p1[i - 1] * pt.z1;
    p2[i] = p2[i - 1] * pt.z2;
  }
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const ColumnKey& key = cols[c];
    const cplx rz = key.field == PolyVectorField::Component::h1 ? g.rho_z1 : g.rho_z2;
    const cplx v = rz * p1[static_cast<std::size_t>(key.j)] * p2[static_cast<std::size_t>(key.k)];
    M(r, static_cast<Eigen::Index>(c)) = key.imag ? -v.imag() : v.real();
  }
}

CollocationSystem assemble_impl(const HypersurfaceModel& model, int degree,
                                const CollocationGrid& grid, bool parallel) {
  CollocationSystem sys;
  sys.degree = degree;
  sys.columns = column_layout(degree);
  const auto pts = parallel ? sample_points(model, grid.annulus, grid.t_values)
                            : sample_points_serial(model, grid.annulus, grid.t_values);
  const long rows = static_cast<long>(pts.size());
  const long ncols = static_cast<long>(sys.columns.size());
  if (rows < 3 * ncols) {
    std::ostringstream msg;
    msg << "grid gives " << rows << " rows for " << ncols << " columns; need at least 3x";
    throw PreconditionError(msg.str());
  }
  sys.matrix.resize(rows, ncols);
  auto body = [&](long r) { fill_row(model, pts[static_cast<std::size_t>(r)], sys.columns, degree, sys.matrix, r); };
  if (parallel)
    parallel_for(rows, body);
  else
    for (long r = 0; r < rows; ++r) body(r);

  const int nr = grid.annulus.n_radii, na = grid.annulus.n_angles;
  sys.row_group.resize(static_cast<std::size_t>(rows));
  for (long r = 0; r < rows; ++r) sys.row_group[static_cast<std::size_t>(r)] = static_cast<int>((r / na) % nr);

  std::vector<double> gmax(static_cast<std::size_t>(nr), 0.0);
  for (long r = 0; r < rows; ++r) {
    auto& m = gmax[static_cast<std::size_t>(sys.row_group[static_cast<std::size_t>(r)])];
    m = std::max(m, sys.matrix.row(r).cwiseAbs().maxCoeff());
  }
  if (!sys.matrix.allFinite()) throw NumericalError("non-finite collocation entries");
  const auto radii = grid.annulus.radii();
  for (int g = 0; g < nr; ++g)
    if (!(gmax[static_cast<std::size_t>(g)] > 1e-300)) sys.dead_radii.push_back(radii[static_cast<std::size_t>(g)]);
  for (long r = 0; r < rows; ++r) {
    const double m = gmax[static_cast<std::size_t>(sys.row_group[static_cast<std::size_t>(r)])];
    if (m > 1e-300) sys.matrix.row(r) /= m;
  }

  std::ostringstream meta;
  meta << "annulus [" << grid.annulus.r_min << ", " << grid.annulus.r_max << "], " << nr
       << " radii x " << na << " angles x " << grid.t_values.size() << " t values";
  sys.sample_meta = meta.str();
  return sys;
}

}  // namespace

CollocationSystem assemble(const HypersurfaceModel& model, int degree, const CollocationGrid& grid) {
  return assemble_impl(model, degree, grid, true);
}

CollocationSystem assemble_serial(const HypersurfaceModel& model, int degree,
                                  const CollocationGrid& grid) {
  return assemble_impl(model, degree, grid, false);
}

Eigen::VectorXd flatten(const PolyVectorField& field, const std::vector<ColumnKey>& columns) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const ColumnKey& k = columns[c];
    const cplx x = field.get(k.field, k.j, k.k);
    v(static_cast<Eigen::Index>(c)) = k.imag ? x.imag() : x.real();
  }
  return v;
}

PolyVectorField unflatten(const Eigen::VectorXd& v, const std::vector<ColumnKey>& columns, int degree) {
  PolyVectorField f(degree);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const ColumnKey& k = columns[c];
    cplx x = f.get(k.field, k.j, k.k);
    const double val = v(static_cast<Eigen::Index>(c));
    x = k.imag ? cplx(x.real(), val) : cplx(val, x.imag());
    f.set(k.field, k.j, k.k, x);
  }
  return f;
}

CollocationReport nullspace(const CollocationSystem& sys, double threshold, double min_gap,
                            double column_floor) {
  if (!(threshold >= 1e-12 && threshold <= 1e-4))
    throw PreconditionError("threshold must lie in [1e-12, 1e-4]");
  const Eigen::MatrixXd& A = sys.matrix;
  const Eigen::Index n = A.cols();
  if (n == 0 || A.rows() < n) throw PreconditionError("collocation matrix needs rows >= columns");
  if (!A.allFinite()) throw NumericalError("collocation matrix has non-finite entries");

  // Columns are equilibrated, but never scaled up by more than 1/column_floor
  // relative to the largest one: numerically zero columns must stay small.
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  const double floor_abs = column_floor * scale.maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) scale(i) = std::max(scale(i), floor_abs);
  if (!(floor_abs > 0.0)) scale.setOnes();
  const Eigen::MatrixXd W = A * scale.cwiseInverse().asDiagonal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(W);
  const Eigen::MatrixXd R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (!s.allFinite()) {
    std::ostringstream msg;
    msg << "SVD produced non-finite singular values (column scale range "
        << scale.minCoeff() << " .. " << scale.maxCoeff() << ")";
    throw NumericalError(msg.str());
  }

  CollocationReport rep;
  rep.threshold = threshold;
  rep.singular_values.assign(s.data(), s.data() + s.size());
  const double smax = s(0);
  const double cut = threshold * smax;
  int rank = 0;
  while (rank < n && s(rank) >= cut && s(rank) > 0.0) ++rank;
  rep.null_dim = static_cast<int>(n) - rank;
  if (rank == 0)
    rep.gap_ratio = 0.0;
  else if (rep.null_dim == 0)
    rep.gap_ratio = s(n - 1) / cut;
  else
    rep.gap_ratio = s(rank) > 0.0 ? s(rank - 1) / s(rank) : std::numeric_limits<double>::infinity();
  rep.verdict = rep.gap_ratio >= min_gap ? DimVerdict::determined : DimVerdict::indeterminate;

  for (Eigen::Index i = rank; i < n; ++i) {
    Eigen::VectorXd v = svd.matrixV().col(i).cwiseQuotient(scale);
    v.normalize();
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    rep.basis.push_back(unflatten(v, sys.columns, sys.degree));
    rep.basis_vectors.push_back(std::move(v));
  }
  return rep;
}

double reference_residual(const CollocationSystem& sys, const PolyVectorField& field) {
  const Eigen::VectorXd v = flatten(field, sys.columns);
  const double nv = v.norm(), na = sys.matrix.norm();
  if (nv == 0.0 || na == 0.0) return 0.0;
  return (sys.matrix * v).norm() / (na * nv);
}

double reference_residual(const CollocationSystem& sys, const AnalyticVectorField& field, int degree) {
  return reference_residual(sys, taylor_of_field(field, degree));
}

double line_angle(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const double nu = u.norm(), nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return std::numbers::pi / 2;
  const Eigen::VectorXd a = u / nu;
  Eigen::VectorXd b = v / nv;
  if (a.dot(b) < 0.0) b = -b;
  return 2.0 * std::asin(std::min(1.0, 0.5 * (a - b).norm()));
}

std::vector<SliceRow> slice_checks(const HypersurfaceModel& model, const PolyVectorField& field,
                                   double alpha_slice, const std::vector<double>& radii, int n_angles) {
  std::vector<SliceRow> out;
  for (double r : radii) {
    if (!(r > 0.0) || r > model.eps0()) throw PreconditionError("slice radius outside (0, eps0]");
    SliceRow row;
    row.radius = r;
    row.P_at_radius = model.P(cplx(r, 0.0));
    for (int i = 0; i < n_angles; ++i) {
      const cplx z2 = std::polar(r, 2.0 * std::numbers::pi * i / n_angles);
      const double r0 = tangency_residual(model, field, model.point(z2, 0.0));
      row.max_abs_t0 = std::max(row.max_abs_t0, std::abs(r0));
      if (i == 0) row.real_axis_t0 = r0;
      const double t = alpha_slice * model.P(z2);
      if (std::abs(t) >= model.delta0()) continue;
      const double rp = tangency_residual(model, field, model.point(z2, t));
      row.max_abs_tP = std::max(row.max_abs_tP, std::abs(rp));
      if (i == 0) row.real_axis_tP = rp;
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace crlab
