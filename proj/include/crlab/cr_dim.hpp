#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "crlab/hypersurface.hpp"
#include "crlab/vector_field.hpp"

namespace crlab {

/// One real unknown: Re or Im of a_jk (h1) or b_jk (h2).
struct ColumnKey {
  PolyVectorField::Component field;
  int j = 0;
  int k = 0;
  bool imag = false;

  std::string name() const;
};

/// Columns in a fixed order: h1 then h2, total degree ascending, then j
/// descending, Re before Im. (0, 0) is absent.
std::vector<ColumnKey> column_layout(int degree);

/// `count` distinct values in [-t_max, t_max], symmetric about 0 and including 0
/// when count is odd.
std::vector<double> symmetric_t_values(int count, double t_max);

struct CollocationGrid {
  AnnulusGrid annulus;
  std::vector<double> t_values;

  /// Default annulus with 2N + 1 symmetric t values up to min(0.1, delta0/2).
  /// n_angles = 0 picks max(16, 2N + 2); fewer than 2N + 1 angles alias
  /// Im z2^N onto zero.
  static CollocationGrid standard(const HypersurfaceModel& model, int degree, int n_radii = 40,
                                  int n_angles = 0);
};

struct CollocationSystem {
  Eigen::MatrixXd matrix;
  std::vector<ColumnKey> columns;
  int degree = 0;
  std::string sample_meta;
  /// radius group of each row
  std::vector<int> row_group;
  /// radii whose rows are all numerically zero
  std::vector<double> dead_radii;
};

/// Row r, column Re a_jk: Re[rho_z1 z1^j z2^k]; column Im a_jk: -Im[rho_z1 z1^j z2^k];
/// b_jk likewise with rho_z2. Rows of each radius are scaled so that the
/// group's largest entry is 1. Needs at least three rows per column.
CollocationSystem assemble(const HypersurfaceModel& model, int degree, const CollocationGrid& grid);
CollocationSystem assemble_serial(const HypersurfaceModel& model, int degree,
                                  const CollocationGrid& grid);

Eigen::VectorXd flatten(const PolyVectorField& field, const std::vector<ColumnKey>& columns);
PolyVectorField unflatten(const Eigen::VectorXd& v, const std::vector<ColumnKey>& columns, int degree);

enum class DimVerdict { determined, indeterminate };

struct CollocationReport {
  std::vector<double> singular_values;  ///< descending, of the column-equilibrated matrix
  int null_dim = 0;
  double gap_ratio = 0.0;
  double threshold = 1e-8;
  DimVerdict verdict = DimVerdict::indeterminate;
  std::vector<PolyVectorField> basis;
  std::vector<Eigen::VectorXd> basis_vectors;  ///< unit norm, flattened
  std::vector<std::pair<std::string, double>> reference_residuals;
};

/// Full singular spectrum after column equilibration (Householder QR then
/// one-sided Jacobi SVD of R). Column scales are floored at column_floor
/// times the largest column norm. null_dim counts sigma_i < threshold sigma_max;
/// the gap ratio is the smallest kept sigma over the largest discarded one
/// (or sigma_min/(threshold sigma_max) when nothing is discarded). A gap
/// ratio below min_gap makes the verdict indeterminate.
CollocationReport nullspace(const CollocationSystem& sys, double threshold = 1e-8,
                            double min_gap = 1e4, double column_floor = 1e-6);

/// ||A v|| / (||A||_F ||v||) with v the flattened field; 0 for the zero field.
double reference_residual(const CollocationSystem& sys, const PolyVectorField& field);
double reference_residual(const CollocationSystem& sys, const AnalyticVectorField& field, int degree);

/// Angle between the lines spanned by two coefficient vectors.
double line_angle(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

struct SliceRow {
  double radius = 0.0;
  double max_abs_t0 = 0.0;      ///< max |residual| on the t = 0 slice
  double max_abs_tP = 0.0;      ///< max |residual| on the t = alpha P(z2) slice
  double real_axis_t0 = 0.0;    ///< residual at z2 = radius on t = 0
  double real_axis_tP = 0.0;    ///< residual at z2 = radius on t = alpha P
  double P_at_radius = 0.0;
};

/// Tangency residual of `field` restricted to the slices t = 0 and
/// t = alpha_slice P(z2), per circle. Slice points with |t| >= delta0 are skipped.
std::vector<SliceRow> slice_checks(const HypersurfaceModel& model, const PolyVectorField& field,
                                   double alpha_slice, const std::vector<double>& radii,
                                   int n_angles = 32);

}  // namespace crlab
