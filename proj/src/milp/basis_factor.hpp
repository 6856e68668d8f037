#pragma once

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <vector>

#include "lp_form.hpp"

namespace gridsched::milp::detail {

/// LU of the basis matrix with product-form updates. Column k of B is the
/// [A -I] column of variable head[k].
class BasisFactor {
 public:
  explicit BasisFactor(const LpForm& form) : form_(form) {}

  /// Returns false when the basis is singular.
  bool factorize(const std::vector<int>& head);

  /// v <- B^{-1} v
  void ftran(std::vector<double>& v) const;
  /// v <- B^{-T} v
  void btran(std::vector<double>& v) const;

  /// Replaces basis column `pos` given alpha = B^{-1} a_q (before update).
  void update(int pos, const std::vector<double>& alpha);

  int num_updates() const { return static_cast<int>(etas_.size()); }

  /// Dense [A -I] column of variable j.
  void load_column(int j, std::vector<double>& v) const;

 private:
  struct Eta {
    int pos;
    double pivot;
    std::vector<int> index;
    std::vector<double> value;
  };

  const LpForm& form_;
  // transpose() is non-const in Eigen.
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  int m_ = 0;
};

}  // namespace gridsched::milp::detail
