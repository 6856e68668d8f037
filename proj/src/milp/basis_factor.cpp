#include "basis_factor.hpp"

#include <cmath>

namespace gridsched::milp::detail {

bool BasisFactor::factorize(const std::vector<int>& head) {
  m_ = form_.m;
  etas_.clear();
  if (m_ == 0) return true;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(m_) * 3);
  for (int k = 0; k < m_; ++k) {
    const int j = head[k];
    if (j < form_.n) {
      for (int p = form_.col_start[j]; p < form_.col_start[j + 1]; ++p) {
        triplets.emplace_back(form_.col_row[p], k, form_.col_val[p]);
      }
    } else {
      triplets.emplace_back(j - form_.n, k, -1.0);
    }
  }
  Eigen::SparseMatrix<double> basis(m_, m_);
  basis.setFromTriplets(triplets.begin(), triplets.end());
  basis.makeCompressed();
  lu_.analyzePattern(basis);
  lu_.factorize(basis);
  if (lu_.info() != Eigen::Success) return false;
  // SparseLU accepts tiny pivots silently; reject near-singular bases.
  const double logdet = lu_.logAbsDeterminant();
  return std::isfinite(logdet);
}

void BasisFactor::ftran(std::vector<double>& v) const {
  if (m_ == 0) return;
  Eigen::Map<Eigen::VectorXd> rhs(v.data(), m_);
  Eigen::VectorXd x = lu_.solve(rhs);
  rhs = x;
  for (const auto& eta : etas_) {
    const double vr = v[eta.pos] / eta.pivot;
    if (vr != 0.0) {
      for (std::size_t k = 0; k < eta.index.size(); ++k) v[eta.index[k]] -= eta.value[k] * vr;
    }
    v[eta.pos] = vr;
  }
}

void BasisFactor::btran(std::vector<double>& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->pos];
    for (std::size_t k = 0; k < it->index.size(); ++k) s -= it->value[k] * v[it->index[k]];
    v[it->pos] = s / it->pivot;
  }
  Eigen::Map<Eigen::VectorXd> rhs(v.data(), m_);
  Eigen::VectorXd x = lu_.transpose().solve(rhs);
  rhs = x;
}

void BasisFactor::update(int pos, const std::vector<double>& alpha) {
  Eta eta;
  eta.pos = pos;
  eta.pivot = alpha[pos];
  for (int i = 0; i < m_; ++i) {
    if (i != pos && alpha[i] != 0.0) {
      eta.index.push_back(i);
      eta.value.push_back(alpha[i]);
    }
  }
  etas_.push_back(std::move(eta));
}

void BasisFactor::load_column(int j, std::vector<double>& v) const {
  v.assign(form_.m, 0.0);
  if (j < form_.n) {
    for (int p = form_.col_start[j]; p < form_.col_start[j + 1]; ++p) v[form_.col_row[p]] = form_.col_val[p];
  } else {
    v[j - form_.n] = -1.0;
  }
}

}  // namespace gridsched::milp::detail
