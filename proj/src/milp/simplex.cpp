#include "simplex.hpp"

#include <algorithm>
#include <cmath>

namespace gridsched::milp::detail {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-12;
constexpr int kMaxRecoveries = 8;

}  // namespace

SimplexEngine::SimplexEngine(LpForm form, const SolverConfig& config)
    : form_(std::move(form)), config_(config), factor_(form_) {
  n_ = form_.n;
  m_ = form_.m;
  lower_ = form_.lower;
  upper_ = form_.upper;
  max_iterations_ = config_.max_lp_iterations;
  double cmax = 0.0;
  for (double c : form_.cost) cmax = std::max(cmax, std::abs(c));
  dual_tol_ = config_.opt_tol * std::max(1.0, cmax);
  x_.assign(n_ + m_, 0.0);
  position_.assign(n_ + m_, -1);
  reset_to_slack_basis();
}

double SimplexEngine::tol_lower(int j) const {
  return config_.feas_tol * std::max(1.0, std::abs(lower_[j]));
}

double SimplexEngine::tol_upper(int j) const {
  return config_.feas_tol * std::max(1.0, std::abs(upper_[j]));
}

void SimplexEngine::place_nonbasic(int j) {
  auto& s = state_[j];
  if (s == VarState::AtLower && lower_[j] == -kInf) s = upper_[j] < kInf ? VarState::AtUpper : VarState::AtZero;
  if (s == VarState::AtUpper && upper_[j] == kInf) s = lower_[j] > -kInf ? VarState::AtLower : VarState::AtZero;
  if (s == VarState::AtZero && lower_[j] > -kInf) s = VarState::AtLower;
  if (s == VarState::AtZero && upper_[j] < kInf) s = VarState::AtUpper;
  switch (s) {
    case VarState::AtLower: x_[j] = lower_[j]; break;
    case VarState::AtUpper: x_[j] = upper_[j]; break;
    case VarState::AtZero: x_[j] = 0.0; break;
    case VarState::Basic: break;
  }
}

void SimplexEngine::reset_to_slack_basis() {
  state_.assign(n_ + m_, VarState::AtLower);
  head_.resize(m_);
  std::fill(position_.begin(), position_.end(), -1);
  for (int j = 0; j < n_; ++j) place_nonbasic(j);
  for (int i = 0; i < m_; ++i) {
    state_[n_ + i] = VarState::Basic;
    head_[i] = n_ + i;
    position_[n_ + i] = i;
  }
  factored_ = false;
  primal_dirty_ = true;
}

void SimplexEngine::load_basis(const std::vector<VarState>& state) {
  if (state == state_) return;
  const auto basics = std::count(state.begin(), state.end(), VarState::Basic);
  if (static_cast<int>(state.size()) != n_ + m_ || basics != m_) {
    reset_to_slack_basis();
    return;
  }
  state_ = state;
  std::fill(position_.begin(), position_.end(), -1);
  int k = 0;
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] == VarState::Basic) {
      head_[k] = j;
      position_[j] = k++;
    } else {
      place_nonbasic(j);
    }
  }
  factored_ = false;
  primal_dirty_ = true;
}

void SimplexEngine::set_bounds(int j, double lower, double upper) {
  lower_[j] = lower;
  upper_[j] = upper;
  if (state_[j] != VarState::Basic) {
    if (lower == upper) state_[j] = VarState::AtLower;
    place_nonbasic(j);
    primal_dirty_ = true;
  }
}

bool SimplexEngine::refactor() {
  while (!factor_.factorize(head_)) {
    if (++recoveries_ > kMaxRecoveries) return false;
    reset_to_slack_basis();
  }
  factored_ = true;
  compute_primal();
  return true;
}

void SimplexEngine::compute_primal() {
  std::vector<double> rhs(m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
    if (j < n_) {
      for (int p = form_.col_start[j]; p < form_.col_start[j + 1]; ++p) {
        rhs[form_.col_row[p]] -= form_.col_val[p] * x_[j];
      }
    } else {
      rhs[j - n_] += x_[j];
    }
  }
  factor_.ftran(rhs);
  for (int k = 0; k < m_; ++k) x_[head_[k]] = rhs[k];
  primal_dirty_ = false;
}

double SimplexEngine::column_dot(int j, const std::vector<double>& y) const {
  if (j >= n_) return -y[j - n_];
  double s = 0.0;
  for (int p = form_.col_start[j]; p < form_.col_start[j + 1]; ++p) s += form_.col_val[p] * y[form_.col_row[p]];
  return s;
}

void SimplexEngine::compute_duals(const std::vector<double>& basic_costs) {
  y_ = basic_costs;
  factor_.btran(y_);
  d_.assign(n_ + m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] == VarState::Basic) continue;
    d_[j] = form_.cost[j] - column_dot(j, y_);
  }
}

double SimplexEngine::objective() const {
  double z = form_.offset;
  for (int j = 0; j < n_; ++j) z += form_.cost[j] * x_[j];
  return z;
}

std::vector<double> SimplexEngine::primal() const {
  return std::vector<double>(x_.begin(), x_.begin() + n_);
}

std::vector<double> SimplexEngine::duals() {
  if (!factored_ && !refactor()) return std::vector<double>(m_, 0.0);
  std::vector<double> cb(m_);
  for (int k = 0; k < m_; ++k) cb[k] = form_.cost[head_[k]];
  factor_.btran(cb);
  return cb;
}

void SimplexEngine::pivot(int pos, int entering, const std::vector<double>& alpha,
                          VarState leaving_state, double leaving_value) {
  const int leaving = head_[pos];
  factor_.update(pos, alpha);
  head_[pos] = entering;
  position_[entering] = pos;
  position_[leaving] = -1;
  state_[entering] = VarState::Basic;
  state_[leaving] = leaving_state;
  x_[leaving] = leaving_value;
}

void SimplexEngine::note_step(bool degenerate) {
  if (degenerate) {
    if (++stall_ >= config_.stall_threshold) bland_ = true;
  } else {
    stall_ = 0;
    bland_ = false;
  }
}

LpStatus SimplexEngine::solve_primal() {
  farkas_.clear();
  ray_.clear();
  if ((!factored_ || primal_dirty_) && !refactor()) return LpStatus::NumericalFailure;
  stall_ = 0;
  bland_ = false;
  std::vector<double> cb(m_), alpha;
  int numerical_retries = 0;

  for (;;) {
    if (iterations_ >= max_iterations_) return LpStatus::IterationLimit;
    if (factor_.num_updates() >= config_.refactor_interval && !refactor()) {
      return LpStatus::NumericalFailure;
    }

    bool phase1 = false;
    for (int k = 0; k < m_; ++k) {
      const int j = head_[k];
      if (x_[j] < lower_[j] - tol_lower(j)) {
        cb[k] = -1.0;
        phase1 = true;
      } else if (x_[j] > upper_[j] + tol_upper(j)) {
        cb[k] = 1.0;
        phase1 = true;
      } else {
        cb[k] = 0.0;
      }
    }
    if (!phase1) {
      for (int k = 0; k < m_; ++k) cb[k] = form_.cost[head_[k]];
    }
    std::vector<double> y = cb;
    factor_.btran(y);

    // Pricing.
    int entering = -1;
    double best = 0.0;
    double entering_d = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      const VarState s = state_[j];
      if (s == VarState::Basic || is_fixed(j)) continue;
      const double dj = (phase1 ? 0.0 : form_.cost[j]) - column_dot(j, y);
      bool eligible = false;
      if (s == VarState::AtLower) eligible = dj < -dual_tol_;
      else if (s == VarState::AtUpper) eligible = dj > dual_tol_;
      else eligible = std::abs(dj) > dual_tol_;
      if (!eligible) continue;
      if (bland_) {
        entering = j;
        entering_d = dj;
        break;
      }
      if (std::abs(dj) > best) {
        best = std::abs(dj);
        entering = j;
        entering_d = dj;
      }
    }

    if (entering < 0) {
      if (factor_.num_updates() > 0) {
        if (!refactor()) return LpStatus::NumericalFailure;
        continue;
      }
      if (phase1) {
        farkas_ = y;
        return LpStatus::Infeasible;
      }
      y_ = y;
      return LpStatus::Optimal;
    }

    const double dir = entering_d < 0.0 ? 1.0 : -1.0;
    factor_.load_column(entering, alpha);
    factor_.ftran(alpha);

    // Ratio test: x_q += dir * t, x_B -= dir * t * alpha.
    const double flip = upper_[entering] - lower_[entering];
    double bound_pass1 = kInf;
    struct Candidate {
      int pos;
      double ratio;
      double target;
    };
    std::vector<Candidate> candidates;
    for (int k = 0; k < m_; ++k) {
      const double a = alpha[k];
      if (std::abs(a) < kPivotTol) continue;
      const double rate = -dir * a;
      const int j = head_[k];
      double target = kInf;
      double tol = 0.0;
      if (x_[j] < lower_[j] - tol_lower(j)) {
        if (rate > 0.0) {
          target = lower_[j];
          tol = tol_lower(j);
        }
      } else if (x_[j] > upper_[j] + tol_upper(j)) {
        if (rate < 0.0) {
          target = upper_[j];
          tol = tol_upper(j);
        }
      } else if (rate > 0.0) {
        if (upper_[j] < kInf) {
          target = upper_[j];
          tol = tol_upper(j);
        }
      } else if (lower_[j] > -kInf) {
        target = lower_[j];
        tol = tol_lower(j);
      }
      if (target == kInf) continue;
      const double ratio = std::max(0.0, (target - x_[j]) / rate);
      candidates.push_back({k, ratio, target});
      bound_pass1 = std::min(bound_pass1, (std::abs(target - x_[j]) + tol) / std::abs(rate));
    }

    int leave = -1;
    double step = 0.0;
    if (bland_) {
      double min_ratio = kInf;
      for (const auto& c : candidates) min_ratio = std::min(min_ratio, c.ratio);
      for (const auto& c : candidates) {
        if (c.ratio <= min_ratio + kDegenerateStep &&
            (leave < 0 || head_[c.pos] < head_[candidates[leave].pos])) {
          leave = static_cast<int>(&c - candidates.data());
        }
      }
    } else {
      double best_alpha = 0.0;
      for (const auto& c : candidates) {
        if (c.ratio > bound_pass1) continue;
        const double a = std::abs(alpha[c.pos]);
        if (a > best_alpha) {
          best_alpha = a;
          leave = static_cast<int>(&c - candidates.data());
        }
      }
    }
    if (leave >= 0) step = candidates[leave].ratio;

    if (flip < kInf && (leave < 0 || flip <= step)) {
      // Bound flip, no basis change.
      for (int k = 0; k < m_; ++k) x_[head_[k]] -= dir * flip * alpha[k];
      state_[entering] = dir > 0 ? VarState::AtUpper : VarState::AtLower;
      x_[entering] = dir > 0 ? upper_[entering] : lower_[entering];
      ++iterations_;
      note_step(flip <= kDegenerateStep);
      continue;
    }
    if (leave < 0) {
      if (phase1) {
        if (++numerical_retries > kMaxRecoveries || !refactor()) return LpStatus::NumericalFailure;
        continue;
      }
      ray_.assign(n_, 0.0);
      if (entering < n_) ray_[entering] = dir;
      for (int k = 0; k < m_; ++k) {
        if (head_[k] < n_) ray_[head_[k]] = -dir * alpha[k];
      }
      return LpStatus::Unbounded;
    }

    const auto& c = candidates[leave];
    for (int k = 0; k < m_; ++k) x_[head_[k]] -= dir * step * alpha[k];
    x_[entering] += dir * step;
    const int leaving = head_[c.pos];
    const VarState leaving_state =
        c.target == lower_[leaving] ? VarState::AtLower : VarState::AtUpper;
    pivot(c.pos, entering, alpha, leaving_state, c.target);
    ++iterations_;
    note_step(step <= kDegenerateStep);
  }
}

LpStatus SimplexEngine::solve_dual(double cutoff) {
  farkas_.clear();
  ray_.clear();
  if ((!factored_ || primal_dirty_) && !refactor()) return LpStatus::NumericalFailure;
  stall_ = 0;
  bland_ = false;

  std::vector<double> cb(m_);
  auto refresh_duals = [&] {
    for (int k = 0; k < m_; ++k) cb[k] = form_.cost[head_[k]];
    compute_duals(cb);
  };
  refresh_duals();

  // Make the basis dual feasible by flipping boxed variables.
  bool flipped = false;
  for (int j = 0; j < n_ + m_; ++j) {
    const VarState s = state_[j];
    if (s == VarState::Basic || is_fixed(j)) continue;
    if (s == VarState::AtLower && d_[j] < -dual_tol_) {
      if (upper_[j] == kInf) return solve_primal();
      state_[j] = VarState::AtUpper;
      x_[j] = upper_[j];
      flipped = true;
    } else if (s == VarState::AtUpper && d_[j] > dual_tol_) {
      if (lower_[j] == -kInf) return solve_primal();
      state_[j] = VarState::AtLower;
      x_[j] = lower_[j];
      flipped = true;
    } else if (s == VarState::AtZero && std::abs(d_[j]) > dual_tol_) {
      return solve_primal();
    }
  }
  if (flipped) compute_primal();

  std::vector<double> rho, alpha_row(n_ + m_), alpha;
  int numerical_retries = 0;
  const double cutoff_tol = 1e-9 * (1.0 + std::abs(cutoff));

  for (;;) {
    if (iterations_ >= max_iterations_) return LpStatus::IterationLimit;
    if (factor_.num_updates() >= config_.refactor_interval) {
      if (!refactor()) return LpStatus::NumericalFailure;
      refresh_duals();
    }
    if (cutoff < kInf && objective() > cutoff + cutoff_tol) return LpStatus::Cutoff;

    // Leaving row: largest bound violation.
    int r = -1;
    double worst = 0.0;
    for (int k = 0; k < m_; ++k) {
      const int j = head_[k];
      double viol = 0.0;
      if (x_[j] < lower_[j] - tol_lower(j)) viol = lower_[j] - x_[j];
      else if (x_[j] > upper_[j] + tol_upper(j)) viol = x_[j] - upper_[j];
      if (viol <= 0.0) continue;
      if (bland_) {
        if (r < 0 || j < head_[r]) r = k;
      } else if (viol > worst) {
        worst = viol;
        r = k;
      }
    }
    if (r < 0) {
      if (factor_.num_updates() > 0) {
        if (!refactor()) return LpStatus::NumericalFailure;
        refresh_duals();
        continue;
      }
      for (int j = 0; j < n_ + m_; ++j) {
        const VarState s = state_[j];
        if (s == VarState::Basic || is_fixed(j)) continue;
        const bool bad = (s == VarState::AtLower && d_[j] < -dual_tol_) ||
                         (s == VarState::AtUpper && d_[j] > dual_tol_) ||
                         (s == VarState::AtZero && std::abs(d_[j]) > dual_tol_);
        if (bad) return solve_primal();
      }
      return LpStatus::Optimal;
    }

    const int p = head_[r];
    const bool below = x_[p] < lower_[p];
    const double target = below ? lower_[p] : upper_[p];
    const double delta = x_[p] - target;
    const double sgn = delta < 0.0 ? -1.0 : 1.0;

    rho.assign(m_, 0.0);
    rho[r] = 1.0;
    factor_.btran(rho);
    std::fill(alpha_row.begin(), alpha_row.end(), 0.0);
    for (int i = 0; i < m_; ++i) {
      const double ri = rho[i];
      if (std::abs(ri) < 1e-14) continue;
      for (int k = form_.row_start[i]; k < form_.row_start[i + 1]; ++k) {
        alpha_row[form_.row_col[k]] += ri * form_.row_val[k];
      }
      alpha_row[n_ + i] = -ri;
    }

    // Harris two-pass dual ratio test.
    double bound_pass1 = kInf;
    for (int j = 0; j < n_ + m_; ++j) {
      const VarState s = state_[j];
      if (s == VarState::Basic || is_fixed(j)) continue;
      const double at = sgn * alpha_row[j];
      if (s == VarState::AtLower && at > kPivotTol) {
        bound_pass1 = std::min(bound_pass1, (std::max(d_[j], 0.0) + dual_tol_) / at);
      } else if (s == VarState::AtUpper && at < -kPivotTol) {
        bound_pass1 = std::min(bound_pass1, (std::max(-d_[j], 0.0) + dual_tol_) / -at);
      } else if (s == VarState::AtZero && std::abs(at) > kPivotTol) {
        bound_pass1 = std::min(bound_pass1, (std::abs(d_[j]) + dual_tol_) / std::abs(at));
      }
    }
    int q = -1;
    double best_alpha = 0.0;
    double min_ratio = kInf;
    for (int j = 0; j < n_ + m_; ++j) {
      const VarState s = state_[j];
      if (s == VarState::Basic || is_fixed(j)) continue;
      const double at = sgn * alpha_row[j];
      double ratio = kInf;
      if (s == VarState::AtLower && at > kPivotTol) ratio = std::max(d_[j], 0.0) / at;
      else if (s == VarState::AtUpper && at < -kPivotTol) ratio = std::max(-d_[j], 0.0) / -at;
      else if (s == VarState::AtZero && std::abs(at) > kPivotTol) ratio = std::abs(d_[j]) / std::abs(at);
      else continue;
      if (bland_) {
        if (ratio < min_ratio - kDegenerateStep) {
          min_ratio = ratio;
          q = j;
        }
        continue;
      }
      if (ratio <= bound_pass1 && std::abs(at) > best_alpha) {
        best_alpha = std::abs(at);
        q = j;
      }
    }
    if (q < 0) {
      farkas_.resize(m_);
      for (int i = 0; i < m_; ++i) farkas_[i] = sgn * rho[i];
      return LpStatus::Infeasible;
    }

    factor_.load_column(q, alpha);
    factor_.ftran(alpha);
    const double arq = alpha[r];
    if (std::abs(arq - alpha_row[q]) > 1e-7 * (1.0 + std::abs(arq)) || std::abs(arq) < kPivotTol) {
      if (++numerical_retries > kMaxRecoveries || !refactor()) return LpStatus::NumericalFailure;
      refresh_duals();
      continue;
    }

    const double theta_d = d_[q] / alpha_row[q];
    for (int j = 0; j < n_ + m_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      d_[j] -= theta_d * alpha_row[j];
    }
    d_[q] = 0.0;
    d_[p] = -theta_d;

    const double theta_p = delta / arq;
    for (int k = 0; k < m_; ++k) x_[head_[k]] -= theta_p * alpha[k];
    x_[q] += theta_p;
    pivot(r, q, alpha, below ? VarState::AtLower : VarState::AtUpper, target);
    ++iterations_;
    note_step(std::abs(theta_d) <= kDegenerateStep);
  }
}

}  // namespace gridsched::milp::detail
