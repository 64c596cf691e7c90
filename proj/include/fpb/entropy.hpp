#pragma once

// Shannon and Renyi entropies, conditional Renyi variants, and mutual
// information measures over discrete joint tables. All logarithms base 2.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpb/discrimination.hpp"

namespace fpb {

inline constexpr double kProbabilityTol = 1e-10;

/// Order of a Renyi quantity: the Shannon limit, a finite alpha != 1, or infinity.
class Order {
 public:
  enum class Kind { shannon, finite, infinity };

  static Order shannon() { return Order(Kind::shannon, 1.0); }
  static Order infinity() { return Order(Kind::infinity, std::numeric_limits<double>::infinity()); }

  static Order finite(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw std::invalid_argument("Renyi order must be finite and positive, got " + std::to_string(alpha));
    }
    if (alpha == 1.0) throw std::invalid_argument("alpha = 1 is the Shannon order; use Order::shannon()");
    return Order(Kind::finite, alpha);
  }

  /// Maps a real to an order. Values within 1e-9 of 1 select the Shannon
  /// branch; +inf selects the min-entropy.
  static Order from_real(double alpha) {
    if (alpha == std::numeric_limits<double>::infinity()) return infinity();
    if (std::abs(alpha - 1.0) <= 1e-9) return shannon();
    return finite(alpha);
  }

  Kind kind() const { return kind_; }
  bool is_shannon() const { return kind_ == Kind::shannon; }
  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_infinite() const { return kind_ == Kind::infinity; }
  /// alpha; 1 for Shannon, +inf for min-entropy.
  double value() const { return value_; }

  friend bool operator==(const Order&, const Order&) = default;

 private:
  Order(Kind kind, double value) : kind_(kind), value_(value) {}

  Kind kind_;
  double value_;
};

namespace detail {

inline void check_probabilities(std::span<const double> p) {
  if (p.empty()) throw std::invalid_argument("empty distribution");
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("probabilities must be finite and nonnegative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kProbabilityTol) {
    throw std::invalid_argument("probabilities sum to " + std::to_string(sum) + ", not 1");
  }
}

inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Entropies of a nonnegative weight vector; no normalization check.
inline double shannon(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) h -= xlog2x(x);
  return h;
}

inline double power_sum(std::span<const double> p, double alpha) {
  double s = 0.0;
  for (double x : p) {
    if (x > 0.0) s += std::pow(x, alpha);
  }
  return s;
}

/// log2 of sum p_i^alpha, scaled by the largest entry so that large alpha
/// does not underflow.
inline double log2_power_sum(std::span<const double> p, double alpha) {
  const double m = p.empty() ? 0.0 : *std::max_element(p.begin(), p.end());
  if (m <= 0.0) return -std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (double x : p) {
    if (x > 0.0) s += std::pow(x / m, alpha);
  }
  return alpha * std::log2(m) + std::log2(s);
}

/// log2 of sum 2^l_i.
inline double log2_sum_exp2(std::span<const double> logs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double l : logs) m = std::max(m, l);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double l : logs) s += std::exp2(l - m);
  return m + std::log2(s);
}

inline double renyi(std::span<const double> p, const Order& order) {
  switch (order.kind()) {
    case Order::Kind::shannon: return shannon(p);
    case Order::Kind::infinity: return -std::log2(*std::max_element(p.begin(), p.end()));
    case Order::Kind::finite: break;
  }
  const double alpha = order.value();
  return log2_power_sum(p, alpha) / (1.0 - alpha);
}

}  // namespace detail

/// Probability vector summing to 1 within 1e-10.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) { detail::check_probabilities(probs_); }
  Distribution(std::initializer_list<double> probs) : Distribution(std::vector<double>(probs)) {}

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  std::vector<double> probs_;
};

/// Which variable is conditioned on.
enum class Direction {
  rows_given_columns,  // H(X|Y) with X indexing rows
  columns_given_rows,  // H(Y|X)
};

/// Conditional Renyi entropy definitions: (1) average of per-column
/// entropies, (2) chain-rule difference, (4) log of averaged power sums.
enum class Variant { first = 1, second = 2, fourth = 4 };

/// Joint probability table p(x, y), x indexing rows.
class JointDistribution {
 public:
  JointDistribution(std::size_t rows, std::size_t cols, std::vector<double> table)
      : rows_(rows), cols_(cols), table_(std::move(table)) {
    if (rows == 0 || cols == 0 || table_.size() != rows * cols) throw std::invalid_argument("joint table shape mismatch");
    detail::check_probabilities(table_);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return table_[r * cols_ + c]; }
  std::span<const double> flat() const { return table_; }

  std::vector<double> row_marginal() const {
    std::vector<double> m(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) m[r] += (*this)(r, c);
    return m;
  }

  std::vector<double> column_marginal() const {
    std::vector<double> m(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) m[c] += (*this)(r, c);
    return m;
  }

  JointDistribution transposed() const {
    std::vector<double> t(table_.size());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t[c * rows_ + r] = (*this)(r, c);
    return JointDistribution(cols_, rows_, std::move(t));
  }

  /// Oriented so that the conditioned variable indexes rows.
  JointDistribution oriented(Direction d) const { return d == Direction::rows_given_columns ? *this : transposed(); }

  /// p(x | y = col); empty when p(y) = 0.
  std::vector<double> conditional_given_column(std::size_t col) const {
    const double py = column_marginal()[col];
    if (py <= 0.0) return {};
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, col) / py;
    return out;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> table_;
};

inline double shannon_entropy(const Distribution& d) { return detail::shannon(d.probs()); }

inline double renyi_entropy(const Distribution& d, const Order& order) { return detail::renyi(d.probs(), order); }

/// h(p) = -p log p - (1 - p) log(1 - p).
inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy argument must lie in [0, 1]");
  return -detail::xlog2x(p) - detail::xlog2x(1.0 - p);
}

inline double joint_entropy(const JointDistribution& j, const Order& order = Order::shannon()) {
  return detail::renyi(j.flat(), order);
}

/// Standard conditional entropy: sum over conditioning values y of p(y) H(X|y).
inline double conditional_std(const JointDistribution& j, Direction direction) {
  const JointDistribution t = j.oriented(direction);
  const auto py = t.column_marginal();
  double h = 0.0;
  for (std::size_t c = 0; c < t.cols(); ++c) {
    if (py[c] <= 0.0) continue;
    h += py[c] * detail::shannon(t.conditional_given_column(c));
  }
  return h;
}

inline double conditional_renyi(const JointDistribution& j, const Order& order, Variant variant, Direction direction) {
  if (order.is_infinite() && variant != Variant::first) {
    throw std::invalid_argument("conditional Renyi variants 2 and 4 are not defined at infinite order");
  }
  if (order.is_shannon() && variant != Variant::second) return conditional_std(j, direction);

  const JointDistribution t = j.oriented(direction);
  const auto py = t.column_marginal();
  switch (variant) {
    case Variant::first: {
      double h = 0.0;
      for (std::size_t c = 0; c < t.cols(); ++c) {
        if (py[c] <= 0.0) continue;
        h += py[c] * detail::renyi(t.conditional_given_column(c), order);
      }
      return h;
    }
    case Variant::second:
      return detail::renyi(t.flat(), order) - detail::renyi(py, order);
    case Variant::fourth: {
      const double alpha = order.value();
      std::vector<double> logs;
      for (std::size_t c = 0; c < t.cols(); ++c) {
        if (py[c] <= 0.0) continue;
        logs.push_back(std::log2(py[c]) + detail::log2_power_sum(t.conditional_given_column(c), alpha));
      }
      return detail::log2_sum_exp2(logs) / (1.0 - alpha);
    }
  }
  throw std::invalid_argument("unknown conditional Renyi variant");
}

/// I(X;Y) = H(X) + H(Y) - H(X,Y).
inline double mutual_information(const JointDistribution& j) {
  return detail::shannon(j.row_marginal()) + detail::shannon(j.column_marginal()) - detail::shannon(j.flat());
}

/// R_alpha(X) - R_alpha^(variant)(X|Y), X being the conditioned variable.
inline double alpha_mutual_information(const JointDistribution& j, const Order& order, Variant variant,
                                       Direction direction) {
  const JointDistribution t = j.oriented(direction);
  return detail::renyi(t.row_marginal(), order) - conditional_renyi(t, order, variant, Direction::rows_given_columns);
}

// Alice/Bob/Eve tables over error-free sifted bits. Rows: Bob's bit b' in
// {0, 1}. Columns: Eve's outcome e' in {0, 1, ?}.

inline constexpr std::size_t kEveInconclusive = 2;

inline JointDistribution joint_from_outcome_probs(const OutcomeProbs& q) {
  const double s = 0.5 * q.q_success;
  const double e = 0.5 * q.q_error;
  const double u = 0.5 * q.q_inconclusive;
  return JointDistribution(2, 3, {s, e, u, e, s, u});
}

/// p(b' = j | e' = j) = Q_S / (1 - Q_?); 1 by convention when Q_? = 1.
inline double conditional_success(const OutcomeProbs& q) {
  const double conclusive = 1.0 - q.q_inconclusive;
  return conclusive > 0.0 ? q.q_success / conclusive : 1.0;
}

/// H(E') = 1 - Q_? + h(Q_?).
inline double eve_outcome_entropy(const OutcomeProbs& q) {
  return 1.0 - q.q_inconclusive + binary_entropy(std::clamp(q.q_inconclusive, 0.0, 1.0));
}

/// I(B'; E') = 1 - Q_? - (1 - Q_?) log(1 - Q_?) + Q_S log Q_S + Q_E log Q_E.
inline double closed_form_I_std(const OutcomeProbs& q) {
  const double conclusive = 1.0 - q.q_inconclusive;
  return conclusive - detail::xlog2x(conclusive) + detail::xlog2x(q.q_success) + detail::xlog2x(q.q_error);
}

/// I_inf^(1)(B'; E') = 1 - Q_? - (1 - Q_?) log(1 - Q_?) + (1 - Q_?) log Q_S.
inline double closed_form_I_inf(const OutcomeProbs& q) {
  const double conclusive = 1.0 - q.q_inconclusive;
  if (conclusive <= 0.0) return 0.0;
  return conclusive - detail::xlog2x(conclusive) + conclusive * std::log2(q.q_success);
}

/// First-type alpha-mutual information I_alpha^(1)(B'; E') in closed form.
///
/// Finite alpha uses the power-sum expression; the Shannon order falls back
/// to closed_form_I_std and infinity to closed_form_I_inf. Returns 0 when
/// every outcome is inconclusive.
inline double closed_form_I1(const Order& order, const OutcomeProbs& q) {
  if (order.is_shannon()) return closed_form_I_std(q);
  if (order.is_infinite()) return closed_form_I_inf(q);
  const double conclusive = 1.0 - q.q_inconclusive;
  if (conclusive <= 0.0) return 0.0;
  const double alpha = order.value();
  const std::array<double, 2> conclusive_probs{q.q_success, q.q_error};
  const double log_sum = detail::log2_power_sum(conclusive_probs, alpha);
  return conclusive * (1.0 - log_sum / (1.0 - alpha) + alpha * std::log2(conclusive) / (1.0 - alpha));
}

/// Asymptotic BB84 key rate max{1 - 2h(delta), 0}.
inline double shor_preskill_rate(double delta) {
  if (!(delta >= 0.0 && delta <= 0.5)) throw std::invalid_argument("error rate must lie in [0, 1/2]");
  return std::max(1.0 - 2.0 * binary_entropy(delta), 0.0);
}

}  // namespace fpb
