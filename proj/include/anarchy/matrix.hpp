#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "anarchy/errors.hpp"

namespace anarchy {

// Column sums of every allocation matrix produced anywhere must stay within
// this tolerance of 1.
inline constexpr double kColumnSumTol = 1e-12;

/// Dense n x m matrix of execution times, row-major, indexed (machine, task).
/// Holds both true times and declarations.
class CostMatrix {
 public:
  CostMatrix(std::size_t machines, std::size_t tasks, std::vector<double> entries)
      : n_(machines), m_(tasks), e_(std::move(entries)) {
    if (n_ < 1 || m_ < 1) throw input_error("cost matrix needs at least one machine and one task");
    if (e_.size() != n_ * m_) throw input_error("cost matrix entry count does not match n*m");
    for (double v : e_) {
      if (!std::isfinite(v) || v < 0.0)
        throw input_error("cost matrix entries must be finite and nonnegative");
    }
  }

  static CostMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty())
      throw input_error("cost matrix needs at least one machine and one task");
    const std::size_t m = rows.front().size();
    std::vector<double> e;
    e.reserve(rows.size() * m);
    for (const auto& r : rows) {
      if (r.size() != m) throw input_error("cost matrix rows must have equal length");
      e.insert(e.end(), r.begin(), r.end());
    }
    return CostMatrix(rows.size(), m, std::move(e));
  }

  static CostMatrix single_task(const std::vector<double>& column) {
    if (column.empty()) throw input_error("cost matrix needs at least one machine");
    return CostMatrix(column.size(), 1, column);
  }

  std::size_t machines() const { return n_; }
  std::size_t tasks() const { return m_; }

  double at(std::size_t i, std::size_t j) const { return e_[i * m_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    if (!std::isfinite(v) || v < 0.0)
      throw input_error("cost matrix entries must be finite and nonnegative");
    e_[i * m_ + j] = v;
  }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = at(i, j);
    return c;
  }
  std::vector<double> row(std::size_t i) const {
    return std::vector<double>(e_.begin() + i * m_, e_.begin() + (i + 1) * m_);
  }
  void set_row(std::size_t i, const std::vector<double>& r) {
    if (r.size() != m_) throw input_error("row length does not match task count");
    for (std::size_t j = 0; j < m_; ++j) set(i, j, r[j]);
  }

  double max_entry() const {
    double mx = 0.0;
    for (double v : e_) mx = std::max(mx, v);
    return mx;
  }

  const std::vector<double>& entries() const { return e_; }

  friend bool operator==(const CostMatrix& a, const CostMatrix& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.e_ == b.e_;
  }

 private:
  std::size_t n_, m_;
  std::vector<double> e_;
};

/// Per-task allocation probabilities (or fractions) a[i][j]; every column sums
/// to 1 within kColumnSumTol and entries lie in [0,1].
class AllocationMatrix {
 public:
  AllocationMatrix(std::size_t machines, std::size_t tasks, std::vector<double> entries)
      : n_(machines), m_(tasks), e_(std::move(entries)) {
    if (n_ < 1 || m_ < 1) throw input_error("allocation matrix needs at least one machine and task");
    if (e_.size() != n_ * m_) throw input_error("allocation matrix entry count does not match n*m");
    for (double& v : e_) {
      if (!std::isfinite(v)) throw input_error("allocation entries must be finite");
      // tolerate sign/overshoot noise from solver arithmetic, then clamp
      if (v < -kColumnSumTol || v > 1.0 + kColumnSumTol)
        throw input_error("allocation entries must lie in [0,1]");
      v = std::min(1.0, std::max(0.0, v));
    }
    for (std::size_t j = 0; j < m_; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n_; ++i) s += at(i, j);
      if (std::abs(s - 1.0) > kColumnSumTol)
        throw input_error("allocation column " + std::to_string(j) + " does not sum to 1");
    }
  }

  static AllocationMatrix from_columns(std::size_t machines, std::size_t tasks,
                                       const std::vector<std::vector<double>>& cols) {
    std::vector<double> e(machines * tasks);
    for (std::size_t j = 0; j < tasks; ++j)
      for (std::size_t i = 0; i < machines; ++i) e[i * tasks + j] = cols[j][i];
    return AllocationMatrix(machines, tasks, std::move(e));
  }

  std::size_t machines() const { return n_; }
  std::size_t tasks() const { return m_; }
  double at(std::size_t i, std::size_t j) const { return e_[i * m_ + j]; }
  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = at(i, j);
    return c;
  }
  const std::vector<double>& entries() const { return e_; }

  bool deterministic() const {
    for (double v : e_)
      if (v != 0.0 && v != 1.0) return false;
    return true;
  }

  friend bool operator==(const AllocationMatrix& a, const AllocationMatrix& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.e_ == b.e_;
  }

 private:
  std::size_t n_, m_;
  std::vector<double> e_;
};

/// Entry (i,j) = max{declared, true} time: what machine i actually spends on
/// task j if she receives it.
struct EffectiveTimes {
  std::size_t n = 0, m = 0;
  std::vector<double> entries;  // row-major

  double at(std::size_t i, std::size_t j) const { return entries[i * m + j]; }
};

/// Expected cost C_i per machine; their sum is the social welfare.
struct MachineCosts {
  std::vector<double> c;

  std::size_t machines() const { return c.size(); }
};

/// A makespan value tagged with how it was obtained.
struct MakespanEstimate {
  enum class Method { exact_enumeration, monte_carlo };

  double value = 0.0;
  Method method = Method::exact_enumeration;
  // monte-carlo only:
  std::optional<std::uint64_t> samples;
  std::optional<double> std_error;
  std::optional<std::uint64_t> seed;

  static MakespanEstimate exact(double v) {
    MakespanEstimate e;
    e.value = v;
    e.method = Method::exact_enumeration;
    return e;
  }
  static MakespanEstimate monte_carlo(double v, std::uint64_t samples, double std_error,
                                      std::uint64_t seed) {
    MakespanEstimate e;
    e.value = v;
    e.method = Method::monte_carlo;
    e.samples = samples;
    e.std_error = std_error;
    e.seed = seed;
    return e;
  }
};

inline const char* method_name(MakespanEstimate::Method m) {
  return m == MakespanEstimate::Method::exact_enumeration ? "exact-enumeration" : "monte-carlo";
}

}  // namespace anarchy
