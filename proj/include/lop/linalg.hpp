#pragma once

#include <climits>
#include <vector>

#include "lop/padic.hpp"

namespace lop {

class PadicMatrix {
 public:
  PadicMatrix() = default;
  PadicMatrix(unsigned p, std::size_t rows, std::size_t cols, long precision);
  static PadicMatrix identity(unsigned p, std::size_t n, long precision);
  static PadicMatrix from_integers(unsigned p, const std::vector<std::vector<long>>& rows, long precision);

  unsigned prime() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  PadicNumber& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const PadicNumber& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  PadicMatrix operator*(const PadicMatrix& o) const;
  PadicMatrix operator+(const PadicMatrix& o) const;
  PadicMatrix operator-(const PadicMatrix& o) const;
  PadicMatrix transpose() const;
  std::vector<PadicNumber> apply(const std::vector<PadicNumber>& v) const;
  long precision() const;  // min over entries
  long min_valuation() const;

 private:
  unsigned p_ = 0;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<PadicNumber> data_;
};

struct LinearSolution {
  // One particular solution per right-hand-side column (free variables set to 0).
  std::vector<std::vector<PadicNumber>> solutions;
  std::vector<std::vector<PadicNumber>> kernel;
  std::size_t rank = 0;
  long precision = 0;    // guaranteed absolute precision of the solutions
  long pivot_loss = 0;   // sum of pivot valuations
};

// Gaussian elimination with minimal-valuation pivoting for A X = B.
// Entries of valuation >= zero_threshold count as zero.
LinearSolution solve_linear(const PadicMatrix& A, const PadicMatrix& B, long zero_threshold = LONG_MAX);
LinearSolution solve_linear(const PadicMatrix& A, const std::vector<PadicNumber>& b, long zero_threshold = LONG_MAX);

// Coefficients c_0..c_n of det(x I - A) (c_n = 1), division free.
std::vector<PadicNumber> charpoly(const PadicMatrix& A);

struct NewtonSlope {
  mpq_class slope;  // valuation of the eigenvalues on this segment
  long multiplicity = 0;
};

// Lower convex hull of (i, v(c_i)); slopes reported as root valuations,
// sorted increasingly. Throws PrecisionError when the hull is not certified.
std::vector<NewtonSlope> newton_slopes(const std::vector<PadicNumber>& coefficients);

}  // namespace lop
