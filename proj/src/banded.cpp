#include "viscotherm/banded.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace viscotherm {

BandedOperator::BandedOperator(int n, int bandwidth) : n_(n), bw_(bandwidth) {
  if (n <= 0 || bandwidth < 0) throw std::invalid_argument("BandedOperator: bad dimensions");
  data_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(width()), 0.0);
}

BandedOperator BandedOperator::identity(int n, int bandwidth) {
  BandedOperator op(n, bandwidth);
  for (int i = 0; i < n; ++i) op.ref(i, i) = 1.0;
  return op;
}

double BandedOperator::at(int row, int col) const {
  const int k = col - row;
  if (row < 0 || row >= n_ || col < 0 || col >= n_ || k < -bw_ || k > bw_) return 0.0;
  return data_[static_cast<std::size_t>(row) * width() + (k + bw_)];
}

double& BandedOperator::ref(int row, int col) {
  const int k = col - row;
  if (row < 0 || row >= n_ || col < 0 || col >= n_ || k < -bw_ || k > bw_) {
    throw std::out_of_range("BandedOperator: entry (" + std::to_string(row) + ", " +
                            std::to_string(col) + ") outside band");
  }
  return data_[static_cast<std::size_t>(row) * width() + (k + bw_)];
}

std::vector<double> BandedOperator::band(int offset) const {
  if (std::abs(offset) > bw_) throw std::out_of_range("BandedOperator: band outside bandwidth");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_ - std::abs(offset)));
  for (int i = std::max(0, -offset); i < n_ && i + offset < n_; ++i) {
    out.push_back(at(i, i + offset));
  }
  return out;
}

std::vector<double> BandedOperator::apply(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(n_)) {
    throw std::invalid_argument("BandedOperator::apply: size mismatch");
  }
  std::vector<double> y(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i) {
    const int lo = std::max(0, i - bw_);
    const int hi = std::min(n_ - 1, i + bw_);
    const double* row = &data_[static_cast<std::size_t>(i) * width()];
    double acc = 0.0;
    for (int j = lo; j <= hi; ++j) acc += row[j - i + bw_] * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

BandedOperator BandedOperator::compose(const BandedOperator& other) const {
  if (other.n_ != n_) throw std::invalid_argument("BandedOperator::compose: size mismatch");
  BandedOperator out(n_, bw_ + other.bw_);
  for (int i = 0; i < n_; ++i) {
    for (int k = std::max(0, i - bw_); k <= std::min(n_ - 1, i + bw_); ++k) {
      const double aik = at(i, k);
      if (aik == 0.0) continue;
      for (int j = std::max(0, k - other.bw_); j <= std::min(n_ - 1, k + other.bw_); ++j) {
        out.ref(i, j) += aik * other.at(k, j);
      }
    }
  }
  return out;
}

BandedOperator BandedOperator::combine(double alpha, const BandedOperator& other,
                                       double beta) const {
  if (other.n_ != n_) throw std::invalid_argument("BandedOperator::combine: size mismatch");
  BandedOperator out(n_, std::max(bw_, other.bw_));
  for (int i = 0; i < n_; ++i) {
    for (int j = std::max(0, i - out.bw_); j <= std::min(n_ - 1, i + out.bw_); ++j) {
      out.ref(i, j) = alpha * at(i, j) + beta * other.at(i, j);
    }
  }
  return out;
}

BandedOperator BandedOperator::scaled(double alpha) const {
  BandedOperator out = *this;
  for (double& a : out.data_) a *= alpha;
  return out;
}

void BandedOperator::set_identity_row(int row, double diag) {
  for (int j = std::max(0, row - bw_); j <= std::min(n_ - 1, row + bw_); ++j) ref(row, j) = 0.0;
  ref(row, row) = diag;
}

double BandedOperator::norm_inf() const {
  double best = 0.0;
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int k = 0; k < width(); ++k) s += std::abs(data_[static_cast<std::size_t>(i) * width() + k]);
    best = std::max(best, s);
  }
  return best;
}

bool BandedOperator::diagonally_dominant() const {
  for (int i = 0; i < n_; ++i) {
    double off = 0.0;
    for (int j = std::max(0, i - bw_); j <= std::min(n_ - 1, i + bw_); ++j) {
      if (j != i) off += std::abs(at(i, j));
    }
    if (std::abs(at(i, i)) < off) return false;
  }
  return true;
}

bool BandedOperator::is_symmetric(double tol) const {
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j <= std::min(n_ - 1, i + bw_); ++j) {
      if (std::abs(at(i, j) - at(j, i)) > tol) return false;
    }
  }
  return true;
}

}  // namespace viscotherm
